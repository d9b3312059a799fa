#include "hba/json_util.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hba/errors.hpp"

namespace hba {

namespace {

// Walks already-validated JSON text and records the line where each value
// starts. Only needs to be right on valid input.
class LineScanner {
 public:
  LineScanner(const std::string& text, std::map<std::string, std::size_t>& out)
      : text_(text), out_(out) {}

  void run() {
    skip_ws();
    value("");
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
      } else if (c != ' ' && c != '\t' && c != '\r') {
        break;
      }
      ++pos_;
    }
  }

  std::string string_token() {
    std::string s;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        s += text_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      s += text_[pos_++];
    }
    ++pos_;
    return s;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  void value(const std::string& pointer) {
    out_[pointer] = line_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      std::size_t index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) ==
                                        std::string_view::npos) {
        ++pos_;
      }
    }
  }

  const std::string& text_;
  std::map<std::string, std::size_t>& out_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

std::map<std::string, std::size_t> json_value_lines(const std::string& text) {
  std::map<std::string, std::size_t> lines;
  LineScanner(text, lines).run();
  return lines;
}

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
      if (text[k] == '\n') ++line;
    }
    std::ostringstream msg;
    msg << what << ": parse error at byte offset " << offset << " (line " << line << ")";
    if (offset >= text.size()) msg << ", unexpected end of input";
    throw ConfigError(msg.str(), line);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace hba
