// hba: run experiments, replay match records, serve the match API.
//
// Exit codes: 0 ok, 2 bad configuration or input, 3 runtime failure.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hba/eval.hpp"
#include "hba/http_server.hpp"
#include "hba/json_util.hpp"
#include "hba/log.hpp"
#include "hba/match_record.hpp"
#include "hba/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

// A path, or the name of a shipped preset ("fig3a-desk").
std::string resolve_config(const std::string& name) {
  if (fs::exists(name)) return name;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("HBA_PRESET_DIR")) dirs.emplace_back(env);
#ifdef HBA_SOURCE_PRESET_DIR
  dirs.emplace_back(HBA_SOURCE_PRESET_DIR);
#endif
#ifdef HBA_INSTALL_PRESET_DIR
  dirs.emplace_back(HBA_INSTALL_PRESET_DIR);
#endif
  for (const auto& d : dirs) {
    const auto p = d / (name + ".json");
    if (fs::exists(p)) return p.string();
  }
  throw hba::ConfigError("no config file or preset named '" + name + "'");
}

struct EvalArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> episodes;
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  auto config = hba::load_experiment_config(resolve_config(args.config));
  if (args.seed) config.estimator.seed = *args.seed;
  if (args.workers) config.estimator.workers = *args.workers;
  if (args.episodes) config.estimator.episodes = *args.episodes;
  const std::string out = args.out.empty() ? "results/" + config.name : args.out;

  const auto results = hba::run_experiments(config);
  hba::write_results(config, results, out);

  std::cout << config.name << ": K=" << config.estimator.episodes
            << " seed=" << config.estimator.seed << "\n";
  std::cout << std::left << std::setw(10) << "agent" << std::right << std::setw(10) << "F" << std::setw(12)
            << "E" << std::setw(12) << "E.se" << "\n";
  for (const auto& r : results) {
    std::cout << std::left << std::setw(10) << r.agent << std::right << std::fixed
              << std::setprecision(4) << std::setw(10) << r.estimate.flexibility << std::setw(12)
              << r.estimate.efficiency << std::setw(12) << r.estimate.efficiency_se << "\n";
  }
  std::cout << "results in " << out << "\n";
  return kOk;
}

void print_record(const hba::MatchRecord& record, std::ostream& out) {
  const auto game = hba::MatrixGame::by_name(record.game, record.rounds);
  out << "match " << record.match_index + 1 << " of session "
      << (record.session.empty() ? "-" : record.session) << ": " << record.game << " vs "
      << record.opponent << " (seed " << record.seed << ")\n";
  out << std::setw(5) << "round" << std::setw(7) << "human" << std::setw(7) << "agent"
      << std::setw(10) << "payoffs" << std::setw(12) << "totals" << "  posterior argmax\n";
  for (const auto& r : record.history) {
    std::string best = "-";
    double top = -1.0;
    for (const auto& [name, p] : r.posterior) {
      if (p > top + 1e-12) {
        top = p;
        best = name;
      } else if (std::abs(p - top) <= 1e-12) {
        best += "|" + name;
      }
    }
    std::ostringstream pay, tot;
    pay << r.human_payoff << "/" << r.agent_payoff;
    tot << r.human_total << "/" << r.agent_total;
    out << std::setw(5) << r.round << std::setw(7) << game.action_label(0, r.human) << std::setw(7)
        << game.action_label(1, r.agent) << std::setw(10) << pay.str() << std::setw(12) << tot.str()
        << "  " << best << "\n";
  }
  const auto s = hba::match_stats(record);
  out << "totals: human " << s.human_total << ", agent " << s.agent_total << "; welfare "
      << s.welfare << ", fairness " << s.fairness << "\n";
  out << "rounds won/drawn/lost by the human: " << s.wins << "/" << s.draws << "/" << s.losses << "\n";
  std::ostringstream duration;
  duration << std::fixed << std::setprecision(2) << s.switches.mean_duration;
  out << "human type switches: q = " << s.switches.types << ", mean duration = " << duration.str() << "\n";
}

int cmd_replay(const std::string& path) {
  const std::string text = hba::read_text_file(path);
  const json root = hba::parse_json_text(text, path);
  std::vector<hba::MatchRecord> records;
  if (root.is_object() && root.contains("matches") && root["matches"].is_array()) {
    for (const auto& m : root["matches"]) {
      if (!m.contains("record")) throw hba::ConfigError(path + ": summary match without a record");
      records.push_back(hba::match_record_from_json(m["record"]));
    }
  } else {
    records.push_back(hba::match_record_from_json(root));
  }
  int status = kOk;
  for (const auto& record : records) {
    print_record(record, std::cout);
    const auto check = hba::verify_match_record(record);
    if (check.ok) {
      std::cout << "replay: " << check.rounds << " rounds reproduced\n\n";
    } else {
      std::cout << "replay: MISMATCH at " << check.mismatch << "\n\n";
      status = kRuntimeError;
    }
  }
  return status;
}

struct ServeArgs {
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string config;
  std::optional<std::uint64_t> seed;
};

int cmd_serve(const ServeArgs& args) {
  hba::ServiceOptions service_options;
  hba::HttpOptions http;
  http.host = args.host;
  http.port = args.port;
  if (!args.config.empty()) {
    const std::string text = hba::read_text_file(args.config);
    const json j = hba::parse_json_text(text, args.config);
    const auto lines = hba::json_value_lines(text);
    auto line_of = [&](const std::string& p) {
      auto it = lines.find(p);
      return it == lines.end() ? std::size_t{0} : it->second;
    };
    if (!j.is_object()) throw hba::ConfigError(args.config + ":1: expected an object", 1);
    for (const auto& [key, value] : j.items()) {
      const std::size_t line = line_of("/" + key);
      const std::string at = args.config + ":" + std::to_string(line) + ": /" + key + ": ";
      if (key == "rounds") {
        if (!value.is_number_integer() || value.get<int>() < 1) throw hba::ConfigError(at + "expected a positive integer", line);
        service_options.rounds = value.get<int>();
      } else if (key == "data_dir" || key == "static_dir" || key == "cors_origin" || key == "host") {
        if (!value.is_string()) throw hba::ConfigError(at + "expected a string", line);
        const auto v = value.get<std::string>();
        if (key == "data_dir") service_options.data_dir = v;
        if (key == "static_dir") http.static_dir = v;
        if (key == "cors_origin") http.cors_origin = v;
        if (key == "host") http.host = v;
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) throw hba::ConfigError(at + "expected a nonnegative integer", line);
        service_options.seed = value.get<std::uint64_t>();
      } else {
        throw hba::ConfigError(at + "unknown key '" + key + "'", line);
      }
    }
  }
  if (args.seed) service_options.seed = *args.seed;

  // Signals are taken synchronously by this thread; the server threads
  // inherit the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  hba::MatchService service(service_options);
  hba::HttpServer server(service, http);
  const int port = server.bind();
  std::cout << "hba serve: listening on http://" << http.host << ":" << port << std::endl;
  std::thread worker([&] { server.run(); });
  int sig = 0;
  sigwait(&signals, &sig);
  std::cout << "hba serve: shutting down (signal " << sig << ")" << std::endl;
  server.stop();
  worker.join();
  return kOk;
}

int cmd_list_types(const std::string& domain) {
  auto show = [](const std::string& title, const std::vector<std::string>& names) {
    std::cout << title << ":";
    for (const auto& n : names) std::cout << " " << n;
    std::cout << "\n";
  };
  if (domain.empty() || domain == "PD" || domain == "RPS") {
    for (const char* g : {"PD", "RPS"}) {
      if (!domain.empty() && domain != g) continue;
      const auto game = hba::MatrixGame::by_name(g);
      show(std::string(g) + " types", hba::matrix_type_names(game));
      show(std::string(g) + " agents", {"HBA", "JAL", "CJAL"});
    }
  }
  if (domain.empty() || domain == "foraging") {
    show("foraging types", {"H1", "H2", "H3", "H4", "H<k>(<sight>)", "c1", "c2", "c3", "c4", "JAL", "CJAL"});
    show("foraging agents", hba::foraging_agent_labels());
  }
  if (!domain.empty() && domain != "PD" && domain != "RPS" && domain != "foraging") {
    throw hba::ConfigError("unknown domain '" + domain + "'");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ad hoc coordination with HBA: experiments, match replays and the match service"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hba 0.1.0");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Estimate flexibility and efficiency for a config");
  eval->add_option("--config,config", eval_args.config, "Config file or preset name")->required();
  eval->add_option("--seed", eval_args.seed, "Root seed override");
  eval->add_option("--out", eval_args.out, "Output directory (default results/<name>)");
  eval->add_option("--workers", eval_args.workers, "Worker threads")->check(CLI::PositiveNumber);
  eval->add_option("--episodes", eval_args.episodes, "Episode count override")->check(CLI::PositiveNumber);

  std::string record_path;
  auto* replay = app.add_subcommand("replay", "Print and verify a match record");
  replay->add_option("record", record_path, "Match record or session summary JSON")->required();

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the match service");
  serve->add_option("--port", serve_args.port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", serve_args.host, "Bind address");
  serve->add_option("--config", serve_args.config, "Service config JSON");
  serve->add_option("--seed", serve_args.seed, "Root seed for sessions");

  std::string domain;
  auto* list = app.add_subcommand("list-types", "List the available types and agents");
  list->add_option("--domain,domain", domain, "PD, RPS or foraging");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_args);
    if (replay->parsed()) return cmd_replay(record_path);
    if (serve->parsed()) return cmd_serve(serve_args);
    if (list->parsed()) return cmd_list_types(domain);
  } catch (const hba::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
