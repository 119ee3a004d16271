#pragma once

// Command-line front end: `run`, `compare` and `validate`.
// Exit codes: 0 ok, 1 bad configuration or usage, 2 I/O failure.

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "wbasn/config_io.hpp"
#include "wbasn/csv.hpp"
#include "wbasn/engine.hpp"

namespace wbasn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;

struct RunRequest {
  std::string config_path = "defaults";
  std::string protocol;  // empty keeps the configured protocol
  std::optional<int> rounds;
  std::vector<std::uint64_t> seeds;  // empty keeps the configured seed
  std::string output_path;
};

/// "defaults" (or an empty path) means the built-in configuration.
inline SimConfig resolve_config(const RunRequest& req) {
  SimConfig cfg = (req.config_path.empty() || req.config_path == "defaults") ? SimConfig{}
                                                                             : load_config(req.config_path);
  if (!req.protocol.empty()) {
    auto p = parse_protocol(req.protocol);
    if (!p) throw ConfigFileError(ConfigFileErrorKind::ParseError, "protocol", 0, "unknown protocol '" + req.protocol + "'");
    cfg.protocol = *p;
  }
  if (req.rounds) cfg.rounds = *req.rounds;
  return validate_config(cfg);
}

/// `m.csv` with seed 3 becomes `m_seed3.csv`.
inline std::string seeded_path(const std::string& path, std::uint64_t seed) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + "_seed" + std::to_string(seed));
  out += p.extension();
  return out.string();
}

inline void ensure_parent(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError(parent.string(), ec.message());
}

inline std::vector<std::uint64_t> seeds_or_default(const RunRequest& req, const SimConfig& cfg) {
  return req.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : req.seeds;
}

inline void command_run(const RunRequest& req, std::ostream& out) {
  const SimConfig base = resolve_config(req);
  const std::string target = req.output_path.empty() ? "metrics.csv" : req.output_path;
  const auto seeds = seeds_or_default(req, base);
  for (std::uint64_t seed : seeds) {
    SimConfig cfg = base;
    cfg.seed = seed;
    const RunResult r = run(cfg);
    const std::string path = seeds.size() == 1 ? target : seeded_path(target, seed);
    ensure_parent(path);
    write_metrics_csv(r.rows, r.summary, path);
    out << path << '\n';
  }
}

inline void command_compare(const RunRequest& req, std::ostream& out) {
  const SimConfig base = resolve_config(req);
  const std::filesystem::path dir = req.output_path.empty() ? "." : req.output_path;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());

  const auto seeds = seeds_or_default(req, base);
  const Protocol protocols[] = {Protocol::MultiHop, Protocol::Attempt, Protocol::MAttempt};

  struct Job {
    Protocol protocol;
    std::uint64_t seed;
    std::future<RunResult> result;
  };
  std::vector<Job> jobs;
  for (Protocol p : protocols) {
    for (std::uint64_t seed : seeds) {
      SimConfig cfg = base;
      cfg.protocol = p;
      cfg.seed = seed;
      jobs.push_back({p, seed, std::async(std::launch::async, [cfg] { return run(cfg); })});
    }
  }

  std::vector<RunResult> results;
  results.reserve(jobs.size());
  for (Job& j : jobs) results.push_back(j.result.get());

  std::vector<LabeledRun> labeled;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const std::string name = std::string(to_string(jobs[k].protocol)) + "_seed" + std::to_string(jobs[k].seed) + ".csv";
    const std::string path = (dir / name).string();
    write_metrics_csv(results[k].rows, results[k].summary, path);
    out << path << '\n';
    labeled.push_back({jobs[k].protocol, jobs[k].seed, &results[k].rows});
  }
  const std::string merged = (dir / "comparison.csv").string();
  write_text_file(merged, comparison_csv(labeled));
  out << merged << '\n';
}

inline void command_validate(const RunRequest& req, std::ostream& out) {
  const SimConfig cfg = resolve_config(req);
  out << "ok: " << to_string(cfg.protocol) << ", " << cfg.node_count << " nodes, " << cfg.rounds << " rounds\n";
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Round-based body sensor network simulator"};
  app.require_subcommand(1);

  RunRequest req;
  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", req.config_path, "YAML configuration file, or 'defaults'");
    sub->add_option("--protocol", req.protocol, "multihop | attempt | m-attempt");
    sub->add_option("--rounds", req.rounds, "Override the number of rounds");
    sub->add_option("--seed", req.seeds, "Seed or comma-separated seed list")->delimiter(',');
    if (with_out) sub->add_option("--out", req.output_path, "Output CSV path (run) or directory (compare)");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "Single simulation run");
  CLI::App* compare_cmd = app.add_subcommand("compare", "All three protocols over the same seeds");
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a configuration and exit");
  add_common(run_cmd, true);
  add_common(compare_cmd, true);
  add_common(validate_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*run_cmd) command_run(req, out);
    else if (*compare_cmd) command_compare(req, out);
    else command_validate(req, out);
  } catch (const ConfigFileError& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ConfigFileErrorKind::Io ? kExitIo : kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace wbasn
