//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

// tomolens: batch front end.
//
//   tomolens run    --qubits N --theta ... --phi ... --shots ... [--settings ...]
//   tomolens sweep  --qubits N --trials T --shots-grid a,b,... [--out FILE]
//   tomolens serve  [--addr HOST[:PORT]] [--port PORT]
//
// Exit codes: 0 success, 1 internal error, 2 invalid input.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tomolens/tomolens.hpp"
#include "tomolens/service.hpp"
#include "tomolens/http_server.hpp"

#include "CLI11.hpp"

namespace {

using namespace tomolens;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(item);
  return out;
}

std::int64_t parse_count(const std::string &text, const char *what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception &) {
    throw UsageError(std::string("invalid ") + what + " \"" + text + "\"");
  }
  if (used != text.size())
    throw UsageError(std::string("invalid ") + what + " \"" + text + "\"");
  if (v < 0)
    throw UsageError(std::string(what) + " must be non-negative");
  return v;
}

void write_output(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open output file " + path);
  f << text;
}

/// Random true parameters drawn from the run seed when --theta/--phi are
/// omitted: thetas uniform in [0, pi], phis uniform in [0, 2pi).
PolarParams random_true_params(int n_qubits, std::uint64_t seed) {
  Rng rng = make_stream(seed, StreamDomain::kTrueParams, 0);
  return PolarParams::from_flat(n_qubits, random_start(n_qubits, rng));
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  int qubits = 1;
  std::vector<double> theta;
  std::vector<double> phi;
  std::string angle_unit = "deg";
  std::string shots = "1000";
  std::string settings;
  std::uint64_t seed = 0;
  int restarts = 8;
  std::string output = "json";
  std::string out;
};

Json run_request_json(const RunOptions &o) {
  Json req{{"n_qubits", o.qubits}, {"seed", o.seed}, {"restarts", o.restarts}};
  if (o.theta.empty() != o.phi.empty())
    throw UsageError("--theta and --phi must be given together");
  if (o.theta.empty()) {
    const PolarParams p = random_true_params(o.qubits, o.seed);
    req["angle_unit"] = "rad";
    req["thetas"] = p.thetas();
    req["phis"] = p.phis();
  } else {
    req["angle_unit"] = o.angle_unit;
    req["thetas"] = o.theta;
    req["phis"] = o.phi;
  }
  const auto shot_items = split_commas(o.shots);
  if (shot_items.size() == 1) {
    req["shots"] = parse_count(shot_items[0], "shot count");
  } else if (shot_items.size() == 3) {
    Json list = Json::array();
    for (const auto &s : shot_items)
      list.push_back(parse_count(s, "shot count"));
    req["shots"] = list;
  } else {
    throw UsageError("--shots takes one count or Nx,Ny,Nz");
  }
  if (!o.settings.empty())
    req["settings"] = split_commas(o.settings);
  return req;
}

std::string format_table(const ExperimentReport &rep, AngleUnit unit) {
  const char *u = unit == AngleUnit::kDegrees ? "deg" : "rad";
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "qubits      %d\nseed        %llu\n", rep.spec.n_qubits,
                static_cast<unsigned long long>(rep.spec.seed));
  os << buf;
  os << "records\n";
  for (const auto &r : rep.records) {
    std::snprintf(buf, sizeof buf, "  %-8s %10lld shots %10lld (+1)\n", r.setting.str().c_str(),
                  static_cast<long long>(r.shots), static_cast<long long>(r.plus_count));
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "parameter   %12s %12s   (%s)\n", "true", "estimated", u);
  os << buf;
  const auto &tp = rep.spec.true_params;
  const auto &ep = rep.result.estimated_params;
  for (std::size_t i = 0; i < tp.count(); ++i) {
    std::snprintf(buf, sizeof buf, "  theta_%-3zu %12.4f %12.4f\n", i + 1,
                  to_user_angle(tp.thetas()[i], unit), to_user_angle(ep.thetas()[i], unit));
    os << buf;
  }
  for (std::size_t i = 0; i < tp.count(); ++i) {
    std::snprintf(buf, sizeof buf, "  phi_%-5zu %12.4f %12.4f\n", i + 1,
                  to_user_angle(tp.phis()[i], unit), to_user_angle(ep.phis()[i], unit));
    os << buf;
  }
  os << "bloch vectors (true | estimated)\n";
  for (std::size_t q = 0; q < rep.per_qubit_bloch_true.size(); ++q) {
    const auto &a = rep.per_qubit_bloch_true[q];
    const auto &b = rep.per_qubit_bloch_estimated[q];
    std::snprintf(buf, sizeof buf, "  q%-3zu (%+.4f, %+.4f, %+.4f) | (%+.4f, %+.4f, %+.4f)\n", q,
                  a.x, a.y, a.z, b.x, b.y, b.z);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "log-likelihood %.6f\nfidelity    %.6f\n",
                rep.result.final_log_likelihood, rep.fidelity);
  os << buf;
  for (const auto &w : rep.warnings)
    os << "warning     " << w << '\n';
  return os.str();
}

int do_run(const RunOptions &o) {
  const RunRequest req = parse_run_request(run_request_json(o), kMaxDenseQubits);
  const ExperimentReport rep = run_experiment(req.spec);
  for (const auto &w : rep.warnings)
    std::cerr << "warning: " << w << '\n';
  write_output(o.out, o.output == "table" ? format_table(rep, req.unit) : dump_report(rep) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  int qubits = 1;
  int trials = 20;
  std::string shots_grid;
  std::uint64_t seed = 0;
  int restarts = 8;
  std::string out;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int do_sweep(const SweepOptions &o) {
  if (o.qubits < 1 || o.qubits > kMaxDenseQubits)
    throw UsageError("--qubits must be in [1, " + std::to_string(kMaxDenseQubits) + "]");
  if (o.trials < 1)
    throw UsageError("--trials must be >= 1");
  std::vector<std::int64_t> grid;
  for (const auto &s : split_commas(o.shots_grid)) {
    const std::int64_t v = parse_count(s, "shot budget");
    if (v == 0)
      throw UsageError("shot budgets must be positive");
    grid.push_back(v);
  }
  if (grid.empty())
    throw UsageError("--shots-grid needs at least one value");

  std::ostringstream csv;
  csv << "shots,trial,seed,fidelity,theta_error,phi_error\n";
  for (std::int64_t shots : grid) {
    for (int t = 0; t < o.trials; ++t) {
      // The true state depends on the trial only, so budgets are compared
      // on the same states.
      const std::uint64_t trial_seed =
          stream_seed(o.seed, StreamDomain::kTrials, static_cast<std::uint64_t>(t));
      ExperimentSpec spec;
      spec.n_qubits = o.qubits;
      spec.true_params = random_true_params(o.qubits, trial_seed);
      spec.shot_plan = default_shot_plan(o.qubits, shots);
      spec.seed = stream_seed(trial_seed, StreamDomain::kSampling, static_cast<std::uint64_t>(shots));
      spec.optimizer.restarts = o.restarts;
      spec.optimizer.seed = spec.seed;
      const ExperimentReport rep = run_experiment(spec);
      double theta_err = 0.0, phi_err = 0.0;
      const auto &tp = spec.true_params;
      const auto &ep = rep.result.estimated_params;
      for (std::size_t i = 0; i < tp.count(); ++i) {
        theta_err = std::max(theta_err, std::abs(tp.thetas()[i] - ep.thetas()[i]));
        phi_err = std::max(phi_err, circular_distance(tp.phis()[i], ep.phis()[i]));
      }
      csv << shots << ',' << t << ',' << spec.seed << ',' << fmt_double(rep.fidelity) << ','
          << fmt_double(theta_err) << ',' << fmt_double(phi_err) << '\n';
    }
  }
  write_output(o.out, csv.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// serve

httplib::Server *g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server)
    g_server->stop();
}

int do_serve(const std::optional<std::string> &addr, const std::optional<int> &port) {
  const ServerConfig cfg = resolve_server_config(addr, port);
  httplib::Server server;
  install_routes(server, cfg, stderr_logger());
  int bound_port = cfg.port;
  if (cfg.port == 0) {
    bound_port = server.bind_to_any_port(cfg.host);
    if (bound_port < 0)
      bound_port = 0;
  } else if (!server.bind_to_port(cfg.host, cfg.port)) {
    bound_port = 0;
  }
  if (bound_port == 0) {
    std::cerr << "error: cannot listen on " << cfg.host << ':' << cfg.port
              << " (address in use or unavailable)\n";
    return kExitInternal;
  }
  std::cout << "listening on http://" << cfg.host << ':' << bound_port << std::endl;
  g_server = &server;
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  const bool ok = server.listen_after_bind();
  g_server = nullptr;
  return ok ? kExitOk : kExitInternal;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"tomolens: pure-state tomography by maximum likelihood"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tomolens::kVersion));

  RunOptions run;
  auto *run_cmd = app.add_subcommand("run", "Simulate measurements on a state and reconstruct it");
  run_cmd->add_option("--qubits", run.qubits, "Number of qubits")->capture_default_str();
  run_cmd->add_option("--theta", run.theta, "Polar angles (comma list, 2^n-1 values)")
      ->delimiter(',');
  run_cmd->add_option("--phi", run.phi, "Phases (comma list, 2^n-1 values)")->delimiter(',');
  run_cmd->add_option("--angle-unit", run.angle_unit, "Unit of --theta/--phi")
      ->check(CLI::IsMember({"deg", "rad"}))
      ->capture_default_str();
  run_cmd->add_option("--shots", run.shots, "Shots per setting, or Nx,Ny,Nz for one qubit")
      ->capture_default_str();
  run_cmd->add_option("--settings", run.settings, "Comma list of Pauli strings (default: all)");
  run_cmd->add_option("--seed", run.seed, "64-bit seed")->capture_default_str();
  run_cmd->add_option("--restarts", run.restarts, "Optimizer restarts")->capture_default_str();
  run_cmd->add_option("--output", run.output, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "Write output to FILE instead of stdout");

  SweepOptions sweep;
  auto *sweep_cmd = app.add_subcommand("sweep", "Fidelity statistics over shot budgets");
  sweep_cmd->add_option("--qubits", sweep.qubits, "Number of qubits")->capture_default_str();
  sweep_cmd->add_option("--trials", sweep.trials, "Random true states per budget")
      ->capture_default_str();
  sweep_cmd->add_option("--shots-grid", sweep.shots_grid, "Comma list of shots per setting")
      ->required();
  sweep_cmd->add_option("--seed", sweep.seed, "64-bit seed")->capture_default_str();
  sweep_cmd->add_option("--restarts", sweep.restarts, "Optimizer restarts")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Write CSV to FILE instead of stdout");

  std::optional<std::string> serve_addr;
  std::optional<int> serve_port;
  auto *serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve_cmd->add_option("--addr", serve_addr, "Bind address HOST or HOST:PORT (env TOMOLENS_ADDR)");
  serve_cmd->add_option("--port", serve_port, "Bind port (0 picks a free port)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run_cmd)
      return do_run(run);
    if (*sweep_cmd)
      return do_sweep(sweep);
    return do_serve(serve_addr, serve_port);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InvalidArgument &e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ComputationError &e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return e.code() == "no_shots" ? kExitInvalid : kExitInternal;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
