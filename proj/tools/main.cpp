// racert command line front end: binds JSON configuration files to the
// solve / certify / simulate / sweep / latency pipeline.
//
// Exit codes: 0 success (or certified), 1 online certification negative,
// 2 configuration error, 3 numerical non-convergence.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "racert/io.hpp"

namespace fs = std::filesystem;
using namespace racert;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string mode_override;
  std::string method_override;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON configuration file")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--threads", args.threads, "worker threads (deterministic)");
  cmd->add_option("--mode", args.mode_override,
                  "override system mode: reach_avoid|viability|reach");
  cmd->add_option("--method", args.method_override,
                  "override certification method: lipschitz|socp|both");
}

struct LoadedConfig {
  Json json;
  SystemModel model;
  std::uint64_t seed = 0;
};

LoadedConfig load_config(const CommonArgs& args) {
  LoadedConfig lc;
  lc.json = load_json_file(args.config_path);
  if (!lc.json.contains("system"))
    throw std::invalid_argument("config: missing 'system'");
  if (!args.mode_override.empty()) lc.json["system"]["mode"] = args.mode_override;
  if (!args.method_override.empty()) lc.json["method"] = args.method_override;
  lc.model = system_from_json(lc.json["system"]);
  lc.seed = args.seed ? *args.seed : lc.json.value("seed", 0ull);
  lc.json["seed"] = lc.seed;
  fs::create_directories(args.out_dir);
  return lc;
}

Policy policy_from_config(const Json& j, const SystemModel& model,
                          std::shared_ptr<const ValueField> field,
                          const ActionLattice& lattice) {
  const std::string kind = j.value("kind", std::string("greedy"));
  if (kind == "greedy") {
    if (!field)
      throw std::invalid_argument("policy: greedy needs a 'field' artifact");
    return Policy::grid_greedy(std::move(field),
                               std::make_shared<SystemModel>(model), lattice);
  }
  if (kind == "constant") {
    Vec u(static_cast<int>(j.at("u").size()));
    for (int i = 0; i < u.size(); ++i) u[i] = j["u"][i].get<double>();
    if (!model.control_set.contains(u))
      throw std::invalid_argument("policy: constant control outside U");
    return Policy::constant(u);
  }
  throw std::invalid_argument("policy: unknown kind '" + kind + "'");
}

std::shared_ptr<const ValueField> maybe_load_field(const Json& config,
                                                   const std::string& out_dir) {
  if (!config.contains("field")) return nullptr;
  fs::path p = config["field"].get<std::string>();
  if (p.is_relative() && !fs::exists(p)) {
    fs::path alt = fs::path(out_dir) / p;
    if (fs::exists(alt)) p = alt;
  }
  return std::make_shared<const ValueField>(load_field(p));
}

int cmd_solve(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedConfig lc = load_config(args);
  const Grid grid = grid_from_json(lc.json.at("grid"));
  const double gamma = lc.json.at("gamma").get<double>();
  const ActionLattice lattice =
      lattice_from_json(lc.model, lc.json.value("lattice", Json::object()));
  SolveOptions opts = solve_options_from_json(lc.json.value("solve", Json::object()));
  if (args.threads > 1) opts.threads = args.threads;

  ValueField field = value_iteration(lc.model, grid, gamma, lattice, opts);

  const fs::path out(args.out_dir);
  save_field(field, out / "field.rvf");
  export_field_csv(field, out / "field.csv");

  Json report;
  report["gamma"] = gamma;
  report["mode"] = to_string(field.mode);
  report["iterations"] = field.stats.iterations;
  report["residual"] = field.stats.residual;
  report["converged"] = field.stats.converged;
  if (grid.dim() == 1) {
    Json intervals = Json::array();
    for (auto [lo, hi] : level_intervals_1d(field))
      intervals.push_back({{"lo", lo}, {"hi", hi}});
    report["intervals"] = intervals;
  }
  write_json_atomic(out / "solve_report.json", report);

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out / "manifest.json", "solve", lc.json,
                 {"field.rvf", "field.csv", "solve_report.json"}, lc.seed, wall);

  std::cout << "solve: " << field.stats.iterations
            << " sweeps, residual " << field.stats.residual
            << (field.stats.converged ? "" : " (NOT CONVERGED)") << "\n";
  if (report.contains("intervals")) std::cout << "intervals: " << report["intervals"].dump() << "\n";
  return field.stats.converged ? 0 : 3;
}

int cmd_certify(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedConfig lc = load_config(args);
  auto field = maybe_load_field(lc.json, args.out_dir);
  const ActionLattice lattice =
      lattice_from_json(lc.model, lc.json.value("lattice", Json::object()));
  Policy policy = policy_from_config(lc.json.value("policy", Json::object()),
                                     lc.model, field, lattice);
  const double gamma = lc.json.at("gamma").get<double>();
  const double eps_x = lc.json.at("eps_x").get<double>();
  const int horizon = lc.json.at("horizon").get<int>();
  const CertMethod method =
      cert_method_from_string(lc.json.value("method", std::string("both")));
  const fs::path out(args.out_dir);

  if (lc.json.contains("center")) {
    Vec center(static_cast<int>(lc.json["center"].size()));
    for (int i = 0; i < center.size(); ++i) center[i] = lc.json["center"][i].get<double>();
    CertReport rep = certify_online(lc.model, policy, center, eps_x, horizon, gamma, method);
    write_json_atomic(out / "cert_report.json", cert_report_to_json(rep));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out / "manifest.json", "certify", lc.json, {"cert_report.json"},
                   lc.seed, wall);
    if (rep.lipschitz_value)
      std::cout << "lipschitz certificate: " << *rep.lipschitz_value << "\n";
    if (rep.socp_value) std::cout << "socp certificate: " << *rep.socp_value << "\n";
    const bool ok = rep.certified(method);
    std::cout << (ok ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
    return ok ? 0 : 1;
  }

  if (!lc.json.contains("region"))
    throw std::invalid_argument("certify: need 'center' or 'region'");
  Vec lo(static_cast<int>(lc.json["region"]["lo"].size()));
  Vec hi(static_cast<int>(lc.json["region"]["hi"].size()));
  for (int i = 0; i < lo.size(); ++i) lo[i] = lc.json["region"]["lo"][i].get<double>();
  for (int i = 0; i < hi.size(); ++i) hi[i] = lc.json["region"]["hi"][i].get<double>();
  CertifiedSet set = certify_offline(
      lc.model, policy, lo, hi, eps_x, horizon, gamma, method,
      lc.json.value("max_centers", 1000000ull), args.threads);
  write_json_atomic(out / "certified_set.json", certified_set_to_json(set));
  export_certified_centers_csv(set, out / "certified_centers.csv");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out / "manifest.json", "certify", lc.json,
                 {"certified_set.json", "certified_centers.csv"}, lc.seed, wall);
  std::cout << "certified " << set.members.size() << " of " << set.centers_examined
            << " centers\n";
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedConfig lc = load_config(args);
  auto field = maybe_load_field(lc.json, args.out_dir);
  const ActionLattice lattice =
      lattice_from_json(lc.model, lc.json.value("lattice", Json::object()));

  ExperimentConfig config;
  const Json& sj = lc.json.at("sampler");
  config.sampler = sampler_kind_from_string(sj.at("kind").get<std::string>());
  config.trials = lc.json.value("trials", 100);
  config.horizon = lc.json.value("horizon", 50);
  config.seed = lc.seed;
  config.disturbance = disturbance_mode_from_string(
      lc.json.value("disturbance", Json{{"kind", "uniform"}}).value("kind", "uniform"));

  std::optional<CertifiedSet> certified;
  if (config.sampler == SamplerKind::certified_set) {
    certified = certified_set_from_json(
        load_json_file(sj.at("path").get<std::string>()));
  } else {
    config.region_lo = Vec(static_cast<int>(sj.at("lo").size()));
    config.region_hi = Vec(static_cast<int>(sj.at("hi").size()));
    for (int i = 0; i < config.region_lo.size(); ++i) {
      config.region_lo[i] = sj["lo"][i].get<double>();
      config.region_hi[i] = sj["hi"][i].get<double>();
    }
  }

  Policy policy = lc.json.contains("policy")
                      ? policy_from_config(lc.json["policy"], lc.model, field, lattice)
                      : Policy::constant(Vec::Zero(lc.model.m_u));
  DisturbancePolicy dist =
      config.disturbance == DisturbanceMode::worst_case
          ? DisturbancePolicy::grid_worst_case(
                field, std::make_shared<SystemModel>(lc.model), lattice)
          : DisturbancePolicy::uniform_sampler();
  if (config.disturbance == DisturbanceMode::worst_case && !field)
    throw std::invalid_argument("simulate: worst_case disturbance needs a field");

  SuccessReport rep = success_rate(lc.model, config, policy, dist,
                                   field ? field.get() : nullptr,
                                   certified ? &*certified : nullptr);
  const fs::path out(args.out_dir);
  write_json_atomic(out / "success_report.json", success_report_to_json(rep));
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out / "manifest.json", "simulate", lc.json,
                 {"success_report.json"}, lc.seed, wall);
  std::cout << "success rate: " << rep.success_rate << " (" << rep.successes << "/"
            << rep.trials << ")\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedConfig lc = load_config(args);
  const Grid grid = grid_from_json(lc.json.at("grid"));

  GammaSweepParams params;
  for (const auto& g : lc.json.at("gammas")) params.gammas.push_back(g.get<double>());
  params.solve = solve_options_from_json(lc.json.value("solve", Json::object()));
  if (args.threads > 1) params.solve.threads = args.threads;
  const Json lj = lc.json.value("lattice", Json::object());
  params.lattice_controls = lj.value("controls_per_dim", 11);
  params.lattice_disturbances = lj.value("disturbances_per_dim", 5);
  const Json& cj = lc.json.at("cert");
  params.cert_eps_x = cj.at("eps_x").get<double>();
  params.cert_horizon = cj.at("horizon").get<int>();
  params.cert_lo = Vec(static_cast<int>(cj.at("lo").size()));
  params.cert_hi = Vec(static_cast<int>(cj.at("hi").size()));
  for (int i = 0; i < params.cert_lo.size(); ++i) {
    params.cert_lo[i] = cj["lo"][i].get<double>();
    params.cert_hi[i] = cj["hi"][i].get<double>();
  }
  params.cert_max_centers = cj.value("max_centers", 1000000ull);
  params.volume_samples = lc.json.value("volume_samples", 10000);
  const Json rj = lc.json.value("reach", Json::object());
  params.reach_trials = rj.value("trials", 50);
  params.reach_horizon = rj.value("horizon", 120);
  params.seed = lc.seed;

  auto rows = gamma_sweep(lc.model, grid, params);
  const fs::path out(args.out_dir);
  write_json_atomic(out / "sweep.json", sweep_to_json(rows));
  export_sweep_csv(rows, out / "sweep.csv");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out / "manifest.json", "sweep", lc.json, {"sweep.json", "sweep.csv"},
                 lc.seed, wall);
  for (const auto& row : rows)
    std::cout << "gamma " << row.gamma << ": sz_volume " << row.super_zero_volume
              << ", mean reach " << row.reach.mean_time << "\n";
  return 0;
}

int cmd_latency(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedConfig lc = load_config(args);
  auto field = maybe_load_field(lc.json, args.out_dir);
  const ActionLattice lattice =
      lattice_from_json(lc.model, lc.json.value("lattice", Json::object()));
  Policy policy = policy_from_config(lc.json.value("policy", Json::object()),
                                     lc.model, field, lattice);
  const Json& rj = lc.json.at("region");
  Vec lo(static_cast<int>(rj.at("lo").size()));
  Vec hi(static_cast<int>(rj.at("hi").size()));
  for (int i = 0; i < lo.size(); ++i) {
    lo[i] = rj["lo"][i].get<double>();
    hi[i] = rj["hi"][i].get<double>();
  }
  LatencyReport rep = latency_histogram(
      lc.model, policy, lc.json.value("centers", 100), lo, hi,
      lc.json.at("eps_x").get<double>(), lc.json.at("horizon").get<int>(),
      lc.json.at("gamma").get<double>(), lc.seed);
  const fs::path out(args.out_dir);
  write_json_atomic(out / "latency.json", latency_to_json(rep));
  export_latency_csv(rep, out / "latency.csv");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out / "manifest.json", "latency", lc.json,
                 {"latency.json", "latency.csv"}, lc.seed, wall);
  std::cout << "median lipschitz " << rep.lipschitz_median << " s, median socp "
            << rep.socp_median << " s\n";
  return 0;
}

int cmd_export(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  Json config = load_json_file(args.config_path);
  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  ValueField field = load_field(config.at("field").get<std::string>());
  std::vector<std::string> artifacts;
  export_field_csv(field, out / "field.csv");
  artifacts.push_back("field.csv");
  if (config.value("policy_csv", false)) {
    SystemModel model = system_from_json(config.at("system"));
    const ActionLattice lattice =
        lattice_from_json(model, config.value("lattice", Json::object()));
    Policy greedy = Policy::grid_greedy(std::make_shared<const ValueField>(field),
                                        std::make_shared<SystemModel>(model), lattice);
    export_policy_csv(field.grid, greedy, out / "policy.csv");
    artifacts.push_back("policy.csv");
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out / "manifest.json", "export", config, artifacts,
                 config.value("seed", 0ull), wall);
  std::cout << "exported " << artifacts.size() << " artifact(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reach-avoid value iteration and set certification toolkit"};
  app.require_subcommand(1);

  CommonArgs solve_args, certify_args, simulate_args, sweep_args, latency_args,
      export_args;
  add_common(app.add_subcommand("solve", "compute a value field"), solve_args);
  add_common(app.add_subcommand("certify", "certify a center or region"), certify_args);
  add_common(app.add_subcommand("simulate", "Monte-Carlo success rates"), simulate_args);
  add_common(app.add_subcommand("sweep", "per-gamma metrics"), sweep_args);
  add_common(app.add_subcommand("latency", "certificate timing"), latency_args);
  add_common(app.add_subcommand("export", "re-export artifacts to CSV"), export_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("solve")) return cmd_solve(solve_args);
    if (app.got_subcommand("certify")) return cmd_certify(certify_args);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args);
    if (app.got_subcommand("latency")) return cmd_latency(latency_args);
    if (app.got_subcommand("export")) return cmd_export(export_args);
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
