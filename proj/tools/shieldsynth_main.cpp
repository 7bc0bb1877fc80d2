// Command-line front end: family synthesis with regeneration, certificate
// re-checking, shielded simulation, benchmark sweeps and spec stacking.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "shieldsynth/pipeline.hpp"
#include "shieldsynth/serialize.hpp"
#include "shieldsynth/shield.hpp"
#include "shieldsynth/sim.hpp"

namespace ss = shieldsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotVerified = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SHIELDSYNTH_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

ss::SystemSpec load_spec(const std::string& spec_arg) {
  if (std::filesystem::exists(spec_arg))
    return ss::spec_from_json(ss::load_json_file(spec_arg));
  return ss::benchmark(spec_arg);
}

ss::json report_to_json(const ss::VerificationReport& r) {
  return ss::json{{"benchmark", r.benchmark},
                  {"n", r.n},
                  {"m", r.m},
                  {"M", r.M},
                  {"k", r.k},
                  {"noise_verified_max", r.noise_verified_max},
                  {"verified", r.verified},
                  {"L_opt", r.L_opt},
                  {"per_family_secs", r.per_family_secs},
                  {"total_secs", r.total_secs},
                  {"regenerations", r.regenerations},
                  {"seed", r.seed}};
}

std::string report_csv_header() {
  return "benchmark,n,m,M,k,noise_verified_max,verified,L_opt,"
         "per_family_secs,total_secs,regenerations,seed";
}

std::string report_csv_row(const ss::VerificationReport& r) {
  std::ostringstream os;
  os << r.benchmark << ',' << r.n << ',' << r.m << ',' << r.M << ',' << r.k
     << ',' << r.noise_verified_max << ',' << (r.verified ? 1 : 0) << ','
     << r.L_opt << ',' << r.per_family_secs << ',' << r.total_secs << ','
     << r.regenerations << ',' << r.seed;
  return os.str();
}

ss::BlackBoxController make_controller(const std::string& kind, int m,
                                       double action_mag,
                                       const ss::SystemSpec& spec,
                                       const ss::ControllerFamily& family,
                                       const ss::Selector& selector,
                                       std::uint64_t seed) {
  if (kind == "random") {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [m, action_mag, rng](int, const Eigen::VectorXd&) {
      std::uniform_real_distribution<double> d(-action_mag, action_mag);
      Eigen::VectorXd a(m);
      for (int i = 0; i < m; ++i) a[i] = d(*rng);
      return a;
    };
  }
  if (kind == "constant")
    return [m, action_mag](int, const Eigen::VectorXd&) {
      return Eigen::VectorXd::Constant(m, action_mag).eval();
    };
  if (kind == "adversarial") {
    // Push along the action direction that drives the state outward.
    auto [A0, B0] = ss::matrices_at(spec, 0);
    Eigen::MatrixXd Bt = B0.transpose();
    return [Bt, action_mag](int, const Eigen::VectorXd& s) {
      Eigen::VectorXd g = Bt * s;
      Eigen::VectorXd a(g.size());
      for (int i = 0; i < g.size(); ++i)
        a[i] = g[i] >= 0 ? action_mag : -action_mag;
      return a;
    };
  }
  if (kind == "family-own") {
    const int k = spec.interval_k;
    return [&family, &selector, k](int t, const Eigen::VectorXd& s) {
      const auto& K = family.gains[static_cast<std::size_t>(
          selector.choices[static_cast<std::size_t>(t / k)])];
      return (K * s).eval();
    };
  }
  throw std::invalid_argument("unknown controller kind: " + kind);
}

void write_report(const std::string& out_path, const std::string& format,
                  const ss::json& j) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  ss::write_json_file(out_path, j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verified linear controller family synthesis and shielding"};
  app.require_subcommand(1);

  std::string spec_arg, out_arg, format = "json";
  std::uint64_t seed = default_seed();
  int family_size = 10, budget = 100, regen_limit = 20;
  double timeout_secs = 3600.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master RNG seed (env SHIELDSYNTH_SEED)");
    cmd->add_option("--out", out_arg, "Output file path");
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  auto* verify = app.add_subcommand("verify", "Synthesize a verified selector");
  verify->add_option("--spec", spec_arg, "Benchmark name or spec JSON path")
      ->required();
  verify->add_option("--family-size", family_size, "Gains per family");
  verify->add_option("--budget", budget, "Selectors evaluated per family");
  verify->add_option("--regen-limit", regen_limit, "Family regenerations");
  verify->add_option("--timeout-secs", timeout_secs, "Wall-clock budget");
  add_common(verify);

  auto* simulate = app.add_subcommand("simulate", "Run shielded episodes");
  std::string artifact_path, controller_kind = "random";
  int episodes = 100;
  double action_mag = 10.0;
  bool unshielded = false;
  simulate->add_option("--artifact", artifact_path, "Verified artifact JSON")
      ->required();
  simulate->add_option("--controller", controller_kind,
                       "random|constant|adversarial|family-own");
  simulate->add_option("--episodes", episodes, "Episode count");
  simulate->add_option("--action-mag", action_mag, "Black-box action magnitude");
  simulate->add_flag("--unshielded", unshielded, "Disable the monitor");
  add_common(simulate);

  auto* bench = app.add_subcommand("bench", "Sweep the registered benchmarks");
  int max_depth = 8;
  bench->add_option("--max-depth", max_depth, "Largest stacking depth (1,2,4,8)");
  bench->add_option("--family-size", family_size, "Gains per family");
  bench->add_option("--budget", budget, "Selectors evaluated per family");
  bench->add_option("--regen-limit", regen_limit, "Family regenerations");
  bench->add_option("--timeout-secs", timeout_secs, "Budget per benchmark");
  add_common(bench);

  auto* stackcmd = app.add_subcommand("stack", "Write a stacked spec JSON");
  std::string base_name;
  int depth = 2;
  stackcmd->add_option("--base", base_name, "Base benchmark name")->required();
  stackcmd->add_option("--depth", depth, "Number of stacked copies");
  add_common(stackcmd);

  auto* recheck = app.add_subcommand("recheck", "Independent certificate check");
  recheck->add_option("--artifact", artifact_path, "Verified artifact JSON")
      ->required();
  add_common(recheck);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      ss::SystemSpec spec = load_spec(spec_arg);
      ss::VerifyOptions opts;
      opts.family_size = family_size;
      opts.selector_budget = budget;
      opts.regen_limit = regen_limit;
      opts.timeout_secs = timeout_secs;
      opts.seed = seed;
      auto outcome = ss::run_verification(spec, opts);
      if (outcome.report.verified) {
        const std::string artifact =
            out_arg.empty() ? spec.name + "_artifact.json" : out_arg;
        ss::write_json_file(artifact, ss::verified_artifact_json(
                                          spec, outcome.family, outcome.result, seed));
        std::cerr << "artifact written to " << artifact << "\n";
      }
      std::cout << report_to_json(outcome.report).dump(2) << "\n";
      return outcome.report.verified ? kExitOk : kExitNotVerified;
    }

    if (simulate->parsed()) {
      if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
      const ss::json artifact = ss::load_json_file(artifact_path);
      ss::SystemSpec spec = ss::spec_from_json(artifact.at("spec"));
      ss::ControllerFamily family = ss::family_from_json(artifact.at("family"));
      ss::Selector selector = ss::selector_from_json(artifact.at("selector"));
      auto pi = make_controller(controller_kind, spec.m, action_mag, spec, family,
                                selector, seed + 7);
      ss::ShieldedRun run;
      if (unshielded) {
        run = ss::run_unshielded(spec, pi, episodes, seed);
      } else {
        ss::ShieldConfig cfg(spec, family, selector);
        run = ss::run_shielded(cfg, pi, episodes, seed);
      }
      ss::json summary{{"benchmark", spec.name},
                       {"controller", controller_kind},
                       {"episodes", episodes},
                       {"shielded", !unshielded},
                       {"steps", run.steps},
                       {"violations", run.violations},
                       {"interventions", run.interventions}};
      write_report(out_arg, format, summary);
      return kExitOk;
    }

    if (bench->parsed()) {
      std::vector<int> depths;
      for (int d = 1; d <= max_depth; d *= 2) depths.push_back(d);
      std::ostringstream csv;
      csv << report_csv_header() << "\n";
      ss::json rows = ss::json::array();
      bool all_verified = true;
      for (int d : depths) {
        for (const auto& base : ss::base_benchmark_names()) {
          const std::string name =
              d == 1 ? base : std::to_string(d) + "-" + base;
          ss::SystemSpec spec = ss::benchmark(name);
          ss::VerifyOptions opts;
          opts.family_size = family_size;
          opts.selector_budget = budget;
          opts.regen_limit = regen_limit;
          opts.timeout_secs = timeout_secs;
          opts.seed = seed;
          auto outcome = ss::run_verification(spec, opts);
          all_verified &= outcome.report.verified;
          csv << report_csv_row(outcome.report) << "\n";
          rows.push_back(report_to_json(outcome.report));
          std::cerr << name << (outcome.report.verified ? " verified" : " NOT verified")
                    << " in " << outcome.report.total_secs << "s\n";
        }
      }
      if (format == "csv") {
        if (out_arg.empty()) {
          std::cout << csv.str();
        } else {
          std::ofstream out(out_arg + ".tmp");
          out << csv.str();
          out.close();
          std::filesystem::rename(out_arg + ".tmp", out_arg);
        }
      } else {
        write_report(out_arg, format, rows);
      }
      return all_verified ? kExitOk : kExitNotVerified;
    }

    if (stackcmd->parsed()) {
      if (depth < 1) throw std::invalid_argument("depth must be >= 1");
      ss::SystemSpec base = ss::benchmark(base_name);
      ss::SystemSpec result = base;
      if (depth > 1) {
        std::vector<ss::SystemSpec> copies(static_cast<std::size_t>(depth), base);
        result = ss::stack(copies, seed);
        result.name = std::to_string(depth) + "-" + base_name;
      }
      const std::string path =
          out_arg.empty() ? result.name + "_spec.json" : out_arg;
      ss::write_json_file(path, ss::to_json(result));
      std::cout << "wrote " << path << " (n=" << result.n << ", m=" << result.m
                << ")\n";
      return kExitOk;
    }

    if (recheck->parsed()) {
      const ss::json artifact = ss::load_json_file(artifact_path);
      ss::SystemSpec spec = ss::spec_from_json(artifact.at("spec"));
      ss::ControllerFamily family = ss::family_from_json(artifact.at("family"));
      ss::Selector selector = ss::selector_from_json(artifact.at("selector"));
      auto bounds = ss::evaluate_selector(spec, family, selector);
      double L = 0.0;
      for (const auto& sb : bounds) L += sb.p_hat;
      const bool verified = L >= spec.horizon_M - 1e-9;
      ss::json summary{{"benchmark", spec.name},
                       {"L", L},
                       {"M", spec.horizon_M},
                       {"verified", verified}};
      write_report(out_arg, format, summary);
      return verified ? kExitOk : kExitNotVerified;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
