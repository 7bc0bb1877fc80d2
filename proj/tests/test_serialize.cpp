#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "shieldsynth/lqr.hpp"
#include "shieldsynth/pipeline.hpp"
#include "shieldsynth/serialize.hpp"
#include "test_util.hpp"

using namespace shieldsynth;
namespace tu = shieldsynth::testutil;

TEST_CASE("IntervalBox and matrix round-trips are bit-exact") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 5);
    const IntervalBox box = tu::random_box(d, rng, 10.0);
    CHECK(box_from_json(to_json(box)) == box);

    const Eigen::MatrixXd m =
        tu::random_matrix(d, 1 + static_cast<int>(rng() % 4), rng, 100.0);
    CHECK(matrix_from_json(to_json(m)) == m);
  }
  CHECK_THROWS(matrix_from_json(json::parse("[[1,2],[3]]")));
}

TEST_CASE("SystemSpec round-trips across all dynamics kinds") {
  for (const std::string name :
       {"Pendulum", "DroneInWind", "2-Cartpole", "2-DroneInWind"}) {
    const SystemSpec spec = benchmark(name);
    const SystemSpec back = spec_from_json(to_json(spec));
    CHECK(back.name == spec.name);
    CHECK(back.n == spec.n);
    CHECK(back.m == spec.m);
    CHECK(back.dt == spec.dt);
    CHECK(back.init_box == spec.init_box);
    CHECK(back.safe_box == spec.safe_box);
    CHECK(back.noise_runtime == spec.noise_runtime);
    CHECK(back.noise_verified == spec.noise_verified);
    CHECK(back.horizon_M == spec.horizon_M);
    CHECK(back.interval_k == spec.interval_k);
    CHECK(back.block_n == spec.block_n);
    CHECK(back.noise_dist == spec.noise_dist);
    auto [A1, B1] = matrices_at(spec, 3);
    auto [A2, B2] = matrices_at(back, 3);
    CHECK(A1 == A2);
    CHECK(B1 == B2);
    CHECK_NOTHROW(back.validate());
  }
}

TEST_CASE("family and selector round-trips") {
  const SystemSpec spec = benchmark("Pendulum");
  const ControllerFamily fam = sample_family(spec, 4, 3);
  const ControllerFamily back = family_from_json(to_json(fam));
  REQUIRE(back.gains.size() == fam.gains.size());
  CHECK(back.interval_k == fam.interval_k);
  for (std::size_t i = 0; i < fam.gains.size(); ++i) {
    CHECK(back.gains[i] == fam.gains[i]);
    CHECK(back.qr_log[i].q_diag == fam.qr_log[i].q_diag);
    CHECK(back.qr_log[i].r_diag == fam.qr_log[i].r_diag);
    CHECK(back.qr_log[i].seed == fam.qr_log[i].seed);
  }

  Selector phi;
  phi.choices = {2, 0, 1};
  CHECK(selector_from_json(to_json(phi)).choices == phi.choices);
}

TEST_CASE("search result serialization encodes infinities and stats") {
  const SystemSpec spec = tu::unit_pendulum();
  const ControllerFamily fam = sample_family(spec, 2, 5);
  const SearchResult res = synthesize(spec, fam, {});
  const json j = to_json(res);
  CHECK(j.at("L_opt").get<double>() == res.L_opt);
  CHECK(j.at("verified").get<bool>() == res.verified);
  CHECK(j.at("per_step").size() == static_cast<std::size_t>(spec.horizon_M));
  CHECK(j.at("selector").at("choices").get<std::vector<int>>() ==
        res.phi_opt.choices);
  for (const auto& row : j.at("per_step"))
    CHECK(row.at("u_f").get<double>() >= -1.0);  // -1 encodes +inf
}

TEST_CASE("verified artifact carries spec, family, and selector") {
  const SystemSpec spec = benchmark("Pendulum");
  VerifyOptions opts;
  opts.seed = 31;
  const VerifyOutcome out = run_verification(spec, opts);
  REQUIRE(out.report.verified);
  const json artifact = verified_artifact_json(spec, out.family, out.result, 31);
  CHECK(artifact.at("seed").get<std::uint64_t>() == 31);
  const SystemSpec spec2 = spec_from_json(artifact.at("spec"));
  const ControllerFamily fam2 = family_from_json(artifact.at("family"));
  const Selector phi2 = selector_from_json(artifact.at("selector"));
  double L = 0.0;
  for (const auto& sb : evaluate_selector(spec2, fam2, phi2)) L += sb.p_hat;
  CHECK(L >= spec2.horizon_M - 1e-9);
}

TEST_CASE("file round-trip is atomic and lossless") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "shieldsynth_test.json").string();
  const json j = to_json(benchmark("Oscillator"));
  write_json_file(path, j);
  CHECK(load_json_file(path) == j);
  std::remove(path.c_str());
  CHECK_THROWS(load_json_file(path));
}

TEST_CASE("identical seeds reproduce identical reports minus timings") {
  const SystemSpec spec = benchmark("Pendulum");
  VerifyOptions opts;
  opts.seed = 99;
  const VerifyOutcome a = run_verification(spec, opts);
  const VerifyOutcome b = run_verification(spec, opts);
  CHECK(to_json(a.family) == to_json(b.family));
  CHECK(to_json(a.result.phi_opt) == to_json(b.result.phi_opt));
  CHECK(a.report.verified == b.report.verified);
  CHECK(a.report.L_opt == b.report.L_opt);
  CHECK(a.report.regenerations == b.report.regenerations);
}
