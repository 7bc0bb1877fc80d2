#include "shieldsynth/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace shieldsynth {

json to_json(const IntervalBox& box) {
  json j;
  j["lo"] = std::vector<double>(box.lo().data(), box.lo().data() + box.dim());
  j["hi"] = std::vector<double>(box.hi().data(), box.hi().data() + box.dim());
  return j;
}

IntervalBox box_from_json(const json& j) {
  const auto lo = j.at("lo").get<std::vector<double>>();
  const auto hi = j.at("hi").get<std::vector<double>>();
  return IntervalBox(Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size()),
                     Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size()));
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size())
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

namespace {

json dynamics_to_json(const DynamicsSource& dyn) {
  json j;
  if (const auto* c = std::get_if<ConstantDynamics>(&dyn)) {
    j["type"] = "constant";
    j["A"] = to_json(c->A);
    j["B"] = to_json(c->B);
  } else if (const auto* t = std::get_if<TableDynamics>(&dyn)) {
    j["type"] = "table";
    json entries = json::array();
    for (const auto& [A, B] : t->entries)
      entries.push_back({{"A", to_json(A)}, {"B", to_json(B)}});
    j["entries"] = std::move(entries);
  } else {
    const auto& g = std::get<GeneratorDynamics>(dyn);
    j["type"] = "generator";
    j["name"] = g.name;
    j["params"] = g.params;
  }
  return j;
}

DynamicsSource dynamics_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "constant")
    return ConstantDynamics{matrix_from_json(j.at("A")),
                            matrix_from_json(j.at("B"))};
  if (type == "table") {
    TableDynamics t;
    for (const auto& e : j.at("entries"))
      t.entries.emplace_back(matrix_from_json(e.at("A")),
                             matrix_from_json(e.at("B")));
    return t;
  }
  if (type == "generator")
    return GeneratorDynamics{j.at("name").get<std::string>(),
                             j.at("params").get<std::vector<double>>()};
  throw std::invalid_argument("dynamics_from_json: unknown type " + type);
}

}  // namespace

json to_json(const SystemSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["dynamics"] = dynamics_to_json(spec.dynamics);
  j["dt"] = spec.dt;
  j["noise_runtime"] = to_json(spec.noise_runtime);
  j["noise_verified"] = to_json(spec.noise_verified);
  j["init_box"] = to_json(spec.init_box);
  j["safe_box"] = to_json(spec.safe_box);
  j["horizon_M"] = spec.horizon_M;
  j["interval_k"] = spec.interval_k;
  j["noise_dist"] =
      spec.noise_dist == NoiseDist::UniformNoise ? "uniform" : "generic_bounded";
  j["block_n"] = spec.block_n;
  j["block_m"] = spec.block_m;
  if (spec.stack_seed) j["stack_seed"] = *spec.stack_seed;
  return j;
}

SystemSpec spec_from_json(const json& j) {
  SystemSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.n = j.at("n").get<int>();
  spec.m = j.at("m").get<int>();
  spec.dynamics = dynamics_from_json(j.at("dynamics"));
  spec.dt = j.at("dt").get<double>();
  spec.noise_runtime = box_from_json(j.at("noise_runtime"));
  spec.noise_verified = box_from_json(j.at("noise_verified"));
  spec.init_box = box_from_json(j.at("init_box"));
  spec.safe_box = box_from_json(j.at("safe_box"));
  spec.horizon_M = j.at("horizon_M").get<int>();
  spec.interval_k = j.at("interval_k").get<int>();
  spec.noise_dist = j.at("noise_dist").get<std::string>() == "uniform"
                        ? NoiseDist::UniformNoise
                        : NoiseDist::GenericBounded;
  if (j.contains("block_n")) spec.block_n = j.at("block_n").get<std::vector<int>>();
  if (j.contains("block_m")) spec.block_m = j.at("block_m").get<std::vector<int>>();
  if (spec.block_n.empty()) spec.block_n = {spec.n};
  if (spec.block_m.empty()) spec.block_m = {spec.m};
  if (j.contains("stack_seed")) spec.stack_seed = j.at("stack_seed").get<std::uint64_t>();
  spec.validate();
  return spec;
}

json to_json(const ControllerFamily& family) {
  json j;
  json gains = json::array();
  for (const auto& K : family.gains) gains.push_back(to_json(K));
  j["gains"] = std::move(gains);
  j["interval_k"] = family.interval_k;
  json log = json::array();
  for (const auto& d : family.qr_log) {
    log.push_back({{"q_diag", std::vector<double>(d.q_diag.data(),
                                                  d.q_diag.data() + d.q_diag.size())},
                   {"r_diag", std::vector<double>(d.r_diag.data(),
                                                  d.r_diag.data() + d.r_diag.size())},
                   {"seed", d.seed}});
  }
  j["qr_log"] = std::move(log);
  return j;
}

ControllerFamily family_from_json(const json& j) {
  ControllerFamily f;
  for (const auto& g : j.at("gains")) f.gains.push_back(matrix_from_json(g));
  f.interval_k = j.at("interval_k").get<int>();
  for (const auto& d : j.at("qr_log")) {
    QrDraw draw;
    const auto q = d.at("q_diag").get<std::vector<double>>();
    const auto r = d.at("r_diag").get<std::vector<double>>();
    draw.q_diag = Eigen::Map<const Eigen::VectorXd>(q.data(), q.size());
    draw.r_diag = Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
    draw.seed = d.at("seed").get<std::uint64_t>();
    f.qr_log.push_back(std::move(draw));
  }
  return f;
}

json to_json(const Selector& phi) { return json{{"choices", phi.choices}}; }

Selector selector_from_json(const json& j) {
  return Selector{j.at("choices").get<std::vector<int>>()};
}

json to_json(const SearchResult& result) {
  json j;
  j["selector"] = to_json(result.phi_opt);
  j["L_opt"] = result.L_opt;
  j["verified"] = result.verified;
  json trace = json::array();
  for (const auto& sb : result.per_step)
    trace.push_back({{"p_hat", sb.p_hat},
                     {"u_f", std::isinf(sb.u_f) ? -1.0 : sb.u_f},
                     {"overlap_upper", sb.overlap_upper},
                     {"exact", sb.exact}});
  j["per_step"] = std::move(trace);
  j["stats"] = {{"nodes_expanded", result.stats.nodes_expanded},
                {"selectors_evaluated", result.stats.selectors_evaluated},
                {"prunes_strategy1", result.stats.prunes_strategy1},
                {"prunes_strategy2", result.stats.prunes_strategy2},
                {"prunes_strategy3", result.stats.prunes_strategy3}};
  return j;
}

json verified_artifact_json(const SystemSpec& spec, const ControllerFamily& family,
                            const SearchResult& result, std::uint64_t seed) {
  json j;
  j["spec"] = to_json(spec);
  j["family"] = to_json(family);
  j["selector"] = to_json(result.phi_opt);
  j["L_opt"] = result.L_opt;
  j["verified"] = result.verified;
  j["seed"] = seed;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace shieldsynth
