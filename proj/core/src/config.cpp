#include "glimm/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "glimm/errors.hpp"

namespace glimm {

using nlohmann::json;

namespace {

State state_of(const json& j) {
  if (j.is_number()) {
    State s(1);
    s(0) = j.get<double>();
    return s;
  }
  if (!j.is_array() || j.empty()) fail(ErrorKind::ConfigError, "state must be a number or a nonempty array");
  State s(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) s(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return s;
}

json json_of(const State& s) {
  json a = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) a.push_back(s(i));
  return a;
}

template <class T>
void take(const json& j, const char* key, T& into) {
  if (j.contains(key) && !j[key].is_null()) into = j[key].get<T>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  try {
    take(j, "model", c.model);
    if (j.contains("delta0")) c.delta0 = j["delta0"].get<double>();
    if (j.contains("domain")) c.domain = Box{state_of(j["domain"]["lo"]), state_of(j["domain"]["hi"])};
    take(j, "T", c.T);
    if (j.contains("eps")) {
      if (j["eps"].is_number()) c.eps = {j["eps"].get<double>()};
      else c.eps = j["eps"].get<std::vector<double>>();
    }
    take(j, "sequence", c.sequence);
    take(j, "reference", c.reference);
    take(j, "out", c.out);
    take(j, "seed", c.seed);
    take(j, "threads", c.threads);
    take(j, "trials", c.trials);
    if (j.contains("rho")) c.rho = j["rho"].get<double>();
    take(j, "m", c.m);
    take(j, "n", c.n);
    take(j, "max_interval", c.max_interval);
    if (j.contains("constants")) {
      const json& k = j["constants"];
      take(k, "c0", c.constants.c0);
      take(k, "c", c.constants.c);
      take(k, "C_factor", c.C_factor);
      take(k, "delta0", c.constants.delta0);
      if (k.contains("delta0")) c.delta0 = c.constants.delta0;
    }
    if (j.contains("initial")) {
      const json& d = j["initial"];
      InitialSpec& s = c.initial;
      take(d, "type", s.type);
      if (d.contains("uL")) s.uL = state_of(d["uL"]);
      if (d.contains("uR")) s.uR = state_of(d["uR"]);
      take(d, "x0", s.x0);
      if (d.contains("breaks")) s.breaks = d["breaks"].get<std::vector<double>>();
      if (d.contains("states"))
        for (const auto& st : d["states"]) s.states.push_back(state_of(st));
      take(d, "tv", s.tv);
      take(d, "jumps", s.jumps);
      take(d, "width", s.width);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  for (std::size_t i = 1; i < c.eps.size(); ++i)
    if (!(c.eps[i] < c.eps[i - 1])) fail(ErrorKind::ConfigError, "eps ladder must be strictly decreasing");
  for (double e : c.eps)
    if (!(e > 0)) fail(ErrorKind::ConfigError, "eps must be positive");
  if (!(c.T > 0)) fail(ErrorKind::ConfigError, "T must be positive");
  const auto& t = c.initial.type;
  if (t != "riemann" && t != "piecewise" && t != "random")
    fail(ErrorKind::ConfigError, "initial.type must be riemann, piecewise or random");
  if (t == "piecewise" && c.initial.states.size() != c.initial.breaks.size() + 1)
    fail(ErrorKind::ConfigError, "piecewise data needs states.size() == breaks.size() + 1");
  if (c.reference != "exact" && c.reference != "fine") fail(ErrorKind::ConfigError, "reference must be exact or fine");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model;
  if (c.delta0) j["delta0"] = *c.delta0;
  if (c.domain) j["domain"] = {{"lo", json_of(c.domain->lo)}, {"hi", json_of(c.domain->hi)}};
  j["T"] = c.T;
  j["eps"] = c.eps;
  j["sequence"] = c.sequence;
  j["reference"] = c.reference;
  j["out"] = c.out;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["trials"] = c.trials;
  if (c.rho) j["rho"] = *c.rho;
  j["m"] = c.m;
  j["n"] = c.n;
  j["max_interval"] = c.max_interval;
  // delta0 only when set, otherwise the model default applies on reload
  j["constants"] = {{"c0", c.constants.c0}, {"c", c.constants.c}, {"C_factor", c.C_factor}};
  json d;
  d["type"] = c.initial.type;
  if (c.initial.uL.size()) d["uL"] = json_of(c.initial.uL);
  if (c.initial.uR.size()) d["uR"] = json_of(c.initial.uR);
  d["x0"] = c.initial.x0;
  d["breaks"] = c.initial.breaks;
  d["states"] = json::array();
  for (const auto& s : c.initial.states) d["states"].push_back(json_of(s));
  d["tv"] = c.initial.tv;
  d["jumps"] = c.initial.jumps;
  d["width"] = c.initial.width;
  j["initial"] = d;
  return j.dump(2);
}

ModelPtr model_from(const ExperimentConfig& c) {
  BuiltinOptions opt;
  opt.delta0 = c.delta0;
  opt.domain = c.domain;
  return make_builtin(c.model, opt);
}

InitialData initial_from(const SystemModel& model, const InitialSpec& s, std::uint64_t seed, std::uint64_t trial) {
  const int N = model.dimension();
  auto check = [&](const State& u) {
    if (u.size() != N) fail(ErrorKind::ConfigError, "state dimension does not match the model");
  };
  if (s.type == "riemann") {
    check(s.uL);
    check(s.uR);
    return riemann_data(s.uL, s.uR, s.x0);
  }
  if (s.type == "piecewise") {
    for (const auto& u : s.states) check(u);
    return piecewise_constant(s.breaks, s.states);
  }
  // random: start near a degeneracy manifold when there is one
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(trial), 0x51ed2701u};
  std::mt19937_64 rng(sq);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<State> anchors;
  for (const auto& f : model.fields())
    for (const auto& mf : f.manifolds)
      if (mf.point.size() == N) anchors.push_back(mf.point);
  State base = model.domain().center();
  if (!anchors.empty()) base = anchors[static_cast<std::size_t>(U(rng) * anchors.size()) % anchors.size()];
  for (int i = 0; i < N; ++i) base(i) += 0.1 * (U(rng) - 0.5);

  const int J = std::max(1, s.jumps);
  std::vector<double> breaks;
  for (int i = 0; i < J; ++i) breaks.push_back(s.width * U(rng));
  std::sort(breaks.begin(), breaks.end());
  std::normal_distribution<double> G(0.0, 1.0);
  std::vector<State> inc;
  double tot = 0;
  for (int i = 0; i < J; ++i) {
    State d(N);
    for (int q = 0; q < N; ++q) d(q) = G(rng);
    tot += d.norm();
    inc.push_back(d);
  }
  const double tv = s.tv * (0.5 + 0.5 * U(rng));
  std::vector<State> states{base};
  for (int i = 0; i < J; ++i) states.push_back(states.back() + inc[static_cast<std::size_t>(i)] * (tv / tot));
  // keep the path inside the domain
  const Box& box = model.domain();
  State lo = states[0], hi = states[0];
  for (const auto& u : states) {
    lo = lo.cwiseMin(u);
    hi = hi.cwiseMax(u);
  }
  State shift = State::Zero(N);
  for (int q = 0; q < N; ++q) {
    if (lo(q) < box.lo(q) + 1e-3) shift(q) = box.lo(q) + 1e-3 - lo(q);
    if (hi(q) > box.hi(q) - 1e-3) shift(q) = box.hi(q) - 1e-3 - hi(q);
  }
  for (auto& u : states) u += shift;
  return piecewise_constant(breaks, states);
}

EvolveOptions evolve_options_from(const ExperimentConfig& c, const SystemModel& model) {
  EvolveOptions o;
  o.constants = c.constants;
  o.constants.delta0 = c.delta0 ? *c.delta0 : model.delta0();
  o.C_factor = c.C_factor;
  o.threads = c.threads;
  return o;
}

}  // namespace glimm
