#include <cmath>

#include "glimm/errors.hpp"
#include "glimm/system_model.hpp"

namespace glimm {

namespace {

Box interval(double lo, double hi) { return {State::Constant(1, lo), State::Constant(1, hi)}; }

Box box2(double lo0, double hi0, double lo1, double hi1) {
  Box b{State(2), State(2)};
  b.lo << lo0, lo1;
  b.hi << hi0, hi1;
  return b;
}

void apply(const BuiltinOptions& opt, ModelDefinition& def) {
  if (opt.domain) def.domain = *opt.domain;
  if (opt.delta0) def.delta0 = *opt.delta0;
  if (opt.speed_map) def.speed_map = *opt.speed_map;
}

}  // namespace

ModelPtr make_scalar(const std::string& name, std::function<double(double)> f,
                     std::function<double(double)> df, const BuiltinOptions& opt) {
  ModelDefinition def;
  def.name = name;
  def.dimension = 1;
  def.flux = [f](const State& u) { return State::Constant(1, f(u[0])); };
  def.jacobian = [df](const State& u) { return Matrix::Constant(1, 1, df(u[0])); };
  def.domain = interval(-1, 1);
  apply(opt, def);
  return SystemModel::create(std::move(def));
}

ModelPtr make_burgers(const BuiltinOptions& opt) {
  BuiltinOptions o = opt;
  if (!o.domain) o.domain = interval(0, 1);
  if (!o.speed_map && !opt.domain) o.speed_map = SpeedMap::identity();
  return make_scalar(
      "burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; }, o);
}

ModelPtr make_cubic(const BuiltinOptions& opt) {
  BuiltinOptions o = opt;
  if (!o.domain) o.domain = interval(-1.2, 1.2);
  return make_scalar(
      "cubic", [](double u) { return u * u * u; }, [](double u) { return 3 * u * u; }, o);
}

ModelPtr make_quartic(const BuiltinOptions& opt) {
  BuiltinOptions o = opt;
  if (!o.domain) o.domain = interval(-1.4, 1.4);
  return make_scalar(
      "quartic",
      [](double u) {
        const double u3 = u * u * u;
        return u3 * u * u / 20.0 - u3 / 6.0;
      },
      [](double u) {
        const double u2 = u * u;
        return 0.25 * u2 * u2 - 0.5 * u2;
      },
      o);
}

ModelPtr make_p_system(const BuiltinOptions& opt) {
  ModelDefinition def;
  def.name = "psystem";
  def.dimension = 2;
  // state (v, u): v_t - u_x = 0, u_t + p(v)_x = 0
  def.flux = [](const State& w) {
    State f(2);
    const double v = w[0];
    f << -w[1], -(v + v * v * v / 3.0);
    return f;
  };
  def.jacobian = [](const State& w) {
    Matrix j(2, 2);
    const double v = w[0];
    j << 0.0, -1.0, -(1.0 + v * v), 0.0;
    return j;
  };
  def.domain = box2(-0.5, 0.5, -0.5, 0.5);
  apply(opt, def);
  ManifoldDescriptor md;
  md.g = [](const State& w) { return w[0]; };
  md.point = State::Zero(2);
  md.label = "v=0";
  def.manifolds = {{md}, {md}};
  return SystemModel::create(std::move(def));
}

ModelPtr make_linear(const BuiltinOptions& opt) {
  ModelDefinition def;
  def.name = "linear";
  def.dimension = 2;
  def.flux = [](const State& w) {
    State f(2);
    f << 0.25 * w[0], 0.75 * w[1];
    return f;
  };
  def.jacobian = [](const State&) {
    Matrix j = Matrix::Zero(2, 2);
    j(0, 0) = 0.25;
    j(1, 1) = 0.75;
    return j;
  };
  def.domain = box2(-1, 1, -1, 1);
  def.speed_map = SpeedMap::identity();
  apply(opt, def);
  return SystemModel::create(std::move(def));
}

std::vector<std::string> builtin_model_names() { return {"burgers", "cubic", "quartic", "psystem", "linear"}; }

ModelPtr make_builtin(const std::string& name, const BuiltinOptions& opt) {
  if (name == "burgers") return make_burgers(opt);
  if (name == "cubic") return make_cubic(opt);
  if (name == "quartic") return make_quartic(opt);
  if (name == "psystem" || name == "p-system") return make_p_system(opt);
  if (name == "linear") return make_linear(opt);
  fail(ErrorKind::ConfigError, "unknown model '" + name + "'");
}

}  // namespace glimm
