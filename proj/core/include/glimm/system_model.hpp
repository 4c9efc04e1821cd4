#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glimm/types.hpp"

namespace glimm {

// Affine normalization of characteristic speeds: normalized = a * raw + b.
struct SpeedMap {
  double a = 1.0;
  double b = 0.0;
  double apply(double raw) const { return a * raw + b; }
  double invert(double normalized) const { return (normalized - b) / a; }
  static SpeedMap identity() { return {}; }
};

enum class FieldKind { GNL, LD, NGNL };
const char* to_string(FieldKind kind);

// Zero level set {g = 0} of a scalar function on state space.
struct ManifoldDescriptor {
  std::function<double(const State&)> g;
  // sign of the derivative of (grad lambda_k . r_k) along r_k on the manifold
  int curvature_sign = 0;
  State point;  // a state on the manifold
  std::string label;
};

struct FieldInfo {
  int k = 0;
  FieldKind kind = FieldKind::GNL;
  std::vector<ManifoldDescriptor> manifolds;
};

struct EigenDecomposition {
  Eigen::VectorXd lambdas;      // normalized speeds, strictly increasing
  Eigen::VectorXd raw_lambdas;  // eigenvalues of the Jacobian
  Matrix right;                 // column k = r_k, unit length
  Matrix left;                  // row k = l_k, <l_h, r_k> = delta_hk
};

struct Box {
  State lo;
  State hi;
  bool contains(const State& u, double tol = 1e-12) const;
  State center() const { return 0.5 * (lo + hi); }
};

struct ModelDefinition {
  std::string name;
  int dimension = 1;
  std::function<State(const State&)> flux;
  std::function<Matrix(const State&)> jacobian;  // optional; finite differences of flux otherwise
  Box domain;
  double delta0 = 0.05;
  std::optional<SpeedMap> speed_map;  // computed from the domain when absent
  int speed_grid = 41;                // samples per axis for the speed map
  int classification_grid = 201;      // samples per axis (1-D) for field classification
  // Analytic manifold descriptors per field; empty entries are detected numerically.
  std::vector<std::vector<ManifoldDescriptor>> manifolds;
  double small_data_bound = 0.0;  // max |uR - uL| for the Riemann solver; 0 = domain diameter
};

class SystemModel {
 public:
  static std::shared_ptr<const SystemModel> create(ModelDefinition def);

  const std::string& name() const { return def_.name; }
  int dimension() const { return def_.dimension; }
  const Box& domain() const { return def_.domain; }
  const SpeedMap& speed_map() const { return speed_map_; }
  double delta0() const { return def_.delta0; }
  double small_data_bound() const { return small_data_bound_; }
  const std::vector<FieldInfo>& fields() const { return fields_; }
  const FieldInfo& field(int k) const { return fields_.at(static_cast<std::size_t>(k)); }
  const ModelDefinition& definition() const { return def_; }

  State flux(const State& u) const { return def_.flux(u); }
  Matrix jacobian(const State& u) const;

  // Throws NotStrictlyHyperbolic / OutOfDomain.
  EigenDecomposition eig(const State& u) const;
  // Same as eig without the domain check.
  EigenDecomposition eig_unchecked(const State& u) const;

  double raw_speed(int k, const State& u) const;
  double speed(int k, const State& u) const { return speed_map_.apply(raw_speed(k, u)); }
  State right_eigenvector(int k, const State& u) const;

  // grad(lambda_k) . r_k by central differences along r_k (raw speeds).
  double nonlinearity(int k, const State& u) const;
  // grad(grad(lambda_k) . r_k) . r_k
  double nonlinearity_derivative(int k, const State& u) const;

  double state_scale() const { return scale_; }

 private:
  explicit SystemModel(ModelDefinition def);
  void orient(int k, State& r) const;

  ModelDefinition def_;
  SpeedMap speed_map_;
  std::vector<FieldInfo> fields_;
  std::vector<State> reference_vectors_;
  double scale_ = 1.0;
  double small_data_bound_ = 1.0;
};

using ModelPtr = std::shared_ptr<const SystemModel>;

EigenDecomposition eig(const SystemModel& model, const State& u);

FieldInfo classify_field(const SystemModel& model, int k, int sample_grid);

struct Delta0Report {
  int k = 0;
  double delta0 = 0.0;
  double min_abs_derivative = 0.0;
  std::size_t samples = 0;
};

// Throws Delta0TooLarge with the offending sample point.
Delta0Report validate_delta0(const SystemModel& model, int k);
Delta0Report validate_delta0(const SystemModel& model, int k, double delta0);

// Built-in models.
struct BuiltinOptions {
  std::optional<Box> domain;
  std::optional<double> delta0;
  std::optional<SpeedMap> speed_map;
};

ModelPtr make_burgers(const BuiltinOptions& opt = {});
ModelPtr make_cubic(const BuiltinOptions& opt = {});
ModelPtr make_quartic(const BuiltinOptions& opt = {});  // lambda(u) = u^4/4 - u^2/2
ModelPtr make_p_system(const BuiltinOptions& opt = {});  // p(v) = -(v + v^3/3), state (v, u)
ModelPtr make_linear(const BuiltinOptions& opt = {});    // A = diag(1/4, 3/4)
// Scalar law from a flux and its derivative.
ModelPtr make_scalar(const std::string& name, std::function<double(double)> f,
                     std::function<double(double)> df, const BuiltinOptions& opt);

ModelPtr make_builtin(const std::string& name, const BuiltinOptions& opt = {});
std::vector<std::string> builtin_model_names();

}  // namespace glimm
