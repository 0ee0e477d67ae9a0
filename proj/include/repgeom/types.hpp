#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>

namespace repgeom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class KernelKind { Linear, SquaredExponential };

/// Kernel used to build Gram matrices. A missing length scale on the
/// squared-exponential kernel selects the median heuristic.
struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  std::optional<double> length_scale;

  static KernelSpec linear() { return {}; }
  static KernelSpec squared_exponential(std::optional<double> tau = std::nullopt) {
    return {KernelKind::SquaredExponential, tau};
  }

  bool operator==(const KernelSpec&) const = default;
};

enum class ShapeVariant { Angular, Euclidean };

struct ShapeParams {
  int p = 100;
  double alpha = 0.0;
  ShapeVariant variant = ShapeVariant::Angular;

  bool operator==(const ShapeParams&) const = default;
};

enum class AirEmbedding { GramKernelRidge, CovarianceRidge };

struct AirParams {
  AirEmbedding embedding = AirEmbedding::GramKernelRidge;
  KernelSpec kernel = KernelSpec::squared_exponential();
  int p = 100;
  double epsilon = 0.05;

  bool operator==(const AirParams&) const = default;
};

enum class MetricKind { AngularCka, AngularShape, EuclideanShape, AirGram, AirCovariance };

std::string metric_name(MetricKind kind);
std::optional<MetricKind> parse_metric_name(const std::string& name);

/// Metric family plus every embedding parameter. Only the fields relevant to
/// `kind` are meaningful; the named constructors zero the rest so that two
/// specs built the same way compare equal.
struct MetricSpec {
  MetricKind kind = MetricKind::AngularCka;
  KernelSpec kernel;
  int p = 0;
  double alpha = 0.0;
  double epsilon = 0.0;

  static MetricSpec angular_cka(KernelSpec kernel = KernelSpec::linear());
  static MetricSpec shape(const ShapeParams& params);
  static MetricSpec air(const AirParams& params);

  ShapeParams shape_params() const;
  AirParams air_params() const;
  void validate() const;
  std::string describe() const;

  bool operator==(const MetricSpec&) const = default;
};

/// A metric-tagged embedded representation. The payload is immutable and
/// shared, so copies are cheap.
class ManifoldPoint {
 public:
  ManifoldPoint() = default;
  ManifoldPoint(MetricSpec metric, Matrix payload, Index stimuli);

  const MetricSpec& metric() const noexcept { return metric_; }
  MetricKind kind() const noexcept { return metric_.kind; }
  const Matrix& payload() const noexcept { return *payload_; }
  Index stimuli() const noexcept { return stimuli_; }
  bool empty() const noexcept { return payload_ == nullptr; }

  bool comparable_with(const ManifoldPoint& other) const;
  bool same_as(const ManifoldPoint& other) const;

  /// Checks the payload invariants for this metric family; throws on violation.
  void validate() const;

 private:
  MetricSpec metric_;
  std::shared_ptr<const Matrix> payload_;
  Index stimuli_ = 0;
};

struct TangentVector {
  ManifoldPoint base;
  Matrix direction;
};

}  // namespace repgeom
