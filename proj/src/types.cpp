#include "repgeom/error.hpp"
#include "repgeom/linalg.hpp"
#include "repgeom/types.hpp"

#include <cmath>
#include <sstream>

namespace repgeom {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IncomparablePoints: return "IncomparablePoints";
    case ErrorCode::DegenerateGeodesic: return "DegenerateGeodesic";
    case ErrorCode::AntipodalPoints: return "AntipodalPoints";
    case ErrorCode::TangentBaseMismatch: return "TangentBaseMismatch";
    case ErrorCode::InvalidTangent: return "InvalidTangent";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::ZeroAfterCentering: return "ZeroAfterCentering";
    case ErrorCode::RankDeficientWhitening: return "RankDeficientWhitening";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroNormShape: return "ZeroNormShape";
    case ErrorCode::SingularSylvester: return "SingularSylvester";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::InvalidDistanceMatrix: return "InvalidDistanceMatrix";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::OutputLocked: return "OutputLocked";
  }
  return "Unknown";
}

std::string metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::AngularCka: return "angular-cka";
    case MetricKind::AngularShape: return "angular-shape";
    case MetricKind::EuclideanShape: return "euclidean-shape";
    case MetricKind::AirGram: return "air-gram";
    case MetricKind::AirCovariance: return "air-cov";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric_name(const std::string& name) {
  for (auto kind : {MetricKind::AngularCka, MetricKind::AngularShape, MetricKind::EuclideanShape,
                    MetricKind::AirGram, MetricKind::AirCovariance}) {
    if (metric_name(kind) == name) return kind;
  }
  return std::nullopt;
}

MetricSpec MetricSpec::angular_cka(KernelSpec kernel) {
  MetricSpec spec;
  spec.kind = MetricKind::AngularCka;
  spec.kernel = kernel;
  spec.validate();
  return spec;
}

MetricSpec MetricSpec::shape(const ShapeParams& params) {
  MetricSpec spec;
  spec.kind = params.variant == ShapeVariant::Angular ? MetricKind::AngularShape
                                                      : MetricKind::EuclideanShape;
  spec.p = params.p;
  spec.alpha = params.alpha;
  spec.validate();
  return spec;
}

MetricSpec MetricSpec::air(const AirParams& params) {
  MetricSpec spec;
  spec.epsilon = params.epsilon;
  if (params.embedding == AirEmbedding::GramKernelRidge) {
    spec.kind = MetricKind::AirGram;
    spec.kernel = params.kernel;
  } else {
    spec.kind = MetricKind::AirCovariance;
    spec.p = params.p;
  }
  spec.validate();
  return spec;
}

ShapeParams MetricSpec::shape_params() const {
  return {p, alpha, kind == MetricKind::EuclideanShape ? ShapeVariant::Euclidean : ShapeVariant::Angular};
}

AirParams MetricSpec::air_params() const {
  AirParams params;
  params.embedding =
      kind == MetricKind::AirGram ? AirEmbedding::GramKernelRidge : AirEmbedding::CovarianceRidge;
  params.kernel = kernel;
  params.p = p;
  params.epsilon = epsilon;
  return params;
}

void MetricSpec::validate() const {
  if (kernel.length_scale && !(*kernel.length_scale > 0.0 && std::isfinite(*kernel.length_scale))) {
    fail(ErrorCode::InvalidArgument, "kernel length scale must be positive");
  }
  switch (kind) {
    case MetricKind::AngularCka:
      break;
    case MetricKind::AngularShape:
    case MetricKind::EuclideanShape:
      if (p < 1) fail(ErrorCode::InvalidArgument, "shape dimensionality p must be >= 1");
      if (!(alpha >= 0.0 && alpha <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "whitening alpha must lie in [0, 1]");
      }
      break;
    case MetricKind::AirCovariance:
      if (p < 1) fail(ErrorCode::InvalidArgument, "covariance dimensionality p must be >= 1");
      [[fallthrough]];
    case MetricKind::AirGram:
      if (!(epsilon > 0.0 && std::isfinite(epsilon))) {
        fail(ErrorCode::InvalidArgument, "ridge epsilon must be positive");
      }
      break;
  }
}

std::string MetricSpec::describe() const {
  std::ostringstream out;
  out << metric_name(kind);
  auto kernel_text = [&] {
    if (kernel.kind == KernelKind::Linear) return std::string("linear");
    if (kernel.length_scale) return "se(tau=" + std::to_string(*kernel.length_scale) + ")";
    return std::string("se(median)");
  };
  switch (kind) {
    case MetricKind::AngularCka: out << " kernel=" << kernel_text(); break;
    case MetricKind::AngularShape:
    case MetricKind::EuclideanShape: out << " p=" << p << " alpha=" << alpha; break;
    case MetricKind::AirGram: out << " kernel=" << kernel_text() << " epsilon=" << epsilon; break;
    case MetricKind::AirCovariance: out << " p=" << p << " epsilon=" << epsilon; break;
  }
  return out.str();
}

ManifoldPoint::ManifoldPoint(MetricSpec metric, Matrix payload, Index stimuli)
    : metric_(std::move(metric)),
      payload_(std::make_shared<const Matrix>(std::move(payload))),
      stimuli_(stimuli) {}

bool ManifoldPoint::comparable_with(const ManifoldPoint& other) const {
  if (empty() || other.empty()) return false;
  return metric_ == other.metric_ && stimuli_ == other.stimuli_ &&
         payload_->rows() == other.payload_->rows() && payload_->cols() == other.payload_->cols();
}

bool ManifoldPoint::same_as(const ManifoldPoint& other) const {
  if (!comparable_with(other)) return false;
  return payload_ == other.payload_ || *payload_ == *other.payload_;
}

void ManifoldPoint::validate() const {
  if (empty()) fail(ErrorCode::InvalidArgument, "empty manifold point");
  const Matrix& x = *payload_;
  require_finite(x, "manifold point");
  switch (metric_.kind) {
    case MetricKind::AngularCka: {
      if (x.rows() != x.cols()) fail(ErrorCode::ShapeMismatch, "normalized Gram must be square");
      if ((x - x.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        fail(ErrorCode::InvalidArgument, "normalized Gram is not symmetric");
      }
      if (x.rowwise().sum().cwiseAbs().maxCoeff() > 1e-8) {
        fail(ErrorCode::InvalidArgument, "normalized Gram is not centered");
      }
      if (std::abs(x.norm() - 1.0) > 1e-10) {
        fail(ErrorCode::InvalidArgument, "normalized Gram does not have unit Frobenius norm");
      }
      break;
    }
    case MetricKind::AngularShape:
    case MetricKind::EuclideanShape: {
      if (x.colwise().mean().cwiseAbs().maxCoeff() > 1e-8) {
        fail(ErrorCode::InvalidArgument, "pre-shape columns are not centered");
      }
      break;
    }
    case MetricKind::AirGram:
    case MetricKind::AirCovariance: {
      if (x.rows() != x.cols()) fail(ErrorCode::ShapeMismatch, "SPD point must be square");
      if ((x - x.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        fail(ErrorCode::InvalidArgument, "SPD point is not symmetric");
      }
      if (symmetric_eigen(x).values.minCoeff() <= 0.0) {
        fail(ErrorCode::NotPositiveDefinite, "SPD point has a non-positive eigenvalue");
      }
      break;
    }
  }
}

}  // namespace repgeom
