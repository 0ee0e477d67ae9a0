#include "repgeom/manifold.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <numbers>

using repgeom::ErrorCode;
using repgeom::ManifoldPoint;
using repgeom::Matrix;
using repgeom::MetricKind;
using repgeom::MetricSpec;
using testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<MetricSpec> metrics() { return testing::all_metrics(6, 6); }

bool spherical(MetricKind kind) {
  return kind == MetricKind::AngularCka || kind == MetricKind::AngularShape;
}

// Random point pair with a shared component so distances stay well inside
// the injectivity radius.
struct Triple {
  ManifoldPoint a, b, c;
};

Triple triple(Gen& gen, const MetricSpec& metric, int m = 20, int n = 5) {
  const Matrix base = gen.gaussian(m, n);
  auto near = [&] { return repgeom::embed(base + 0.7 * gen.gaussian(m, n), metric); };
  return {near(), near(), near()};
}

}  // namespace

TEST_CASE("metric axioms on random triples") {
  Gen gen(91);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    for (int trial = 0; trial < 25; ++trial) {
      const int n = trial % 2 == 0 ? 5 : 50;
      const auto [p, q, r] = triple(gen, metric, 30, n);
      const double pq = repgeom::metric_distance(p, q);
      CHECK(std::abs(pq - repgeom::metric_distance(q, p)) < 1e-9);
      CHECK(repgeom::metric_distance(p, p) < 1e-9);
      CHECK(pq <= repgeom::metric_distance(p, r) + repgeom::metric_distance(r, q) + 1e-8);
    }
  }
}

TEST_CASE("scale-invariant metrics ignore a global factor") {
  Gen gen(92);
  const Matrix x = gen.gaussian(20, 5);
  for (const MetricSpec& metric : {metrics()[0], metrics()[1]}) {
    CHECK(repgeom::metric_distance(repgeom::embed(x, metric), repgeom::embed(2.0 * x, metric)) < 1e-9);
  }
}

TEST_CASE("geodesic endpoints and arc length") {
  Gen gen(93);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    for (int trial = 0; trial < 5; ++trial) {
      const auto [p, q, unused] = triple(gen, metric);
      const double d = repgeom::metric_distance(p, q);
      CHECK(repgeom::geodesic_point(p, q, 0.0).same_as(p));
      CHECK(repgeom::metric_distance(repgeom::geodesic_point(p, q, 1.0), q) < 1e-6);
      const ManifoldPoint mid = repgeom::geodesic_point(p, q, 0.5);
      CHECK(std::abs(repgeom::metric_distance(p, mid) - d / 2) < 1e-6);
      CHECK(std::abs(repgeom::metric_distance(mid, q) - d / 2) < 1e-6);
      if (metric.kind == MetricKind::EuclideanShape) continue;
      for (int k = 1; k <= 9; ++k) {
        const double t = k / 10.0;
        CHECK(std::abs(repgeom::metric_distance(p, repgeom::geodesic_point(p, q, t)) - t * d) < 1e-6);
      }
    }
  }
}

TEST_CASE("log and exp are mutually inverse") {
  Gen gen(94);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    for (int trial = 0; trial < 5; ++trial) {
      const auto [p, q, unused] = triple(gen, metric);
      const repgeom::TangentVector w = repgeom::log_map(p, q);
      CHECK(repgeom::metric_distance(repgeom::exp_map(p, w), q) < 1e-8);
      const ManifoldPoint half = repgeom::exp_map(p, repgeom::scaled(w, 0.5));
      CHECK(repgeom::metric_distance(half, repgeom::geodesic_point(p, q, 0.5)) < 1e-8);
      if (metric.kind != MetricKind::EuclideanShape) {
        CHECK(std::abs(repgeom::tangent_norm(w) - repgeom::metric_distance(p, q)) < 1e-8);
      }
    }
  }
}

TEST_CASE("degenerate inputs give zero tangents and constant geodesics") {
  Gen gen(95);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    const ManifoldPoint p = repgeom::embed(gen.gaussian(12, 4), metric);
    const repgeom::TangentVector w = repgeom::log_map(p, p);
    CHECK(w.direction.norm() == 0.0);
    CHECK(repgeom::metric_distance(repgeom::exp_map(p, w), p) < 1e-9);
    CHECK(repgeom::geodesic_point(p, p, 0.7).same_as(p));
  }
}

TEST_CASE("angles along a geodesic and back on themselves") {
  Gen gen(96);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    const auto [p, q, unused] = triple(gen, metric);
    const ManifoldPoint mid = repgeom::geodesic_point(p, q, 0.5);
    CHECK(std::abs(repgeom::angle_at(p, mid, q) - kPi) < 1e-3);
    CHECK(repgeom::angle_at(q, p, q) < 1e-8);
    CHECK(testing::error_code([&] { repgeom::angle_at(p, p, q); }) == ErrorCode::DegenerateAngle);
  }
}

TEST_CASE("angles match a finite-difference law of cosines") {
  Gen gen(97);
  const double s = 1e-3;
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    for (int trial = 0; trial < 3; ++trial) {
      const auto [a, b, c] = triple(gen, metric, 30, 5);
      const ManifoldPoint pa = repgeom::geodesic_point(b, a, s);
      const ManifoldPoint pc = repgeom::geodesic_point(b, c, s);
      const double x = repgeom::metric_distance(b, pa);
      const double y = repgeom::metric_distance(b, pc);
      const double z = repgeom::metric_distance(pa, pc);
      const double estimate = std::acos(std::clamp((x * x + y * y - z * z) / (2 * x * y), -1.0, 1.0));
      const double angle = repgeom::angle_at(a, b, c);
      // Euclidean shape distances are mean row norms, not the tangent norm.
      if (metric.kind != MetricKind::EuclideanShape) CHECK(std::abs(angle - estimate) < 1e-2);
      CHECK(std::abs(angle - repgeom::angle_at(c, b, a)) < 1e-12);
      CHECK(angle >= 0.0);
      CHECK(angle <= kPi);
    }
  }
}

TEST_CASE("projection onto a geodesic") {
  Gen gen(98);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    const auto [start, end, query] = triple(gen, metric, 10, 4);
    const auto on = repgeom::project_to_geodesic(repgeom::geodesic_point(start, end, 0.3), start, end);
    CHECK(std::abs(on.t_star - 0.3) < 1e-4);
    CHECK(on.residual_distance < 1e-6);
    CHECK(repgeom::project_to_geodesic(start, start, end).t_star < 1e-4);

    const auto r = repgeom::project_to_geodesic(query, start, end);
    CHECK(std::abs(r.t_star - testing::grid_argmin(query, start, end, 10000)) < 1e-3);
    CHECK(r.t_star >= 0.0);
    CHECK(r.t_star <= 1.0);
    CHECK(r.evaluations <= 200);
    CHECK(r.residual_distance <= repgeom::metric_distance(query, start) + 1e-9);
    CHECK(r.residual_distance <= repgeom::metric_distance(query, end) + 1e-9);
    CHECK(repgeom::metric_distance(r.projected_point, repgeom::geodesic_point(start, end, r.t_star)) <
          1e-9);
    CHECK(testing::error_code([&] { repgeom::project_to_geodesic(query, start, start); }) ==
          ErrorCode::DegenerateGeodesic);
  }
}

TEST_CASE("step decomposition") {
  Gen gen(99);
  for (const MetricSpec& metric : metrics()) {
    CAPTURE(metric.describe());
    const auto [from, target, other] = triple(gen, metric);
    const double span = repgeom::metric_distance(from, target);
    const auto pure = repgeom::decompose_step(from, repgeom::geodesic_point(from, target, 0.2), target);
    CHECK(pure.deviation < 1e-6);
    const double reach = repgeom::tangent_norm(repgeom::log_map(from, target));
    CHECK(std::abs(pure.progress - 0.2 * reach) < 1e-6);
    if (metric.kind != MetricKind::EuclideanShape) CHECK(std::abs(reach - span) < 1e-8);

    const auto still = repgeom::decompose_step(from, from, target);
    CHECK(still.progress == 0.0);
    CHECK(still.deviation == 0.0);

    const auto step = repgeom::decompose_step(from, other, target);
    CHECK(step.deviation >= 0.0);
    CHECK(std::abs(step.progress * step.progress + step.deviation * step.deviation -
                   step.step_norm * step.step_norm) < 1e-8);
    CHECK(testing::error_code([&] { repgeom::decompose_step(from, other, from); }) ==
          ErrorCode::DegenerateGeodesic);
  }
}

TEST_CASE("incomparable and non-finite points are rejected") {
  Gen gen(100);
  const Matrix x = gen.gaussian(10, 3);
  const auto all = metrics();
  const ManifoldPoint cka = repgeom::embed(x, all[0]);
  const ManifoldPoint shape = repgeom::embed(x, all[1]);
  CHECK(testing::error_code([&] { repgeom::metric_distance(cka, shape); }) ==
        ErrorCode::IncomparablePoints);
  const ManifoldPoint fewer = repgeom::embed(gen.gaussian(9, 3), all[0]);
  CHECK(testing::error_code([&] { repgeom::metric_distance(cka, fewer); }) ==
        ErrorCode::IncomparablePoints);
  repgeom::ShapeParams other;
  other.p = 6;
  other.alpha = 0.5;
  CHECK(testing::error_code([&] {
          repgeom::metric_distance(shape, repgeom::embed(x, MetricSpec::shape(other)));
        }) == ErrorCode::IncomparablePoints);

  Matrix bad = cka.payload();
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const ManifoldPoint nan_point(cka.metric(), bad, cka.stimuli());
  CHECK(testing::error_code([&] { repgeom::metric_distance(cka, nan_point); }) == ErrorCode::NonFinite);
  Matrix raw = x;
  raw(1, 1) = std::numeric_limits<double>::infinity();
  for (const MetricSpec& metric : all) {
    CHECK(testing::error_code([&] { repgeom::embed(raw, metric); }) == ErrorCode::NonFinite);
  }
}

TEST_CASE("tangents must belong to their base point") {
  Gen gen(101);
  for (const MetricSpec& metric : metrics()) {
    const auto [p, q, r] = triple(gen, metric);
    const repgeom::TangentVector w = repgeom::log_map(p, q);
    CHECK(testing::error_code([&] { repgeom::exp_map(q, w); }) == ErrorCode::TangentBaseMismatch);
    CHECK(testing::error_code([&] { repgeom::tangent_inner(w, repgeom::log_map(q, r)); }) ==
          ErrorCode::TangentBaseMismatch);
  }
}

TEST_CASE("antipodal points on the sphere have no unique log map") {
  Gen gen(102);
  const ManifoldPoint p = repgeom::embed(gen.gaussian(8, 3), MetricSpec::angular_cka());
  const ManifoldPoint anti(p.metric(), -p.payload(), p.stimuli());
  CHECK(std::abs(repgeom::metric_distance(p, anti) - kPi) < 1e-12);
  CHECK(testing::error_code([&] { repgeom::log_map(p, anti); }) == ErrorCode::AntipodalPoints);
}

TEST_CASE("output ranges of the spherical metrics") {
  Gen gen(103);
  for (const MetricSpec& metric : metrics()) {
    if (!spherical(metric.kind)) continue;
    for (int trial = 0; trial < 20; ++trial) {
      const double d = repgeom::metric_distance(repgeom::embed(gen.gaussian(10, 3), metric),
                                                repgeom::embed(gen.gaussian(10, 3), metric));
      CHECK(d >= 0.0);
      CHECK(d <= kPi);
    }
  }
}

TEST_CASE("metric spec parameter validation") {
  repgeom::ShapeParams bad_alpha;
  bad_alpha.alpha = 1.5;
  CHECK(testing::error_code([&] { MetricSpec::shape(bad_alpha).validate(); }) ==
        ErrorCode::InvalidArgument);
  repgeom::AirParams bad_ridge;
  bad_ridge.epsilon = -1.0;
  CHECK(testing::error_code([&] { MetricSpec::air(bad_ridge).validate(); }) ==
        ErrorCode::InvalidArgument);
  CHECK(testing::error_code([] {
          MetricSpec::angular_cka(repgeom::KernelSpec::squared_exponential(0.0)).validate();
        }) == ErrorCode::InvalidArgument);
  for (const char* name : {"angular-cka", "angular-shape", "euclidean-shape", "air-gram", "air-cov"}) {
    const auto kind = repgeom::parse_metric_name(name);
    REQUIRE(kind.has_value());
    CHECK(repgeom::metric_name(*kind) == name);
  }
  CHECK(!repgeom::parse_metric_name("cosine").has_value());
}
