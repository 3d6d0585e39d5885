#include <cmath>
#include <numbers>

#include "doctest.h"
#include "presym/errors.hpp"
#include "presym/presym2d.hpp"

using namespace presym;

namespace {

constexpr double kPi = std::numbers::pi;

// Vertex of y = x^2 with its circle of curvature (radius 1/2) touching a
// circle of radius 0.3 internally at angle 20 degrees.
struct A1A3Scene {
  PlaneCurve m = PlaneCurve::local_graph({0, 0, 1});
  PlaneCurve n;
  double t0 = 20.0 * kPi / 180.0;
  double r0 = 0.5;
  explicit A1A3Scene(double shift = 0.0) {
    const Eigen::Vector2d center(0, 0.5);
    const Eigen::Vector2d dir(std::cos(t0), std::sin(t0));
    n = PlaneCurve::circle(0.3).placed(0.0, center + (0.2 - shift) * dir);
  }
};

}  // namespace

TEST_CASE("residual vanishes on the diagonal and on the ellipse symmetry lines") {
  const auto e = PlaneCurve::ellipse(2.0, 1.0);
  for (double s : {0.1, 0.9, 2.0, 4.4}) {
    CHECK(residual_g(e, s, s) == 0.0);
    CHECK(std::abs(residual_g(e, s, -s)) < 1e-14);
    CHECK(std::abs(residual_g(e, s, kPi - s)) < 1e-14);
  }
  // Golden value from a direct evaluation of the closed form.
  CHECK(residual_g(e, 0.3, 1.1) == doctest::Approx(0.08486268650409845).epsilon(1e-13));
}

TEST_CASE("residual gradient against finite differences") {
  const auto c = PlaneCurve::perturbed(1.5, 1.0, {0, 0, 0.05, 0.1}, {});
  const double s = 0.4, t = 2.2, h = 1e-6;
  const Eigen::Vector2d grad = residual_g_gradient(c, s, t);
  CHECK(grad.x() == doctest::Approx((residual_g(c, s + h, t) - residual_g(c, s - h, t)) / (2 * h)).epsilon(1e-7));
  CHECK(grad.y() == doctest::Approx((residual_g(c, s, t + h) - residual_g(c, s, t - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("ellipse trace lies on the two symmetry lines") {
  const auto e = PlaneCurve::ellipse(2.0, 1.0);
  const auto trace = trace_presym2d(e, {.grid = 128});
  CHECK(trace.branch_count == 4);
  CHECK(trace.samples.size() > 100);
  double worst = 0.0;
  for (const auto& p : trace.samples) {
    // s + t = 0 (mod pi) covers both t = -s and t = pi - s.
    worst = std::max(worst, std::abs(wrap_difference(p.s + p.t, 0.0, kPi)) / std::sqrt(2.0));
    CHECK(p.residual < 1e-10);
    const auto circle = bitangent_circle(e, p.s, p.t);
    CHECK(circle.finite);
    CHECK(circle.defect < 1e-8);
  }
  MESSAGE("worst line deviation " << worst);
  CHECK(worst < 1e-8);
}

TEST_CASE("circle has no isolated branches") {
  try {
    trace_presym2d(PlaneCurve::circle(1.0));
    FAIL("expected NoBranches");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NoBranches);
  }
}

TEST_CASE("perturbed ellipse trace is swap-symmetric and bends") {
  const auto c = PlaneCurve::perturbed(2.0, 1.0, {0, 0, 0, 0.04}, {0, 0, 0, 0.02});
  const auto trace = trace_presym2d(c, {.grid = 128});
  CHECK(trace_symmetry_defect(trace, c.period()) < 1e-8);
  double bend = 0.0;
  for (const auto& p : trace.samples) {
    bend = std::max(bend, std::abs(wrap_difference(p.s + p.t, 0.0, kPi)));
    CHECK(bitangent_circle(c, p.s, p.t).defect < 1e-8);
    CHECK(std::abs(wrap_difference(p.s, p.t, c.period())) >= 0.05);
  }
  CHECK(bend > 1e-3);
}

TEST_CASE("no bitangent pair inside an arc of monotone curvature") {
  // On the ellipse the curvature is monotone on (0, pi/2).
  const auto e = PlaneCurve::ellipse(2.0, 1.0);
  const auto trace = trace_presym2d(e, {.grid = 128});
  for (const auto& p : trace.samples) {
    const bool s_in = p.s > 1e-6 && p.s < kPi / 2 - 1e-6;
    const bool t_in = p.t > 1e-6 && p.t < kPi / 2 - 1e-6;
    CHECK_FALSE((s_in && t_in));
  }
}

TEST_CASE("A1A3: off-diagonal branch has an inflexion") {
  const A1A3Scene scene;
  const auto a = a1a3_analyze(scene.m, scene.n, 0.0, scene.t0, scene.r0);
  CHECK(std::abs(a.dt1) < 1e-6);
  CHECK(std::abs(a.dt2) < 1e-6);
  CHECK(std::abs(a.dt3) > 1e-3);
  CHECK(std::abs(a.dr1) < 1e-6);
  CHECK(std::abs(a.dr2) < 1e-6);
  CHECK(a.err_dt3 < 0.1 * std::abs(a.dt3));
  CHECK(a.samples.size() == 41);
}

TEST_CASE("A1A3: an A2 point is rejected") {
  const A1A3Scene scene;
  const auto a2 = PlaneCurve::local_graph({0, 0, 1, 0.5});
  try {
    a1a3_analyze(a2, scene.n, 0.0, scene.t0, scene.r0);
    FAIL("expected ContactMismatch");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ContactMismatch);
  }
}

TEST_CASE("A1A3 family: two critical points on one side, none on the other") {
  const auto before = sample_bitangent_branch(A1A3Scene(-2e-3).m, A1A3Scene(-2e-3).n, 0.0,
                                              A1A3Scene().t0, 0.5, -0.2, 0.2, 801);
  const auto after = sample_bitangent_branch(A1A3Scene(2e-3).m, A1A3Scene(2e-3).n, 0.0,
                                             A1A3Scene().t0, 0.5, -0.2, 0.2, 801);
  CHECK(count_local_extrema(before) == 2);
  CHECK(count_local_extrema(after) == 0);
}
