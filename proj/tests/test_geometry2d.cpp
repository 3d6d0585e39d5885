#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "presym/errors.hpp"
#include "presym/geometry2d.hpp"

using namespace presym;

TEST_CASE("curve frame of the unit circle") {
  const auto f = curve_frame(PlaneCurve::circle(1.0), 0.0);
  CHECK(f.point.x() == doctest::Approx(1.0));
  CHECK(f.point.y() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f.tangent.y() == doctest::Approx(1.0));
  CHECK(f.curvature == doctest::Approx(1.0));
}

TEST_CASE("ellipse curvature at the end of the major axis") {
  const auto e = PlaneCurve::ellipse(2.0, 1.0);
  CHECK(curve_frame(e, 0.0).curvature == doctest::Approx(2.0));
  // Closed form against an arbitrary parameter.
  for (double s : {0.3, 1.1, 2.5, 4.0}) {
    const double closed = 2.0 / std::pow(4 * std::sin(s) * std::sin(s) + std::cos(s) * std::cos(s), 1.5);
    CHECK(curve_frame(e, s).curvature == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("graph curvature at a critical point") {
  const auto g = PlaneCurve::local_graph({0, 0, 1});
  CHECK(curve_frame(g, 0.0).curvature == doctest::Approx(2.0));
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const std::vector<PlaneCurve> curves = {
      PlaneCurve::ellipse(2.0, 1.0),
      PlaneCurve::perturbed(1.5, 1.0, {0, 0, 0.05, 0.1}, {0, 0.02, 0, 0.03}).placed(0.4, {1, -2}),
      PlaneCurve::local_graph({0, 0, 1, 0.3, 0.5, -0.2, 0.1})};
  for (const auto& c : curves) {
    for (double s : {-0.4, 0.2, 0.9}) {
      const auto f = curve_frame(c, s);
      CHECK(std::abs(f.tangent.norm() - 1.0) < 1e-12);
      const double h = 1e-5;
      for (int n = 0; n < 6; ++n) {
        const Eigen::Vector2d fd =
            (c.derivative(s + h, n) - c.derivative(s - h, n)) / (2 * h);
        const Eigen::Vector2d exact = c.derivative(s, n + 1);
        CHECK((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()));
      }
      const Eigen::Vector2d dir = (c.point(s + h) - c.point(s - h)).normalized();
      CHECK((dir - f.tangent).norm() < 1e-8);
    }
  }
}

TEST_CASE("curvature derivative against finite differences") {
  const auto c = PlaneCurve::perturbed(1.5, 1.0, {0, 0, 0.05, 0.1}, {});
  const double s = 0.7, h = 1e-5;
  const double fd = (curve_frame(c, s + h).curvature - curve_frame(c, s - h).curvature) / (2 * h);
  CHECK(curvature_derivative(c, s) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("vertex classification table") {
  CHECK(vertex_classify({1, 0, 0, 0}) == VertexContact::A3);
  CHECK(vertex_classify({1, 1, 1, 0}) == VertexContact::A4);
  CHECK(vertex_classify({1, 1, 0, 1}) == VertexContact::A5);
  CHECK(vertex_classify({1, 1, 0, 2}) == VertexContact::BeyondA5);
  CHECK(vertex_classify({-2, -8, 0, -63}) == VertexContact::A5);
  CHECK(vertex_classify({-2, -8, 0, -64}) == VertexContact::BeyondA5);
  CHECK(vertex_classify({0.5, 0.125, 0, 2 * std::pow(0.5, 5)}) == VertexContact::BeyondA5);
}

TEST_CASE("vertex classification is invariant under uniform scaling") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2, 2), lam(0.1, 10);
  for (int k = 0; k < 200; ++k) {
    LocalVertexModel m{u(rng), u(rng), u(rng), u(rng)};
    if (std::abs(m.a2) < 0.05) continue;
    // Boundary cases exercised by construction on a third of the draws.
    if (k % 3 == 1) m.a4 = m.a2 * m.a2 * m.a2;
    if (k % 3 == 2) {
      m.a4 = m.a2 * m.a2 * m.a2;
      m.a5 = 0;
    }
    const double l = lam(rng);
    // Powers of two keep the boundary relations exact under scaling.
    const double l2 = std::exp2(std::round(std::log2(l)));
    const LocalVertexModel scaled{l2 * m.a2, l2 * l2 * l2 * m.a4, std::pow(l2, 4) * m.a5,
                                  std::pow(l2, 5) * m.a6};
    CHECK(vertex_classify(scaled) == vertex_classify(m));
  }
}

TEST_CASE("diagonal structure follows the parity of the contact") {
  auto a3 = diagonal_structure({1, 0, 0, 0});
  CHECK(a3.kind == DiagonalKind::TransverseBranch);
  CHECK(a3.branch_direction.x() == doctest::Approx(-a3.branch_direction.y()));
  CHECK(diagonal_structure({1, 1, 1, 0}).kind == DiagonalKind::IsolatedPoint);
  CHECK(diagonal_structure({1, 1, 0, 1}).kind == DiagonalKind::TransverseBranch);
  CHECK(diagonal_structure({3, 27, -0.5, 1}).kind == DiagonalKind::IsolatedPoint);
  try {
    diagonal_structure({1, 1, 0, 2});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDegeneracy);
  }
}
