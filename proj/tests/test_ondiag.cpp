#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "presym/errors.hpp"
#include "presym/ondiag.hpp"

using namespace presym;
using fixtures::ondiag_spec;

namespace {

BitangentScene ridge(Contact c) { return construct_scene(ondiag_spec(c)); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

double coef(const Cubic& c, int i, int j) { return c[Jet<3>::index(i, j)]; }

}  // namespace

TEST_CASE("closed-form coefficients") {
  const SeriesPrediction a3 = predicted_coeffs(fixtures::a3_patch(), Contact::A3);
  CHECK(a3.alpha == doctest::Approx(-1.25).epsilon(1e-15));

  const BitangentScene a4 = ridge(Contact::A4);
  CHECK(a4.m.patch.c[0] == doctest::Approx(5.0 / 8.0));
  const SeriesPrediction p4 = predicted_coeffs(a4.m.patch, Contact::A4);
  CHECK(p4.t20 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p4.t11 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p4.t02 == doctest::Approx(3.0).epsilon(1e-14));

  MongePatch ex = fixtures::a3_patch();
  ex.b[2] = 0.5;  // c1 (k2 - k1) = 1 = 2 b1 b2
  CHECK(kind_of([&] { predicted_coeffs(ex, Contact::A3); }) ==
        ErrorKind::ExceptionalRidgeDirection);
  CHECK(kind_of([&] { series_fit(construct_scene([&] {
          auto s = ondiag_spec(Contact::A3);
          s.m.patch = ex;
          return s;
        }())); }) == ErrorKind::ExceptionalRidgeDirection);
}

TEST_CASE("single-patch solves") {
  const BitangentScene sc = ridge(Contact::A3);
  const OnDiagSample x = solve_ondiag(sc, 0.01, 0.005, {-0.01875, -0.01875, 1.0});
  MESSAGE("t " << x.t << " v " << x.v << " r " << x.r);
  CHECK(std::abs(x.t + 0.01875) < 1e-3);
  CHECK(x.residual < 1e-10);

  const OnDiagSample anti = solve_ondiag(sc, 0.01, -0.01, {0.0, 0.0, 1.0});
  CHECK(std::abs(anti.t) < 5e-3);
  CHECK(std::abs(anti.v) < 5e-3);

  CHECK(kind_of([&] { solve_ondiag(sc, 0.01, 0.01, {0.0, 0.0, 1.0}); }) ==
        ErrorKind::TrivialBranch);
  auto a2 = ondiag_spec(Contact::A2);
  a2.m.patch.b[0] = 0.5;
  CHECK(kind_of([&] { series_fit(construct_scene(a2)); }) == ErrorKind::ContactMismatch);
}

TEST_CASE("stencil excludes the diagonal") {
  int excluded = 0;
  const auto nodes = stencil_nodes(0.02, &excluded);
  CHECK(nodes.size() == 20);
  CHECK(excluded == 4);
  for (const auto& n : nodes) CHECK(std::abs(n.x() - n.y()) >= 0.005);
}

TEST_CASE("fitted series against the closed forms") {
  const SeriesFit a3 = series_fit(ridge(Contact::A3));
  MESSAGE("A3 t_s " << coef(a3.t, 1, 0) << " t_u " << coef(a3.t, 0, 1) << " resid "
                    << a3.residual);
  CHECK(std::abs(coef(a3.t, 1, 0) / -1.25 - 1.0) < 1e-3);
  CHECK(std::abs(coef(a3.t, 0, 1) / -1.25 - 1.0) < 1e-3);

  const SeriesFit a4 = series_fit(ridge(Contact::A4));
  MESSAGE("A4 " << coef(a4.t, 2, 0) << " " << coef(a4.t, 1, 1) << " " << coef(a4.t, 0, 2));
  CHECK(std::abs(coef(a4.t, 2, 0) - 2.0) < 1e-2);
  CHECK(std::abs(coef(a4.t, 1, 1) - 4.0) < 1e-2);
  CHECK(std::abs(coef(a4.t, 0, 2) - 3.0) < 1e-2);
  CHECK(std::abs(coef(a4.t, 1, 1) / coef(a4.t, 0, 2) - 4.0 / 3.0) < 1e-2);
  // v mirrors t.
  CHECK(std::abs(coef(a4.v, 2, 0) - coef(a4.t, 0, 2)) < 1e-4);
  CHECK(std::abs(coef(a4.v, 0, 2) - coef(a4.t, 2, 0)) < 1e-4);

  const SeriesFit a5 = series_fit(ridge(Contact::A5));
  const double t21 = coef(a5.t, 2, 1);
  MESSAGE("A5 s2 " << coef(a5.t, 2, 0) << " su " << coef(a5.t, 1, 1) << " u2 "
                   << coef(a5.t, 0, 2) << " cubic " << coef(a5.t, 3, 0) << " " << t21 << " "
                   << coef(a5.t, 1, 2) << " " << coef(a5.t, 0, 3));
  CHECK(std::abs(coef(a5.t, 2, 0) + 1.0) < 1e-3);
  CHECK(std::abs(coef(a5.t, 1, 2) - t21) < 1e-2 * std::abs(t21));
  CHECK(std::abs(coef(a5.t, 0, 3) - 2.0 / 3.0 * t21) < 1e-2 * std::abs(t21));
}

TEST_CASE("coefficients converge as the stencil shrinks") {
  const BitangentScene sc = ridge(Contact::A4);
  const SeriesPrediction p = predicted_coeffs(sc.m.patch, Contact::A4);
  const FitOptions fixed{.max_halvings = 0};
  const SeriesFit big = series_fit(sc, 0.04, fixed), small = series_fit(sc, 0.02, fixed);
  const double e1 = std::abs(coef(big.t_h, 0, 2) - p.t02);
  const double e2 = std::abs(coef(small.t_h, 0, 2) - p.t02);
  const double order = std::log2(e1 / e2);
  MESSAGE("errors " << e1 << " " << e2 << " order " << order);
  CHECK(order > 1.8);
}

TEST_CASE("stencil shrinks when the sheet folds inside it") {
  SceneSpec spec;
  spec.radius = 1.0;
  spec.m.contact = Contact::A3;
  spec.m.patch.k1 = 1.0;
  spec.m.patch.k2 = -2.0;
  spec.m.patch.b = {0.3, -0.7, 0.6, -0.8};
  spec.m.patch.c = {0.4, 0.0, 0.2, 0.6, -0.5};
  spec.m.patch.d = {-0.1, -1.0, -0.8, -0.4, -0.8, 0.4};
  const BitangentScene sc = construct_scene(spec);
  CHECK(kind_of([&] { series_fit(sc, 0.02, {.max_halvings = 0}); }) ==
        ErrorKind::NoConvergence);
  const SeriesFit fit = series_fit(sc);
  CHECK(fit.h_requested == 0.02);
  CHECK(fit.h < 0.02);
  const double alpha = predicted_coeffs(sc.m.patch, Contact::A3).alpha;
  CHECK(std::abs(coef(fit.t, 1, 0) - alpha) < 1e-4 * std::abs(alpha));
}

TEST_CASE("swap symmetry") {
  int excluded = 0;
  auto grid = stencil_nodes(0.02, &excluded);
  grid.emplace_back(0.01, 0.01);
  for (Contact c : {Contact::A3, Contact::A4}) {
    const SymmetryReport rep = symmetry_check(ridge(c), grid);
    MESSAGE("defect " << rep.defect);
    CHECK(rep.defect < 1e-9);
    CHECK(rep.excluded == 1);
    CHECK(rep.nodes == 20);
  }
}

TEST_CASE("on-diagonal classification") {
  const OnDiagClassification a3 = ondiag_classify(ridge(Contact::A3));
  CHECK(a3.classification.cls == SingularityClass::Diffeomorphism);

  const OnDiagClassification a4 = ondiag_classify(ridge(Contact::A4));
  MESSAGE("A4 angle " << a4.sigma_angle_deg << " ratio " << a4.classification.min_ratio());
  CHECK(a4.classification.cls == SingularityClass::Fold);
  CHECK(a4.sigma_angle_deg < 1.0);

  const OnDiagClassification a5 = ondiag_classify(ridge(Contact::A5));
  MESSAGE("A5 " << std::string(to_string(a5.classification.cls)) << " ratio "
                << a5.classification.min_ratio() << " err2 " << a5.jet.error[2]);
  CHECK(a5.classification.cls == SingularityClass::Lips);
}

TEST_CASE("two spheres on one side of the fold") {
  const BitangentScene sc = ridge(Contact::A4);
  const double s = 0.01;
  const OnDiagSample f = fold_point(sc, s);
  CHECK(std::abs(f.u + 2.0 / 3.0 * s) < 1e-3);
  const double up = solve_ondiag(sc, s, f.u + 1e-3, {f.t, f.v, f.r}).t - f.t;
  const double side = up > 0.0 ? 1.0 : -1.0;
  const auto two = spheres_through(sc, s, f.t + side * 1e-6);
  const auto none = spheres_through(sc, s, f.t - side * 1e-6);
  CHECK(two.size() == 2);
  CHECK(none.empty());
  if (two.size() == 2) CHECK(std::abs(two[0].u - two[1].u) > 1e-4);
}

TEST_CASE("diagonal limit is the curvature sphere") {
  const BitangentScene sc = ridge(Contact::A4);
  const SeriesPrediction p = predicted_coeffs(sc.m.patch, Contact::A4);
  const double s = 0.01;
  double prev = 1.0;
  for (double eps : {4e-3, 2e-3, 1e-3, 5e-4}) {
    const double u = s - eps;
    const OnDiagSample x = solve_ondiag(sc, s, u, {p.t_at(s, u), p.t_at(u, s), 1.0});
    const PrincipalData pd = principal_data(sc.m, s, x.t);
    const double gap = std::abs(x.r - 1.0 / pd.k1);
    CHECK(gap < 2.0 * eps);
    CHECK(gap < prev);
    prev = gap;
  }
}
