#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "presym/offdiag.hpp"

using namespace presym;
using fixtures::scene;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("residual at the base configuration") {
  const BitangentScene sc = scene(Contact::A1);
  const double r0 = sc.sphere.radius;
  CHECK(residual_G<double>(sc, 0, 0, 0, 0, r0).norm() < 1e-14);
  const Eigen::Vector3d m = sc.m.normal(0.0, 0.0), n = sc.n->normal(0.0, 0.0);
  const Eigen::Vector3d g = residual_G<double>(sc, 0, 0, 0, 0, r0 + 0.1);
  CHECK((g - 0.1 * (m - n)).norm() < 1e-14);
  CHECK(residual_G<double>(sc, 0.01, 0, 0, 0, r0).norm() > 1e-4);
}

TEST_CASE("principal jacobian columns match differences") {
  for (Contact cm : {Contact::A1, Contact::A2, Contact::A3}) {
    const BitangentScene sc = scene(cm);
    const OffDiagSample base = base_sample(sc);
    const OffDiagSample x = solve_second_contact(sc, 0.05, -0.03, {base.u, base.v, base.r});
    const auto cols = jacobian_columns(sc, x);
    const PrincipalData pm = principal_data(sc.m, x.s, x.t);
    const PrincipalData pn = principal_data(*sc.n, x.u, x.v);
    const double h = 1e-5;
    auto G = [&](Eigen::Vector2d dm, Eigen::Vector2d dn, double dr) {
      return residual_G<double>(sc, x.s + dm.x(), x.t + dm.y(), x.u + dn.x(), x.v + dn.y(),
                                x.r + dr);
    };
    const Eigen::Vector2d z = Eigen::Vector2d::Zero();
    const std::array<Eigen::Vector3d, 5> fd = {
        (G(h * pm.dir1, z, 0) - G(-h * pm.dir1, z, 0)) / (2 * h),
        (G(h * pm.dir2, z, 0) - G(-h * pm.dir2, z, 0)) / (2 * h),
        (G(z, h * pn.dir1, 0) - G(z, -h * pn.dir1, 0)) / (2 * h),
        (G(z, h * pn.dir2, 0) - G(z, -h * pn.dir2, 0)) / (2 * h),
        (G(z, z, h) - G(z, z, -h)) / (2 * h)};
    for (int k = 0; k < 5; ++k) CHECK((cols[k] - fd[k]).norm() < 1e-6);
  }
}

TEST_CASE("column structure at the base") {
  const BitangentScene a2 = scene(Contact::A2);
  CHECK(jacobian_columns(a2, base_sample(a2))[0].norm() < 1e-12);

  const BitangentScene a1 = scene(Contact::A1);
  const OffDiagSample b = base_sample(a1);
  const auto cols = jacobian_columns(a1, b);
  for (const auto& c : cols) CHECK(c.norm() > 1e-3);
  const Eigen::Vector3d chord = a1.m.point(0.0, 0.0) - a1.n->point(0.0, 0.0);
  CHECK(cols[4].normalized().cross(chord.normalized()).norm() < 1e-12);
}

TEST_CASE("second contact solve") {
  const BitangentScene sc = scene(Contact::A1);
  const OffDiagSample b = base_sample(sc);
  CHECK(std::abs(b.u) < 1e-14);
  CHECK(std::abs(b.v) < 1e-14);
  CHECK(b.r == doctest::Approx(1.0).epsilon(1e-14));

  auto spec = fixtures::two_patch(Contact::A1);
  spec.n->contact = Contact::A2;
  const BitangentScene bad = construct_scene(spec);
  CHECK(kind_of([&] { base_sample(bad); }) == ErrorKind::SingularJacobian);
}

TEST_CASE("graph field partials, chords and uniqueness") {
  const BitangentScene sc = scene(Contact::A2);
  // Fine spacing keeps the differencing error below the 1e-5 check.
  const GraphField f = build_graph_field(sc, base_sample(sc), {0.02, 10});
  CHECK(f.valid_count() == f.width() * f.width());

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  double worst_fd = 0.0, worst_angle = 0.0, worst_reseed = 0.0;
  for (int j = -9; j <= 9; ++j) {
    for (int i = -9; i <= 9; ++i) {
      const GraphNode& n = f.at(i, j);
      // Node partials against central differences of neighbours.
      const double h = f.step;
      const double us = (f.at(i + 1, j).u.value() - f.at(i - 1, j).u.value()) / (2 * h);
      const double vt = (f.at(i, j + 1).v.value() - f.at(i, j - 1).v.value()) / (2 * h);
      worst_fd = std::max(worst_fd, std::abs(us - n.u.partial(1, 0)));
      worst_fd = std::max(worst_fd, std::abs(vt - n.v.partial(0, 1)));

      const OffDiagSample& x = n.sample;
      const Eigen::Vector3d chord = sc.m.point(x.s, x.t) - sc.n->point(x.u, x.v);
      const Eigen::Vector3d mn = sc.m.normal(x.s, x.t) - sc.n->normal(x.u, x.v);
      worst_angle = std::max(worst_angle, chord.normalized().cross(mn.normalized()).norm());

      const OffDiagSample y = solve_second_contact(
          sc, x.s, x.t, {x.u + jitter(rng), x.v + jitter(rng), x.r + jitter(rng)});
      worst_reseed = std::max(worst_reseed, std::abs(y.u - x.u) + std::abs(y.v - x.v) +
                                                std::abs(y.r - x.r));
    }
  }
  MESSAGE("fd " << worst_fd << " angle " << worst_angle << " reseed " << worst_reseed);
  CHECK(worst_fd < 1e-5);
  CHECK(worst_angle < 1e-8);
  CHECK(worst_reseed < 1e-8);

  std::ostringstream csv;
  write_field_csv(csv, f);
  CHECK(csv.str().find("s,t,valid,u,v,r") == 0);
}

TEST_CASE("derivative identities") {
  const DerivativeReport a2 = derivative_identities_check(scene(Contact::A2));
  CHECK(a2.pass);
  CHECK(std::abs(a2.r_t - a2.r_t_closed) < 1e-10);
  CHECK(std::abs(a2.r_t) > 1e-3);

  CHECK(kind_of([] { derivative_identities_check(scene(Contact::A1)); }) ==
        ErrorKind::ContactMismatch);

  const DerivativeReport a3 = derivative_identities_check(scene(Contact::A3));
  MESSAGE("A3 second order " << a3.r_ss << " " << a3.u_ss << " " << a3.v_ss);
  CHECK(a3.second_order);
  CHECK(a3.pass);
}

TEST_CASE("transitional test") {
  const TransitionReport generic = transitional_a3a1_test(scene(Contact::A3));
  CHECK_FALSE(generic.transitional);
  CHECK_FALSE(generic.geometric_transitional);

  const TransitionReport tr = transitional_a3a1_test(construct_scene(fixtures::transitional_spec()));
  MESSAGE("delta " << tr.delta << " distance " << tr.plane_distance);
  CHECK(tr.transitional);
  CHECK(std::abs(tr.delta) < 1e-8);
  CHECK(tr.geometric_transitional);

  CHECK(kind_of([] { transitional_a3a1_test(scene(Contact::A2)); }) ==
        ErrorKind::ContactMismatch);
}

TEST_CASE("lips and beaks discriminant") {
  CHECK(kind_of([] { lips_beaks_discriminant(scene(Contact::A3)); }) ==
        ErrorKind::StationarityFailure);
  for (double c2 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const LipsBeaksReport rep =
        lips_beaks_discriminant(construct_scene(fixtures::transitional_spec(c2)));
    MESSAGE("c2 " << c2 << " det " << rep.det << " differenced " << rep.det_differenced << " "
                  << std::string(to_string(rep.kind)));
    CHECK(std::abs(rep.R_s) < 1e-9);
    CHECK(std::abs(rep.R_t) < 1e-9);
    CHECK(std::abs(rep.det - rep.det_differenced) < 1e-2);
    CHECK(rep.kind == (c2 < 1.5 ? LipsBeaks::LipsSide : LipsBeaks::BeaksSide));
  }
}

TEST_CASE("fold has two preimages on one side and none on the other") {
  const BitangentScene sc = scene(Contact::A2);
  const OffDiagSample b = base_sample(sc);
  const SolutionJet<1> jet = solution_jet<1>(sc, b);
  Eigen::Matrix2d J;
  J << jet.u.coeff(1, 0), jet.u.coeff(0, 1), jet.v.coeff(1, 0), jet.v.coeff(0, 1);
  // Left kernel of the rank-one differential: normal to the fold image.
  const Eigen::Vector2d ell = Eigen::Vector2d(J(1, 1), -J(0, 1)).normalized();
  int counts[2];
  for (int side = 0; side < 2; ++side) {
    const double eta = (side == 0 ? 1.0 : -1.0) * 1e-4;
    counts[side] =
        static_cast<int>(preimages(sc, b.u + eta * ell.x(), b.v + eta * ell.y(), 0.1).size());
  }
  MESSAGE("preimage counts " << counts[0] << " " << counts[1]);
  CHECK(std::min(counts[0], counts[1]) == 0);
  CHECK(std::max(counts[0], counts[1]) == 2);
}
