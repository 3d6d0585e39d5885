#include <cmath>
#include <random>

#include "doctest.h"
#include "presym/errors.hpp"
#include "presym/geometry3d.hpp"

using namespace presym;

namespace {

EmbeddedPatch at_origin(const MongePatch& p) { return EmbeddedPatch{p, RigidMotion{}}; }

Sphere sphere_above(double r) { return Sphere{Eigen::Vector3d(0.0, 0.0, r), r}; }

MongePatch a3_example() {
  MongePatch p;
  p.k1 = 1.0;
  p.k2 = 2.0;
  p.b = {0.0, 1.0, 1.0, 0.0};
  p.c = {0.0, 1.0, 0.0, 0.0, 0.0};
  return p;
}

// Central 5-point derivative of k1 along a parameter direction.
double fd_k1(const EmbeddedPatch& ep, Eigen::Vector2d dir, double h = 1e-3) {
  auto k = [&](double t) { return principal_data(ep, t * dir.x(), t * dir.y()).k1; };
  return (-k(2 * h) + 8 * k(h) - 8 * k(-h) + k(-2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("monge evaluation and derivatives") {
  MongePatch p = a3_example();
  p.d[2] = 0.3;
  const double x = 0.1, y = -0.2;
  const double f = 0.5 * (x * x + 2 * y * y) + x * x * y + x * y * y + x * x * x * y +
                   0.3 * x * x * x * y * y;
  CHECK(p.height(x, y) == doctest::Approx(f).epsilon(1e-15));
  const double h = 1e-6;
  CHECK(p.height_x(x, y) ==
        doctest::Approx((p.height(x + h, y) - p.height(x - h, y)) / (2 * h)).epsilon(1e-8));
  CHECK(p.height_y(x, y) ==
        doctest::Approx((p.height(x, y + h) - p.height(x, y - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("flipped and swapped patches describe the same surface") {
  MongePatch p = a3_example();
  p.b[3] = 0.4;
  p.c[3] = -0.2;
  p.d[4] = 0.7;
  const MongePatch fp = p.flipped();
  const MongePatch sp = p.swapped();
  for (double x : {-0.2, 0.05, 0.3})
    for (double y : {-0.1, 0.25}) {
      CHECK(fp.height(x, -y) == doctest::Approx(-p.height(x, y)).epsilon(1e-14));
      CHECK(sp.height(y, x) == doctest::Approx(p.height(x, y)).epsilon(1e-14));
    }
}

TEST_CASE("principal data at the origin") {
  MongePatch p;
  p.k1 = 1.0;
  p.k2 = 2.0;
  p.b[0] = 1.0;
  const auto pd = principal_data(at_origin(p), 0.0, 0.0);
  CHECK(pd.k1 == doctest::Approx(1.0));
  CHECK(pd.k2 == doctest::Approx(2.0));
  CHECK((pd.e1 - Eigen::Vector3d::UnitX()).norm() < 1e-14);
  CHECK((pd.e2 - Eigen::Vector3d::UnitY()).norm() < 1e-14);
  CHECK(pd.k1s == doctest::Approx(6.0).epsilon(1e-12));
  // The same by differencing the curvature field.
  CHECK(fd_k1(at_origin(p), Eigen::Vector2d::UnitX()) == doctest::Approx(6.0).epsilon(1e-6));

  MongePatch q = a3_example();
  CHECK(principal_data(at_origin(q), 0.0, 0.0).k1t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("principal data away from the origin") {
  MongePatch p = a3_example();
  p.b[0] = 0.3;
  p.c[2] = -0.4;
  p.d[1] = 0.2;
  const RigidMotion motion =
      RigidMotion::from_axis_angle(Eigen::Vector3d(1, 2, 3), 0.7, Eigen::Vector3d(0.1, -2, 5));
  const EmbeddedPatch ep{p, motion};
  for (auto [x, y] : {std::pair{0.1, 0.05}, std::pair{-0.2, 0.15}, std::pair{0.3, -0.3}}) {
    const auto pd = principal_data(ep, x, y);
    CHECK(std::abs(pd.e1.dot(pd.e2)) < 1e-12);
    CHECK(std::abs(pd.e1.dot(pd.normal)) < 1e-12);
    CHECK(std::abs(pd.e1.norm() - 1.0) < 1e-12);
    CHECK(std::abs(pd.e2.norm() - 1.0) < 1e-12);
    CHECK((pd.shape_operator * pd.dir1 - pd.k1 * pd.dir1).norm() < 1e-9);
    CHECK((pd.shape_operator * pd.dir2 - pd.k2 * pd.dir2).norm() < 1e-9);
    // Directional derivatives against differences taken along the fixed directions.
    auto k1_at = [&](Eigen::Vector2d d, double t) {
      return principal_data(ep, x + t * d.x(), y + t * d.y()).k1;
    };
    for (int which = 0; which < 2; ++which) {
      const Eigen::Vector2d d = which == 0 ? pd.dir1 : pd.dir2;
      const double h = 1e-3;
      const double fd =
          (-k1_at(d, 2 * h) + 8 * k1_at(d, h) - 8 * k1_at(d, -h) + k1_at(d, -2 * h)) / (12 * h);
      CHECK(std::abs(fd - (which == 0 ? pd.k1s : pd.k1t)) < 1e-6);
    }
  }
}

TEST_CASE("umbilic point is refused") {
  MongePatch p;
  p.k1 = 0.5;
  p.k2 = 0.5;
  CHECK_THROWS_AS(principal_data(at_origin(p), 0.0, 0.0), Error);
  try {
    principal_data(at_origin(p), 0.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UmbilicPoint);
  }
}

TEST_CASE("contact type examples") {
  MongePatch p;
  p.k1 = 1.0;
  p.k2 = 2.0;
  CHECK(contact_type(at_origin(p), sphere_above(0.7)).type == Contact::A1);

  p.b[0] = 0.5;
  const auto a2 = contact_type(at_origin(p), sphere_above(1.0));
  CHECK(a2.type == Contact::A2);
  CHECK(a2.formula_type == Contact::A2);

  const MongePatch q = a3_example();
  CHECK(4.0 * a3_numerator(q) == doctest::Approx(5.0));
  const auto a3 = contact_type(at_origin(q), sphere_above(1.0));
  CHECK(a3.type == Contact::A3);
  CHECK(a3.formula_type == Contact::A3);

  CHECK_THROWS_AS(contact_type(at_origin(q), Sphere{Eigen::Vector3d(0.01, 0, 1), 1.0}), Error);
}

TEST_CASE("contact function agrees with the coefficient conditions") {
  // On random A4 patches the restricted contact function's quintic term is a
  // fixed multiple of the A5 numerator, and the quartic term of the A4 one.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    MongePatch p;
    p.k1 = 1.0;
    p.k2 = 1.5 + u(rng);
    for (auto& v : p.b) v = u(rng);
    for (auto& v : p.c) v = u(rng);
    for (auto& v : p.d) v = u(rng);
    p.b[0] = 0.0;
    const double dk = p.k1 - p.k2;
    const auto a3 = contact_type(at_origin(p), sphere_above(1.0), 1e-12);
    CHECK(a3.restricted[4] == doctest::Approx(-a3_numerator(p) / (p.k1 * dk)).epsilon(1e-9));

    p.c[0] = (dk - 4.0 * p.b[1] * p.b[1]) / (8.0 * dk);
    const auto a4 = contact_type(at_origin(p), sphere_above(1.0), 1e-12);
    CHECK(std::abs(a4.restricted[4]) < 1e-12);
    const double ratio = a4.restricted[5] * dk * dk / a4_numerator(p);
    CHECK(ratio == doctest::Approx(-2.0).epsilon(1e-8));
    if (std::abs(a4_numerator(p)) > 1e-3) {
      CHECK(a4.type == Contact::A4);
      CHECK(a4.formula_type == Contact::A4);
    }
  }
}

TEST_CASE("scene construction round trip") {
  SceneSpec spec;
  spec.radius = 1.0;
  spec.m.patch = a3_example();
  spec.m.patch.b[0] = 0.7;
  spec.m.patch.d[0] = 1.0;
  spec.n = PatchSpec{};
  spec.n->patch.k1 = -0.5;
  spec.n->patch.k2 = 0.3;
  spec.n->patch.b = {0.2, -0.1, 0.3, 0.1};

  for (Contact cm : {Contact::A1, Contact::A2, Contact::A3, Contact::A4, Contact::A5}) {
    spec.m.contact = cm;
    if (cm == Contact::A1) spec.m.patch.k1 = 0.4;
    const BitangentScene scene = construct_scene(spec);
    CHECK(contact_type(scene.m, scene.sphere).type == cm);
    CHECK(contact_type(*scene.n, scene.sphere).type == Contact::A1);
    const Eigen::Vector3d p0 = scene.m.point(0.0, 0.0);
    const Eigen::Vector3d q0 = scene.n->point(0.0, 0.0);
    CHECK(std::abs((p0 - scene.sphere.center).norm() - 1.0) < 1e-12);
    CHECK(std::abs((q0 - scene.sphere.center).norm() - 1.0) < 1e-12);
    const Eigen::Vector3d n0 = scene.n->normal(0.0, 0.0);
    CHECK((q0 + n0 - scene.sphere.center).norm() < 1e-12);
  }
}

TEST_CASE("construction rejects unrealizable requests") {
  SceneSpec spec;
  spec.m.patch = a3_example();
  spec.m.patch.k2 = 1.0;  // umbilic once k1 is forced to 1
  spec.m.contact = Contact::A2;
  CHECK_THROWS_AS(construct_scene(spec), Error);

  spec.m.patch = a3_example();
  spec.m.contact = Contact::A2;  // b0 = 0 makes it A3
  try {
    construct_scene(spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnrealizableSpec);
  }
}

TEST_CASE("transitional placement lies on the osculating plane") {
  SceneSpec spec;
  spec.m.patch = a3_example();
  spec.m.contact = Contact::A3;
  spec.n = PatchSpec{};
  spec.n->patch.k1 = 0.2;
  spec.n->patch.k2 = -0.4;
  spec.transitional = true;
  spec.chord_angle = 2.5;
  const BitangentScene scene = construct_scene(spec);
  const Eigen::Vector3d nrm = osculating_plane_normal(scene.m);
  const Eigen::Vector3d q0 = scene.n->point(0.0, 0.0);
  CHECK(std::abs(nrm.dot(q0 - scene.m.point(0.0, 0.0))) < 1e-7);
  CHECK((q0 - scene.m.point(0.0, 0.0)).norm() > 0.1);
}

TEST_CASE("global motion leaves contact types unchanged") {
  SceneSpec spec;
  spec.m.patch = a3_example();
  spec.m.contact = Contact::A3;
  spec.n = PatchSpec{};
  spec.n->patch.k1 = 0.2;
  spec.n->patch.k2 = -0.4;
  spec.global =
      RigidMotion::from_axis_angle(Eigen::Vector3d(0.3, -1, 0.2), 1.1, Eigen::Vector3d(3, 1, -2));
  const BitangentScene scene = construct_scene(spec);
  const auto rep = contact_type(scene.m, scene.sphere);
  CHECK(rep.type == Contact::A3);
  CHECK(rep.restricted[4] == doctest::Approx(-a3_numerator(scene.m.patch) / (-1.0)).epsilon(1e-9));
}
