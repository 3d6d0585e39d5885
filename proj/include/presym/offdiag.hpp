#ifndef PRESYM_OFFDIAG_HPP
#define PRESYM_OFFDIAG_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "presym/errors.hpp"
#include "presym/geometry3d.hpp"
#include "presym/jet.hpp"

namespace presym {

/// p(s,t) + r m(s,t) - q(u,v) - r n(u,v), world frame.
template <typename S>
Vec3<S> residual_G(const BitangentScene& scene, const S& s, const S& t, const S& u, const S& v,
                   const S& r) {
  const EmbeddedPatch& n = *scene.n;
  return scene.m.point(s, t) + scene.m.normal(s, t) * r - n.point(u, v) - n.normal(u, v) * r;
}

struct OffDiagSample {
  double s = 0.0, t = 0.0, u = 0.0, v = 0.0, r = 0.0;
  double residual = 0.0;
};

/// (1 - r k1) e1, (1 - r k2) e2, -(1 - r l1) f1, -(1 - r l2) f2, m - n at the
/// sample, from the principal frames of both patches.
std::array<Eigen::Vector3d, 5> jacobian_columns(const BitangentScene& scene,
                                               const OffDiagSample& sample);

/// dG/d(s, t, u, v, r) in parameter coordinates.
Eigen::Matrix<double, 3, 5> parametric_jacobian(const BitangentScene& scene,
                                                const OffDiagSample& sample);

struct NewtonOptions {
  int max_iterations = 50;
  double accept = 1e-10;       // |G| needed to report a solution
  double singular_ratio = 1e-10;  // smallest / largest singular value
};

/// Solves G = 0 for (u, v, r) at fixed (s, t). Throws NoConvergence or
/// SingularJacobian.
OffDiagSample solve_second_contact(const BitangentScene& scene, double s, double t,
                                   const Eigen::Vector3d& seed, const NewtonOptions& opt = {});

/// Solves G = 0 for (s, t, r) at fixed (u, v).
OffDiagSample solve_first_contact(const BitangentScene& scene, double u, double v,
                                  const Eigen::Vector3d& seed, const NewtonOptions& opt = {});

/// Base sample at (s, t) = (0, 0), seeded from the scene sphere.
OffDiagSample base_sample(const BitangentScene& scene);

/// Taylor expansion of (u, v, r) in the offsets (ds, dt) from a solved sample.
template <int D>
struct SolutionJet {
  Jet<D> u, v, r;
};

template <int D>
SolutionJet<D> solution_jet(const BitangentScene& scene, const OffDiagSample& x) {
  const Eigen::Matrix<double, 3, 5> J = parametric_jacobian(scene, x);
  const Eigen::Matrix3d Ju = J.rightCols<3>();
  const Eigen::Matrix3d inv = Ju.inverse();
  using JD = Jet<D>;
  const JD S = JD::variable(0, x.s);
  const JD T = JD::variable(1, x.t);
  SolutionJet<D> out{JD(x.u), JD(x.v), JD(x.r)};
  // Chord iteration on truncated series: each pass fixes one more degree.
  for (int it = 0; it < D + 2; ++it) {
    const Vec3<JD> G = residual_G<JD>(scene, S, T, out.u, out.v, out.r);
    out.u -= inv(0, 0) * G[0] + inv(0, 1) * G[1] + inv(0, 2) * G[2];
    out.v -= inv(1, 0) * G[0] + inv(1, 1) * G[1] + inv(1, 2) * G[2];
    out.r -= inv(2, 0) * G[0] + inv(2, 1) * G[1] + inv(2, 2) * G[2];
  }
  return out;
}

struct GraphNode {
  bool valid = false;
  OffDiagSample sample;
  Jet<2> u, v, r;  // local expansions: values, first and second partials
};

struct FieldOptions {
  double half_width = 0.1;
  int half_nodes = 10;
};

/// Square grid of solved nodes centered on a base sample, filled ring by ring
/// outward, each node seeded from a solved neighbor.
struct GraphField {
  double s0 = 0.0, t0 = 0.0;
  double step = 0.0;
  int half = 0;
  std::vector<GraphNode> nodes;

  int width() const { return 2 * half + 1; }
  const GraphNode& at(int i, int j) const { return nodes[index(i, j)]; }
  GraphNode& at(int i, int j) { return nodes[index(i, j)]; }
  double s_of(int i) const { return s0 + i * step; }
  double t_of(int j) const { return t0 + j * step; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>((j + half) * width() + (i + half));
  }
  int valid_count() const;
};

GraphField build_graph_field(const BitangentScene& scene, const OffDiagSample& base,
                             const FieldOptions& options = {});

void write_field_csv(std::ostream& os, const GraphField& field);

/// Critical set of g traced on a field, with its image and the cusps found
/// along it (sign changes of the derivative of det dg along the kernel).
struct CriticalCurves {
  std::vector<std::vector<Eigen::Vector2d>> sigma;  // (s, t)
  std::vector<std::vector<Eigen::Vector2d>> image;  // (u, v)
  std::vector<Eigen::Vector2d> cusps;               // (s, t)
};

CriticalCurves critical_curves(const GraphField& field);

struct DerivativeReport {
  double r_s = 0.0, u_s = 0.0, v_s = 0.0;
  double r_t = 0.0, r_t_closed = 0.0;
  bool second_order = false;  // A3 at p0: second derivatives along the line of curvature
  double r_ss = 0.0, u_ss = 0.0, v_ss = 0.0;
  bool pass = false;
};

/// Checks the first-order identities at an A2 (or A3) contact on M with A1 on
/// N. Throws ContactMismatch otherwise.
DerivativeReport derivative_identities_check(const BitangentScene& scene);

struct TransitionReport {
  bool transitional = false;
  double delta = 0.0;
  double plane_distance = 0.0;
  bool geometric_transitional = false;
};

TransitionReport transitional_a3a1_test(const BitangentScene& scene);

enum class LipsBeaks { LipsSide, BeaksSide, Degenerate };
const char* to_string(LipsBeaks k);

struct LipsBeaksReport {
  LipsBeaks kind = LipsBeaks::Degenerate;
  double R_s = 0.0, R_t = 0.0;
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  double det = 0.0;
  double det_differenced = 0.0;  // same from differences of the solved field
};

/// Sign of the Hessian determinant of R = r k1 at a transitional A3A1 base.
/// Throws ContactMismatch or StationarityFailure.
LipsBeaksReport lips_beaks_discriminant(const BitangentScene& scene);

/// Distinct (s, t) in [-window, window]^2 with g(s, t) = (u, v), found by
/// Newton from a grid of seeds.
std::vector<OffDiagSample> preimages(const BitangentScene& scene, double u, double v,
                                     double window, int seeds_per_axis = 9);

/// Curvature of the first line of curvature of M in parameter space: the
/// line through the origin is y = kg x^2 / 2 + ...
double line_of_curvature_bend(const MongePatch& p);

}  // namespace presym

#endif  // PRESYM_OFFDIAG_HPP
