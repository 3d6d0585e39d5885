#ifndef PRESYM_ONDIAG_HPP
#define PRESYM_ONDIAG_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "presym/classifier.hpp"
#include "presym/geometry3d.hpp"

namespace presym {

/// Both contact points on the one patch M:
/// p(s,t) + r m(s,t) - p(u,v) - r m(u,v).
template <typename S>
Vec3<S> residual_single(const BitangentScene& scene, const S& s, const S& t, const S& u,
                        const S& v, const S& r) {
  return scene.m.point(s, t) + scene.m.normal(s, t) * r - scene.m.point(u, v) -
         scene.m.normal(u, v) * r;
}

struct OnDiagSample {
  double s = 0.0, u = 0.0;
  double t = 0.0, v = 0.0, r = 0.0;
  double residual = 0.0;
};

/// Newton in (t, v, r) at fixed s != u. Throws TrivialBranch for s = u (or a
/// collapse onto the diagonal), NoConvergence otherwise.
OnDiagSample solve_ondiag(const BitangentScene& scene, double s, double u,
                          const Eigen::Vector3d& seed);

/// Closed-form coefficients of t(s, u) at an A3/A4/A5 contact.
struct SeriesPrediction {
  Contact contact = Contact::A3;
  double alpha = 0.0;                  // A3: t = alpha (s + u) + ...
  double t20 = 0.0, t11 = 0.0, t02 = 0.0;  // A4 (A5: t20 is the s^2 term)
  /// Predicted value of t at (s, u), used as a Newton seed.
  double t_at(double s, double u) const;
};

/// Throws ExceptionalRidgeDirection (A3) or SingularRidge (A4) when the
/// closed form has a vanishing denominator.
SeriesPrediction predicted_coeffs(const MongePatch& patch, Contact contact);

/// Coefficients indexed like Jet<3>: index(i, j) is the s^i u^j term.
using Cubic = std::array<double, 10>;

struct SeriesFit {
  Contact contact = Contact::A3;
  int degree = 1;
  double h = 0.02;            // stencil radius used
  double h_requested = 0.02;  // larger when nodes had no solution there
  Cubic t{}, v{};        // extrapolated from the fits at h and h/2
  Cubic t_h{}, t_half{};  // the two raw fits of t
  Cubic error{};          // |t_h - t_half| / (2^p - 1), the extrapolation error estimate
  double residual = 0.0;  // RMS fit residual at h
  int nodes = 0;
  int excluded = 0;
  std::vector<OnDiagSample> samples;  // everything solved, both radii
};

/// Stencil nodes of radius h: the 5x5 pattern of spacing h/2 without its
/// center, minus nodes with |s - u| < h/4.
std::vector<Eigen::Vector2d> stencil_nodes(double h, int* excluded = nullptr);

struct FitOptions {
  int max_halvings = 4;
  /// Stop halving once the leading-degree coefficients of the fits at h and
  /// h/2 agree to this fraction of their size.
  double target = 2e-3;
};

/// Fits at h and h/2, halving h as FitOptions allows, then extrapolates.
SeriesFit series_fit(const BitangentScene& scene, double h = 0.02,
                     const FitOptions& options = {});

struct SymmetryReport {
  double defect = 0.0;
  int nodes = 0;
  int excluded = 0;
};

/// Max |t(s,u) - v(u,s)| over the grid, solving both orders independently.
/// Nodes on the diagonal are excluded and counted.
SymmetryReport symmetry_check(const BitangentScene& scene,
                              const std::vector<Eigen::Vector2d>& grid);

struct OnDiagClassification {
  SeriesFit fit;
  PlanarMapJet jet;  // of h(s, u) = (s, t(s, u))
  Classification classification;
  double sigma_angle_deg = 0.0;  // angle between the fitted critical set and 2s + 3u = 0
};

/// The tolerance used is max(tolerance, 10 x the fit error of degrees <= 2).
OnDiagClassification ondiag_classify(const BitangentScene& scene, double h = 0.02,
                                     double tolerance = 1e-6);

/// Spheres tangent to M at (s, t) with a second contact near the origin:
/// roots u of t(s, u) = t, scanning u over [-window, window].
std::vector<OnDiagSample> spheres_through(const BitangentScene& scene, double s, double t,
                                          double window = 0.04);

/// Extremum of u -> t(s, u) near the origin (the fold value at s).
OnDiagSample fold_point(const BitangentScene& scene, double s);

void write_ondiag_csv(std::ostream& os, const std::vector<OnDiagSample>& samples);

}  // namespace presym

#endif  // PRESYM_ONDIAG_HPP
