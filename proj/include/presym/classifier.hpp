#ifndef PRESYM_CLASSIFIER_HPP
#define PRESYM_CLASSIFIER_HPP

#include <array>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "presym/jet.hpp"

namespace presym {

/// Germ of a planar map at a base point: both components as polynomials in
/// the offsets, up to total degree 4.
struct PlanarMapJet {
  Eigen::Vector2d base = Eigen::Vector2d::Zero();
  Jet<4> f1, f2;
  std::array<double, 5> error{};  // estimated coefficient error by degree

  Eigen::Vector2d value() const { return {f1.value(), f2.value()}; }
  Eigen::Matrix2d differential() const;
  /// Jacobian determinant as a jet (exact to degree 3).
  Jet<4> jacobian_determinant() const;
};

enum class SingularityClass { Diffeomorphism, Fold, Cusp, Lips, Beaks, Swallowtail, Degenerate };
const char* to_string(SingularityClass c);

enum class SigmaKind { Empty, SmoothCurve, IsolatedPoint, TransverseCrossing };
const char* to_string(SigmaKind k);

struct CriticalSet {
  SigmaKind kind = SigmaKind::Empty;
  double det0 = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  Eigen::Vector2d tangent = Eigen::Vector2d::Zero();  // SmoothCurve only
};

/// Structure of {det dF = 0} near the base. Throws Degenerate if the value,
/// gradient and Hessian of the determinant all vanish to tolerance.
CriticalSet critical_set(const PlanarMapJet& jet, double tolerance = 1e-6);

/// One decision inequality: `value` had to exceed the tolerance, or (when
/// `vanishes`) stay below it.
struct Margin {
  std::string name;
  double value = 0.0;
  bool vanishes = false;
  /// How far the decision is from flipping, as a multiple of the tolerance.
  double ratio(double tolerance) const;
};

struct Classification {
  SingularityClass cls = SingularityClass::Degenerate;
  CriticalSet sigma;
  /// Taylor coefficients (degree 1..4) of F along the critical curve.
  std::array<Eigen::Vector2d, 5> restriction{};
  std::vector<Margin> margins;
  double tolerance = 1e-6;
  std::string note;

  double min_ratio() const;
};

Classification classify(const PlanarMapJet& jet, double tolerance = 1e-6);

struct FieldFit {
  PlanarMapJet jet;
  double condition = 0.0;
  int samples = 0;
  Classification classification;
};

/// Weighted least-squares degree-4 fit of sampled map values around `base`
/// (samples farther than `radius` are ignored), then classify.
/// Throws IllConditioned when the scaled design has condition number > 1e8.
FieldFit classify_field(const std::vector<Eigen::Vector2d>& points,
                        const std::vector<Eigen::Vector2d>& values, const Eigen::Vector2d& base,
                        double radius, double tolerance = 1e-6);

/// Normal forms: fold (x, y^2), cusp (x, xy + y^3), lips (x, y^3 + x^2 y),
/// beaks (x, y^3 - x^2 y), swallowtail (x, xy + y^4).
PlanarMapJet normal_form(SingularityClass c);

/// psi o F o phi for random polynomial diffeomorphisms phi, psi fixing the
/// origin, of degree <= 3, with coefficients of (phi - id) and (psi - id)
/// drawn from (-amplitude, amplitude).
PlanarMapJet perturb(const PlanarMapJet& f, std::mt19937_64& rng, double amplitude = 0.2);

/// F(lambda x) as a jet.
PlanarMapJet rescale_source(const PlanarMapJet& f, double lambda);

}  // namespace presym

#endif  // PRESYM_CLASSIFIER_HPP
