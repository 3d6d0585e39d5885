#ifndef PRESYM_GEOMETRY2D_HPP
#define PRESYM_GEOMETRY2D_HPP

#include <vector>

#include <Eigen/Core>

namespace presym {

enum class CurveFamily { Ellipse, PerturbedCircle, LocalGraph };

/// A closed-form plane curve with exact derivatives to order 6.
///
/// Ellipse:           gamma(s) = (a cos s, b sin s)
/// PerturbedCircle:   gamma(s) = rho(s) (a cos s, b sin s),
///                    rho(s) = 1 + sum_k cos_k cos(k s) + sin_k sin(k s)
/// LocalGraph:        gamma(x) = (x, sum_i coeffs[i] x^i)
///
/// Every family is followed by a planar placement (rotation, translation).
class PlaneCurve {
 public:
  static constexpr int kMaxDerivative = 6;

  static PlaneCurve ellipse(double a, double b);
  static PlaneCurve circle(double radius) { return ellipse(radius, radius); }
  /// Harmonics are indexed from k = 1; index 0 of each vector is ignored.
  static PlaneCurve perturbed(double a, double b, std::vector<double> cos_terms,
                              std::vector<double> sin_terms);
  static PlaneCurve local_graph(std::vector<double> coeffs, double x_min = -1.0,
                                double x_max = 1.0);

  PlaneCurve placed(double angle, const Eigen::Vector2d& translation) const;

  CurveFamily family() const { return family_; }
  bool periodic() const { return family_ != CurveFamily::LocalGraph; }
  double domain_min() const { return domain_min_; }
  double domain_max() const { return domain_max_; }
  double period() const { return domain_max_ - domain_min_; }

  /// n-th derivative of the placed parametrization (n = 0 is the point).
  Eigen::Vector2d derivative(double s, int n) const;
  Eigen::Vector2d point(double s) const { return derivative(s, 0); }

 private:
  Eigen::Vector2d local_derivative(double s, int n) const;

  CurveFamily family_ = CurveFamily::Ellipse;
  double a_ = 1.0;
  double b_ = 1.0;
  std::vector<double> cos_terms_;
  std::vector<double> sin_terms_;
  std::vector<double> coeffs_;
  double domain_min_ = 0.0;
  double domain_max_ = 0.0;
  double angle_ = 0.0;
  Eigen::Vector2d translation_ = Eigen::Vector2d::Zero();
};

struct CurveFrame {
  Eigen::Vector2d point;
  Eigen::Vector2d tangent;
  Eigen::Vector2d normal;  // tangent rotated by +90 degrees
  double curvature;        // signed with respect to `normal`
  double speed;
};

CurveFrame curve_frame(const PlaneCurve& curve, double s);

/// Derivative of the signed curvature with respect to the curve parameter.
double curvature_derivative(const PlaneCurve& curve, double s);

inline Eigen::Vector2d rotate90(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }
inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// y = a2 x^2 + a4 x^4 + a5 x^5 + a6 x^6 about a vertex at the origin.
struct LocalVertexModel {
  double a2 = 1.0;
  double a4 = 0.0;
  double a5 = 0.0;
  double a6 = 0.0;

  PlaneCurve as_curve(double half_width = 1.0) const;
};

enum class VertexContact { A3, A4, A5, BeyondA5 };
const char* to_string(VertexContact c);

VertexContact vertex_classify(const LocalVertexModel& m);

enum class DiagonalKind { TransverseBranch, IsolatedPoint };
const char* to_string(DiagonalKind k);

struct DiagonalStructure {
  DiagonalKind kind;
  /// Direction of the branch in the (s, t) plane; (1, -1) is the line s + t = 0.
  /// Zero for an isolated point.
  Eigen::Vector2d branch_direction;
};

DiagonalStructure diagonal_structure(const LocalVertexModel& m);

}  // namespace presym

#endif  // PRESYM_GEOMETRY2D_HPP
