#include "presym/geometry2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Geometry>

#include "presym/errors.hpp"

namespace presym {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// d^n/ds^n of cos(k s) and sin(k s).
double dcos(double k, double s, int n) {
  return std::pow(k, n) * std::cos(k * s + n * std::numbers::pi / 2);
}
double dsin(double k, double s, int n) {
  return std::pow(k, n) * std::sin(k * s + n * std::numbers::pi / 2);
}

constexpr double kRelTol = 1e-12;

bool nearly_equal(double x, double y, double scale) {
  return std::abs(x - y) <= kRelTol * std::abs(scale);
}

}  // namespace

PlaneCurve PlaneCurve::ellipse(double a, double b) {
  if (!(a > 0 && b > 0)) throw std::invalid_argument("ellipse semi-axes must be positive");
  PlaneCurve c;
  c.family_ = CurveFamily::Ellipse;
  c.a_ = a;
  c.b_ = b;
  c.domain_min_ = 0.0;
  c.domain_max_ = 2 * std::numbers::pi;
  return c;
}

PlaneCurve PlaneCurve::perturbed(double a, double b, std::vector<double> cos_terms,
                                 std::vector<double> sin_terms) {
  PlaneCurve c = ellipse(a, b);
  c.family_ = CurveFamily::PerturbedCircle;
  c.cos_terms_ = std::move(cos_terms);
  c.sin_terms_ = std::move(sin_terms);
  return c;
}

PlaneCurve PlaneCurve::local_graph(std::vector<double> coeffs, double x_min, double x_max) {
  PlaneCurve c;
  c.family_ = CurveFamily::LocalGraph;
  c.coeffs_ = std::move(coeffs);
  c.domain_min_ = x_min;
  c.domain_max_ = x_max;
  return c;
}

PlaneCurve PlaneCurve::placed(double angle, const Eigen::Vector2d& translation) const {
  PlaneCurve c = *this;
  c.angle_ = angle;
  c.translation_ = translation;
  return c;
}

Eigen::Vector2d PlaneCurve::local_derivative(double s, int n) const {
  switch (family_) {
    case CurveFamily::Ellipse:
      return {a_ * dcos(1, s, n), b_ * dsin(1, s, n)};
    case CurveFamily::PerturbedCircle: {
      // Leibniz rule on rho(s) * (a cos s, b sin s).
      Eigen::Vector2d sum = Eigen::Vector2d::Zero();
      for (int m = 0; m <= n; ++m) {
        double rho = (m == 0) ? 1.0 : 0.0;
        for (std::size_t k = 1; k < cos_terms_.size(); ++k)
          rho += cos_terms_[k] * dcos(static_cast<double>(k), s, m);
        for (std::size_t k = 1; k < sin_terms_.size(); ++k)
          rho += sin_terms_[k] * dsin(static_cast<double>(k), s, m);
        const Eigen::Vector2d e{a_ * dcos(1, s, n - m), b_ * dsin(1, s, n - m)};
        sum += binomial(n, m) * rho * e;
      }
      return sum;
    }
    case CurveFamily::LocalGraph: {
      double y = 0.0;
      for (std::size_t i = n; i < coeffs_.size(); ++i) {
        double falling = 1.0;
        for (int k = 0; k < n; ++k) falling *= static_cast<double>(i - k);
        y += coeffs_[i] * falling * std::pow(s, static_cast<double>(i - n));
      }
      const double x = (n == 0) ? s : (n == 1 ? 1.0 : 0.0);
      return {x, y};
    }
  }
  return Eigen::Vector2d::Zero();
}

Eigen::Vector2d PlaneCurve::derivative(double s, int n) const {
  if (n < 0 || n > kMaxDerivative) throw std::out_of_range("derivative order out of range");
  const Eigen::Rotation2Dd rot(angle_);
  Eigen::Vector2d v = rot * local_derivative(s, n);
  if (n == 0) v += translation_;
  return v;
}

CurveFrame curve_frame(const PlaneCurve& curve, double s) {
  const Eigen::Vector2d d1 = curve.derivative(s, 1);
  const Eigen::Vector2d d2 = curve.derivative(s, 2);
  const double speed = d1.norm();
  CurveFrame f;
  f.point = curve.point(s);
  f.tangent = d1 / speed;
  f.normal = rotate90(f.tangent);
  f.curvature = cross2(d1, d2) / (speed * speed * speed);
  f.speed = speed;
  return f;
}

double curvature_derivative(const PlaneCurve& curve, double s) {
  const Eigen::Vector2d d1 = curve.derivative(s, 1);
  const Eigen::Vector2d d2 = curve.derivative(s, 2);
  const Eigen::Vector2d d3 = curve.derivative(s, 3);
  const double sp2 = d1.squaredNorm();
  const double sp3 = sp2 * std::sqrt(sp2);
  return cross2(d1, d3) / sp3 - 3.0 * cross2(d1, d2) * d1.dot(d2) / (sp3 * sp2);
}

PlaneCurve LocalVertexModel::as_curve(double half_width) const {
  return PlaneCurve::local_graph({0.0, 0.0, a2, 0.0, a4, a5, a6}, -half_width, half_width);
}

const char* to_string(VertexContact c) {
  switch (c) {
    case VertexContact::A3: return "A3";
    case VertexContact::A4: return "A4";
    case VertexContact::A5: return "A5";
    case VertexContact::BeyondA5: return "BeyondA5";
  }
  return "?";
}

const char* to_string(DiagonalKind k) {
  return k == DiagonalKind::TransverseBranch ? "TransverseBranch" : "IsolatedPoint";
}

VertexContact vertex_classify(const LocalVertexModel& m) {
  if (m.a2 == 0.0) throw std::invalid_argument("vertex model requires a2 != 0");
  const double a2_cubed = m.a2 * m.a2 * m.a2;
  if (!nearly_equal(a2_cubed, m.a4, std::max(std::abs(a2_cubed), std::abs(m.a4))))
    return VertexContact::A3;
  const double a2_fifth = a2_cubed * m.a2 * m.a2;
  if (!nearly_equal(m.a5, 0.0, a2_fifth / m.a2)) return VertexContact::A4;
  if (!nearly_equal(2.0 * a2_fifth, m.a6, std::max(std::abs(2.0 * a2_fifth), std::abs(m.a6))))
    return VertexContact::A5;
  return VertexContact::BeyondA5;
}

DiagonalStructure diagonal_structure(const LocalVertexModel& m) {
  switch (vertex_classify(m)) {
    case VertexContact::A3:
    case VertexContact::A5:
      return {DiagonalKind::TransverseBranch, Eigen::Vector2d(1.0, -1.0).normalized()};
    case VertexContact::A4:
      return {DiagonalKind::IsolatedPoint, Eigen::Vector2d::Zero()};
    case VertexContact::BeyondA5:
      break;
  }
  throw Error(ErrorKind::UnsupportedDegeneracy, "vertex contact beyond A5 is not analysed");
}

}  // namespace presym
