#include "presym/classifier.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "presym/errors.hpp"

namespace presym {

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

Eigen::Matrix2d PlanarMapJet::differential() const {
  Eigen::Matrix2d J;
  J << f1.coeff(1, 0), f1.coeff(0, 1), f2.coeff(1, 0), f2.coeff(0, 1);
  return J;
}

Jet<4> PlanarMapJet::jacobian_determinant() const {
  return f1.derivative(0) * f2.derivative(1) - f1.derivative(1) * f2.derivative(0);
}

const char* to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::Diffeomorphism: return "Diffeomorphism";
    case SingularityClass::Fold: return "Fold";
    case SingularityClass::Cusp: return "Cusp";
    case SingularityClass::Lips: return "Lips";
    case SingularityClass::Beaks: return "Beaks";
    case SingularityClass::Swallowtail: return "Swallowtail";
    case SingularityClass::Degenerate: return "Degenerate";
  }
  return "?";
}

const char* to_string(SigmaKind k) {
  switch (k) {
    case SigmaKind::Empty: return "Empty";
    case SigmaKind::SmoothCurve: return "SmoothCurve";
    case SigmaKind::IsolatedPoint: return "IsolatedPoint";
    case SigmaKind::TransverseCrossing: return "TransverseCrossing";
  }
  return "?";
}

CriticalSet critical_set(const PlanarMapJet& jet, double tol) {
  const Jet<4> D = jet.jacobian_determinant();
  CriticalSet cs;
  cs.det0 = D.value();
  cs.gradient = Eigen::Vector2d(D.coeff(1, 0), D.coeff(0, 1));
  cs.hessian << D.partial(2, 0), D.partial(1, 1), D.partial(1, 1), D.partial(0, 2);
  if (std::abs(cs.det0) > tol) {
    cs.kind = SigmaKind::Empty;
  } else if (cs.gradient.norm() > tol) {
    cs.kind = SigmaKind::SmoothCurve;
    const Eigen::Vector2d n = cs.gradient.normalized();
    cs.tangent = Eigen::Vector2d(-n.y(), n.x());
  } else {
    const double h = cs.hessian.determinant();
    if (std::abs(h) <= tol)
      throw Error(ErrorKind::Degenerate, "det dF vanishes to second order at the base");
    cs.kind = h > 0.0 ? SigmaKind::IsolatedPoint : SigmaKind::TransverseCrossing;
  }
  return cs;
}

double Margin::ratio(double tol) const {
  const double a = std::abs(value);
  if (vanishes) return a == 0.0 ? std::numeric_limits<double>::infinity() : tol / a;
  return a / tol;
}

double Classification::min_ratio() const {
  double r = std::numeric_limits<double>::infinity();
  for (const Margin& m : margins) r = std::min(r, m.ratio(tolerance));
  return r;
}

Classification classify(const PlanarMapJet& jet, double tol) {
  Classification out;
  out.tolerance = tol;
  auto nonzero = [&](const char* name, double v) {
    out.margins.push_back({name, v, false});
    return std::abs(v) > tol;
  };
  auto vanishing = [&](const char* name, double v) { out.margins.push_back({name, v, true}); };

  const Jet<4> D = jet.jacobian_determinant();
  const double D0 = D.value();
  if (nonzero("det dF", D0)) {
    out.cls = SingularityClass::Diffeomorphism;
    out.sigma.kind = SigmaKind::Empty;
    out.sigma.det0 = D0;
    return out;
  }
  out.margins.back().vanishes = true;

  if (!nonzero("|dF|", jet.differential().norm())) {
    out.cls = SingularityClass::Degenerate;
    out.note = "differential vanishes (corank 2)";
    return out;
  }

  try {
    out.sigma = critical_set(jet, tol);
  } catch (const Error& e) {
    out.cls = SingularityClass::Degenerate;
    out.note = e.what();
    return out;
  }

  if (out.sigma.kind != SigmaKind::SmoothCurve) {
    vanishing("|grad det dF|", out.sigma.gradient.norm());
    nonzero("det Hess det dF", out.sigma.hessian.determinant());
    out.cls = out.sigma.kind == SigmaKind::IsolatedPoint ? SingularityClass::Lips
                                                         : SingularityClass::Beaks;
    return out;
  }
  nonzero("|grad det dF|", out.sigma.gradient.norm());

  // Parametrize the critical curve as c(tau) = tau w + a(tau) n with n along
  // the gradient, solving D(c(tau)) = 0 order by order.
  const Eigen::Vector2d n = out.sigma.gradient.normalized();
  const Eigen::Vector2d w = out.sigma.tangent;
  const double g = out.sigma.gradient.norm();
  const Series<4> tau = Series<4>::variable(0.0);
  Series<4> a(0.0);
  Series<4> cx, cy;
  for (int it = 0; it < 6; ++it) {
    cx = w.x() * tau + n.x() * a;
    cy = w.y() * tau + n.y() * a;
    a = a - compose(D, cx, cy) * (1.0 / g);
  }
  cx = w.x() * tau + n.x() * a;
  cy = w.y() * tau + n.y() * a;
  Jet<4> h1 = jet.f1, h2 = jet.f2;
  h1.coeff(0, 0) = 0.0;
  h2.coeff(0, 0) = 0.0;
  const Series<4> g1 = compose(h1, cx, cy);
  const Series<4> g2 = compose(h2, cx, cy);
  for (int k = 1; k <= 4; ++k) out.restriction[k] = Eigen::Vector2d(g1[k], g2[k]);
  const auto& gam = out.restriction;

  if (nonzero("|g1|", gam[1].norm())) {
    out.cls = SingularityClass::Fold;
    return out;
  }
  out.margins.back().vanishes = true;
  if (nonzero("g2 x g3", cross(gam[2], gam[3]))) {
    out.cls = SingularityClass::Cusp;
    return out;
  }
  out.margins.back().vanishes = true;
  if (std::abs(gam[2].norm()) <= tol) {
    vanishing("|g2|", gam[2].norm());
    if (nonzero("g3 x g4", cross(gam[3], gam[4]))) {
      out.cls = SingularityClass::Swallowtail;
      return out;
    }
  }
  out.cls = SingularityClass::Degenerate;
  out.note = "restriction to the critical curve is beyond the swallowtail";
  return out;
}

FieldFit classify_field(const std::vector<Eigen::Vector2d>& points,
                        const std::vector<Eigen::Vector2d>& values, const Eigen::Vector2d& base,
                        double radius, double tol) {
  constexpr int kTerms = Jet<4>::kSize;
  std::vector<int> used;
  for (std::size_t k = 0; k < points.size(); ++k)
    if ((points[k] - base).lpNorm<Eigen::Infinity>() <= radius * (1.0 + 1e-12))
      used.push_back(static_cast<int>(k));
  const int m = static_cast<int>(used.size());
  if (m < kTerms) throw Error(ErrorKind::IllConditioned, "too few samples for a degree-4 fit");

  Eigen::MatrixXd A(m, kTerms);
  Eigen::MatrixXd B(m, 2);
  for (int row = 0; row < m; ++row) {
    const Eigen::Vector2d d = (points[used[row]] - base) / radius;
    const double w = std::exp(-0.5 * d.squaredNorm());
    for (int deg = 0; deg <= 4; ++deg)
      for (int j = 0; j <= deg; ++j)
        A(row, Jet<4>::index(deg - j, j)) = w * std::pow(d.x(), deg - j) * std::pow(d.y(), j);
    B.row(row) = w * values[used[row]].transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  FieldFit out;
  out.samples = m;
  out.condition = sv[0] / sv[kTerms - 1];
  if (!(out.condition <= 1e8))
    throw Error(ErrorKind::IllConditioned,
                "fit condition number " + std::to_string(out.condition) + " exceeds 1e8");
  const Eigen::MatrixXd X = svd.solve(B);

  // Coefficient standard errors from the residual, scaled back to offsets.
  const Eigen::MatrixXd resid = A * X - B;
  const double dof = std::max(1, m - kTerms);
  const double sigma2 = resid.squaredNorm() / (2.0 * dof);
  const Eigen::MatrixXd V = svd.matrixV();
  out.jet.base = base;
  for (int deg = 0; deg <= 4; ++deg) {
    const double scale = std::pow(radius, -deg);
    double worst = 0.0;
    for (int j = 0; j <= deg; ++j) {
      const int k = Jet<4>::index(deg - j, j);
      out.jet.f1[k] = X(k, 0) * scale;
      out.jet.f2[k] = X(k, 1) * scale;
      double var = 0.0;
      for (int c = 0; c < kTerms; ++c) var += V(k, c) * V(k, c) / (sv[c] * sv[c]);
      worst = std::max(worst, std::sqrt(sigma2 * var) * scale);
    }
    out.jet.error[deg] = worst;
  }
  out.classification = classify(out.jet, tol);
  return out;
}

PlanarMapJet normal_form(SingularityClass c) {
  using J = Jet<4>;
  const J x = J::variable(0, 0.0);
  const J y = J::variable(1, 0.0);
  PlanarMapJet f;
  f.f1 = x;
  switch (c) {
    case SingularityClass::Diffeomorphism: f.f2 = y; break;
    case SingularityClass::Fold: f.f2 = y * y; break;
    case SingularityClass::Cusp: f.f2 = x * y + y * y * y; break;
    case SingularityClass::Lips: f.f2 = y * y * y + x * x * y; break;
    case SingularityClass::Beaks: f.f2 = y * y * y - x * x * y; break;
    case SingularityClass::Swallowtail: f.f2 = x * y + y * y * y * y; break;
    case SingularityClass::Degenerate: f.f2 = J(0.0); break;
  }
  return f;
}

namespace {

// Random polynomial map fixing the origin: identity plus terms of degree 1..3.
std::array<Jet<4>, 2> near_identity(std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::array<Jet<4>, 2> phi;
  for (int c = 0; c < 2; ++c) {
    for (int deg = 1; deg <= 3; ++deg)
      for (int j = 0; j <= deg; ++j) phi[c].coeff(deg - j, j) = u(rng);
  }
  phi[0].coeff(1, 0) += 1.0;
  phi[1].coeff(0, 1) += 1.0;
  return phi;
}

}  // namespace

PlanarMapJet perturb(const PlanarMapJet& f, std::mt19937_64& rng, double amplitude) {
  const auto phi = near_identity(rng, amplitude);
  const auto psi = near_identity(rng, amplitude);
  PlanarMapJet inner;
  inner.f1 = compose(f.f1, phi[0], phi[1]);
  inner.f2 = compose(f.f2, phi[0], phi[1]);
  Jet<4> a = inner.f1, b = inner.f2;
  a.coeff(0, 0) = 0.0;
  b.coeff(0, 0) = 0.0;
  PlanarMapJet out;
  out.base = f.base;
  out.f1 = compose(psi[0], a, b) + inner.f1.value();
  out.f2 = compose(psi[1], a, b) + inner.f2.value();
  return out;
}

PlanarMapJet rescale_source(const PlanarMapJet& f, double lambda) {
  PlanarMapJet out = f;
  for (int deg = 0; deg <= 4; ++deg) {
    const double s = std::pow(lambda, deg);
    for (int j = 0; j <= deg; ++j) {
      out.f1.coeff(deg - j, j) *= s;
      out.f2.coeff(deg - j, j) *= s;
    }
  }
  return out;
}

}  // namespace presym
