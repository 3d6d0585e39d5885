#include "presym/ondiag.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "presym/errors.hpp"

namespace presym {

namespace {

using J1 = Jet<1>;

struct Linearization {
  Eigen::Vector3d G;
  Eigen::Matrix3d A;   // d/d(t, v, r)
  Eigen::Vector3d Gu;  // d/du at fixed (t, v, r)
};

Linearization linearize(const BitangentScene& scene, double s, double u, double t, double v,
                        double r) {
  const Vec3<J1> g = residual_single<J1>(scene, J1(s), J1::variable(0, t), J1(u),
                                         J1::variable(1, v), J1(r));
  const Vec3<J1> gu = residual_single<J1>(scene, J1(s), J1(t), J1::variable(0, u), J1(v), J1(r));
  Linearization L;
  for (int i = 0; i < 3; ++i) {
    L.G[i] = g[i].value();
    L.A(i, 0) = g[i].coeff(1, 0);
    L.A(i, 1) = g[i].coeff(0, 1);
    L.Gu[i] = gu[i].coeff(1, 0);
  }
  L.A.col(2) = scene.m.normal(s, t) - scene.m.normal(u, v);
  return L;
}

Contact ridge_contact(const BitangentScene& scene) {
  ContactReport rep;
  try {
    rep = contact_type(scene.m, scene.sphere);
  } catch (const Error& e) {
    throw Error(ErrorKind::ContactMismatch, std::string("base contact: ") + e.what());
  }
  if (rep.type < Contact::A3)
    throw Error(ErrorKind::ContactMismatch,
                std::string("on-diagonal analysis needs A3 or higher, found ") +
                    to_string(rep.type));
  if (!rep.kernel_along_x)
    throw Error(ErrorKind::UnsupportedDegeneracy,
                "the osculating principal direction must be the first patch axis");
  return rep.type;
}

int fit_degree(Contact c) { return c == Contact::A3 ? 1 : c == Contact::A4 ? 2 : 3; }

// Least squares of degree `deg` in the scaled offsets (s/h, u/h).
Cubic poly_fit(const std::vector<Eigen::Vector2d>& nodes, const std::vector<double>& values,
               int deg, double h, double* rms = nullptr) {
  const int terms = (deg + 1) * (deg + 2) / 2;
  const int m = static_cast<int>(nodes.size());
  Eigen::MatrixXd A(m, terms);
  Eigen::VectorXd b(m);
  for (int row = 0; row < m; ++row) {
    const Eigen::Vector2d x = nodes[row] / h;
    for (int k = 0, col = 0; k <= deg; ++k)
      for (int j = 0; j <= k; ++j, ++col) A(row, col) = std::pow(x.x(), k - j) * std::pow(x.y(), j);
    b[row] = values[row];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  if (rms) *rms = std::sqrt((A * c - b).squaredNorm() / m);
  Cubic out{};
  for (int k = 0, col = 0; k <= deg; ++k)
    for (int j = 0; j <= k; ++j, ++col) out[Jet<3>::index(k - j, j)] = c[col] / std::pow(h, k);
  return out;
}

// On a centrally symmetric stencil a degree-k coefficient of a degree-d fit is
// polluted first by terms of degree d+1 or d+2, whichever has k's parity.
int richardson_order(int d, int k) {
  const int p = d + 1 - k;
  return p % 2 ? p + 1 : p;
}

struct FitPair {
  Cubic t, v;
  double rms = 0.0;
};

FitPair fit_stencil(const BitangentScene& scene, const SeriesPrediction& pred, int deg, double h,
                    int* excluded, std::vector<OnDiagSample>& samples) {
  const std::vector<Eigen::Vector2d> nodes = stencil_nodes(h, excluded);
  std::vector<double> tv, vv;
  for (const Eigen::Vector2d& n : nodes) {
    const OnDiagSample x = solve_ondiag(
        scene, n.x(), n.y(),
        {pred.t_at(n.x(), n.y()), pred.t_at(n.y(), n.x()), scene.sphere.radius});
    samples.push_back(x);
    tv.push_back(x.t);
    vv.push_back(x.v);
  }
  FitPair out;
  out.t = poly_fit(nodes, tv, deg, h, &out.rms);
  out.v = poly_fit(nodes, vv, deg, h);
  return out;
}

// t_u(s, u) along the solution branch, by implicit differentiation.
double t_u(const BitangentScene& scene, const OnDiagSample& x) {
  const Linearization L = linearize(scene, x.s, x.u, x.t, x.v, x.r);
  return L.A.partialPivLu().solve(-L.Gu)[0];
}

}  // namespace

OnDiagSample solve_ondiag(const BitangentScene& scene, double s, double u,
                          const Eigen::Vector3d& seed) {
  if (s == u) throw Error(ErrorKind::TrivialBranch, "s = u lies on the diagonal");
  const MongePatch& p = scene.m.patch;
  OnDiagSample x{s, u, seed[0], seed[1], seed[2], 0.0};
  const double scale = std::max(1.0, scene.sphere.radius);
  auto admissible = [&](const OnDiagSample& y) {
    return p.in_box(s, y.t) && p.in_box(u, y.v) && y.r > 0.0 && y.r <= scene.radius_limit();
  };
  for (int it = 0; it < 100; ++it) {
    const Linearization L = linearize(scene, s, u, x.t, x.v, x.r);
    // Symmetric seeds such as (h, -h) with t = v = 0 sit next to a singular
    // point of the system; the truncated pseudo-inverse plus backtracking on
    // |G| keeps the step bounded there.
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(L.A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const Eigen::Vector3d dx = svd.solve(-L.G);
    if (!dx.allFinite()) throw Error(ErrorKind::NoConvergence, "singular on-diagonal system");
    const double g0 = L.G.norm();
    double lambda = 1.0;
    OnDiagSample y = x;
    for (int k = 0; k < 40; ++k, lambda *= 0.5) {
      y.t = x.t + lambda * dx[0];
      y.v = x.v + lambda * dx[1];
      y.r = x.r + lambda * dx[2];
      if (admissible(y) &&
          (g0 < 1e-13 ||
           residual_single<double>(scene, s, y.t, u, y.v, y.r).norm() < (1.0 - 1e-4 * lambda) * g0))
        break;
    }
    if (!admissible(y))
      throw Error(ErrorKind::NoConvergence, "Newton iterate left the admissible region");
    x = y;
    if (lambda * dx.norm() < 1e-15 * scale) break;
  }
  // Two corrections against an extended-precision residual: the system is
  // conditioned like 1/|s-u|^2, so double residuals limit the solution.
  for (int k = 0; k < 2; ++k) {
    using LD = long double;
    const Vec3<LD> g = residual_single<LD>(scene, s, x.t, u, x.v, x.r);
    const Linearization L = linearize(scene, s, u, x.t, x.v, x.r);
    const Eigen::Vector3d dx = L.A.partialPivLu().solve(-g.cast<double>());
    x.t += dx[0];
    x.v += dx[1];
    x.r += dx[2];
  }
  x.residual = residual_single<double>(scene, s, x.t, u, x.v, x.r).norm();
  if (!(x.residual < 1e-10)) {
    std::ostringstream msg;
    msg << "on-diagonal solve at (s,u)=(" << s << "," << u << ") ends with residual "
        << x.residual;
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  if (std::hypot(s - u, x.t - x.v) < 1e-3 * std::abs(s - u))
    throw Error(ErrorKind::TrivialBranch, "solve collapsed onto the diagonal");
  return x;
}

double SeriesPrediction::t_at(double s, double u) const {
  if (contact == Contact::A3) return alpha * (s + u);
  return t20 * s * s + t11 * s * u + t02 * u * u;
}

SeriesPrediction predicted_coeffs(const MongePatch& p, Contact contact) {
  SeriesPrediction out;
  out.contact = contact;
  const double dk = p.k1 - p.k2;
  const double den = a3_denominator(p);
  const double scale = std::max({std::abs(p.c[1] * dk), std::abs(p.b[1] * p.b[2]), 1.0});
  switch (contact) {
    case Contact::A3:
      if (std::abs(den) < 1e-12 * scale)
        throw Error(ErrorKind::ExceptionalRidgeDirection,
                    "c1 k2 - c1 k1 - 2 b1 b2 vanishes: the ridge is tangent to the other "
                    "principal direction");
      out.alpha = a3_numerator(p) / den;
      break;
    case Contact::A4:
      if (std::abs(dk * den) < 1e-12 * scale)
        throw Error(ErrorKind::SingularRidge, "t02 denominator vanishes: the ridge is singular");
      out.t02 = 3.0 * a4_numerator(p) / (dk * den);
      out.t20 = out.t02 + p.b[1] / dk;
      out.t11 = 4.0 / 3.0 * out.t02;
      break;
    case Contact::A5:
      out.t20 = p.b[1] / dk;
      break;
    default:
      throw Error(ErrorKind::ContactMismatch,
                  std::string("no series prediction for ") + to_string(contact));
  }
  return out;
}

std::vector<Eigen::Vector2d> stencil_nodes(double h, int* excluded) {
  std::vector<Eigen::Vector2d> out;
  int dropped = 0;
  for (int j = -2; j <= 2; ++j)
    for (int i = -2; i <= 2; ++i) {
      if (i == 0 && j == 0) continue;
      const Eigen::Vector2d n(0.5 * h * i, 0.5 * h * j);
      if (std::abs(n.x() - n.y()) < 0.25 * h) {
        ++dropped;
        continue;
      }
      out.push_back(n);
    }
  if (excluded) *excluded = dropped;
  return out;
}

SeriesFit series_fit(const BitangentScene& scene, double h, const FitOptions& options) {
  const Contact c = ridge_contact(scene);
  const SeriesPrediction pred = predicted_coeffs(scene.m.patch, c);
  SeriesFit out;
  out.contact = c;
  out.degree = fit_degree(c);
  out.h_requested = h;
  // The solution sheet is a graph over (s, u) only out to a patch-dependent
  // radius: past it some nodes have no solution, and near it the fit is
  // biased. Either way the stencil is halved, until the fits at h and h/2
  // agree or their disagreement stops shrinking (solve noise dominates).
  struct Level {
    double h = 0.0, spread = HUGE_VAL;
    int excluded = 0;
    FitPair big, half;
    std::vector<OnDiagSample> samples;
  };
  std::optional<Level> best;
  std::optional<Error> first_error;
  for (int attempt = 0; attempt <= options.max_halvings; ++attempt, h *= 0.5) {
    Level level;
    level.h = h;
    try {
      level.big = fit_stencil(scene, pred, out.degree, h, &level.excluded, level.samples);
      level.half = fit_stencil(scene, pred, out.degree, 0.5 * h, nullptr, level.samples);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence && e.kind() != ErrorKind::TrivialBranch) throw;
      if (best) break;
      if (!first_error) first_error = e;
      continue;
    }
    double size = 0.0, spread = 0.0;
    for (int j = 0; j <= out.degree; ++j) {
      const int i = Jet<3>::index(out.degree - j, j);
      size = std::max(size, std::abs(level.half.t[i]));
      spread = std::max(spread, std::abs(level.half.t[i] - level.big.t[i]));
    }
    level.spread = spread / std::max(size, 1e-300);
    if (best && level.spread >= best->spread) break;
    best = std::move(level);
    if (best->spread <= options.target) break;
  }
  if (!best) throw *first_error;
  h = best->h;
  const int excluded = best->excluded;
  const FitPair big = best->big, half = best->half;
  out.samples = std::move(best->samples);
  out.h = h;
  out.excluded = excluded;
  out.nodes = static_cast<int>(out.samples.size() / 2);
  out.residual = big.rms;
  out.t_h = big.t;
  out.t_half = half.t;
  for (int k = 0; k <= out.degree; ++k) {
    const double f = std::pow(2.0, richardson_order(out.degree, k));
    for (int j = 0; j <= k; ++j) {
      const int i = Jet<3>::index(k - j, j);
      out.t[i] = (f * half.t[i] - big.t[i]) / (f - 1.0);
      out.v[i] = (f * half.v[i] - big.v[i]) / (f - 1.0);
      out.error[i] = std::abs(half.t[i] - big.t[i]) / (f - 1.0);
    }
  }
  return out;
}

SymmetryReport symmetry_check(const BitangentScene& scene,
                              const std::vector<Eigen::Vector2d>& grid) {
  const Contact c = ridge_contact(scene);
  const SeriesPrediction pred = predicted_coeffs(scene.m.patch, c);
  SymmetryReport out;
  for (const Eigen::Vector2d& n : grid) {
    const double s = n.x(), u = n.y();
    if (s == u) {
      ++out.excluded;
      continue;
    }
    const OnDiagSample a =
        solve_ondiag(scene, s, u, {pred.t_at(s, u), pred.t_at(u, s), scene.sphere.radius});
    const OnDiagSample b =
        solve_ondiag(scene, u, s, {pred.t_at(u, s), pred.t_at(s, u), scene.sphere.radius});
    out.defect = std::max({out.defect, std::abs(a.t - b.v), std::abs(a.v - b.t)});
    ++out.nodes;
  }
  return out;
}

OnDiagClassification ondiag_classify(const BitangentScene& scene, double h, double tol) {
  OnDiagClassification out;
  out.fit = series_fit(scene, h);
  out.jet.f1 = Jet<4>::variable(0, 0.0);
  for (int k = 0; k <= out.fit.degree; ++k)
    for (int j = 0; j <= k; ++j) {
      out.jet.f2.coeff(k - j, j) = out.fit.t[Jet<3>::index(k - j, j)];
      out.jet.error[k] = std::max(out.jet.error[k], out.fit.error[Jet<3>::index(k - j, j)]);
    }
  // A fitted jet cannot resolve coefficients below its own extrapolation error,
  // so the decision tolerance is floored there.
  const double noise = *std::max_element(out.jet.error.begin(), out.jet.error.begin() + 3);
  out.classification = classify(out.jet, std::max(tol, 10.0 * noise));
  if (out.classification.sigma.kind == SigmaKind::SmoothCurve) {
    const Eigen::Vector2d line = Eigen::Vector2d(3.0, -2.0).normalized();
    const double c = std::min(1.0, std::abs(out.classification.sigma.tangent.dot(line)));
    out.sigma_angle_deg = std::acos(c) * 180.0 / M_PI;
  }
  return out;
}

OnDiagSample fold_point(const BitangentScene& scene, double s) {
  const Contact c = ridge_contact(scene);
  const SeriesPrediction pred = predicted_coeffs(scene.m.patch, c);
  if (c != Contact::A4)
    throw Error(ErrorKind::ContactMismatch, "fold points exist on A4 ridges only");
  auto solve_at = [&](double u) {
    return solve_ondiag(scene, s, u, {pred.t_at(s, u), pred.t_at(u, s), scene.sphere.radius});
  };
  // Secant on t_u(s, .) from the predicted extremum u = -t11 s / (2 t02).
  double u0 = -pred.t11 * s / (2.0 * pred.t02);
  double u1 = u0 + 1e-3 * std::max(std::abs(s), 1e-3);
  double f0 = t_u(scene, solve_at(u0)), f1 = t_u(scene, solve_at(u1));
  // t_u carries an error of roughly 1e-14 / (s - u)^2, so the secant
  // chatters once it gets there; the best iterate is kept.
  double best_u = std::abs(f0) < std::abs(f1) ? u0 : u1;
  double best_f = std::min(std::abs(f0), std::abs(f1));
  for (int it = 0; it < 50 && f1 != 0.0 && f1 != f0; ++it) {
    const double u2 = u1 - f1 * (u1 - u0) / (f1 - f0);
    u0 = u1;
    f0 = f1;
    u1 = u2;
    f1 = t_u(scene, solve_at(u1));
    if (std::abs(f1) < best_f) {
      best_f = std::abs(f1);
      best_u = u1;
    }
    if (std::abs(u1 - u0) < 1e-12 * std::abs(s)) break;
  }
  const double floor = 1e-13 / ((s - best_u) * (s - best_u)) + 1e-12;
  if (!(best_f < floor))
    throw Error(ErrorKind::NoConvergence, "fold point search did not converge");
  return solve_at(best_u);
}

std::vector<OnDiagSample> spheres_through(const BitangentScene& scene, double s, double t,
                                          double window) {
  const Contact c = ridge_contact(scene);
  const SeriesPrediction pred = predicted_coeffs(scene.m.patch, c);
  auto solve_at = [&](double u) {
    return solve_ondiag(scene, s, u, {pred.t_at(s, u), pred.t_at(u, s), scene.sphere.radius});
  };
  std::vector<double> us;
  const int n = 400;
  for (int k = 0; k <= n; ++k) us.push_back(-window + 2.0 * window * k / n);
  if (c == Contact::A4) us.push_back(fold_point(scene, s).u);
  std::sort(us.begin(), us.end());
  const double band = 1e-4;
  std::erase_if(us, [&](double u) { return std::abs(u - s) < band; });

  // Far from the fold the sheet may stop being a graph over u; nodes without
  // a solution leave gaps, and no root is sought across a gap.
  std::vector<OnDiagSample> samples;
  for (double u : us) {
    try {
      samples.push_back(solve_at(u));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence) throw;
    }
  }
  const double spacing = 2.0 * window / n;
  std::vector<OnDiagSample> out;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    OnDiagSample a = samples[k], b = samples[k + 1];
    if (std::abs(b.u - a.u) > 1.5 * spacing) continue;
    double fa = a.t - t, fb = b.t - t;
    if (fa == 0.0) {
      out.push_back(a);
      continue;
    }
    if (fa * fb > 0.0) continue;
    // Illinois false position on u.
    OnDiagSample m = a;
    for (int it = 0; it < 100; ++it) {
      const double u = (a.u * fb - b.u * fa) / (fb - fa);
      m = solve_at(u);
      const double fm = m.t - t;
      if (std::abs(fm) < 1e-14 || std::abs(b.u - a.u) < 1e-15) break;
      if (fm * fb < 0.0) {
        a = b;
        fa = fb;
      } else {
        fa *= 0.5;
      }
      b = m;
      fb = fm;
    }
    out.push_back(m);
  }
  return out;
}

void write_ondiag_csv(std::ostream& os, const std::vector<OnDiagSample>& samples) {
  os << "s,u,t,v,r,residual\n" << std::setprecision(17);
  for (const OnDiagSample& x : samples)
    os << x.s << ',' << x.u << ',' << x.t << ',' << x.v << ',' << x.r << ',' << x.residual
       << '\n';
}

}  // namespace presym
