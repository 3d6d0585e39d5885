#include "presym/presym2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "presym/contour.hpp"
#include "presym/errors.hpp"

namespace presym {

namespace {

double wrap_positive(double a, double period) {
  double r = std::fmod(a, period);
  return r < 0 ? r + period : r;
}

// d/ds of the unit tangent.
Eigen::Vector2d tangent_derivative(const CurveFrame& f) { return f.curvature * f.speed * f.normal; }

// Root of g along one grid edge, bracketed by [lo, hi] in the moving
// coordinate. Newton steps that leave the bracket fall back to bisection.
double polish_on_edge(const PlaneCurve& curve, double fixed, bool move_s, double lo, double hi,
                      double guess) {
  auto eval = [&](double x) {
    const double s = move_s ? x : fixed;
    const double t = move_s ? fixed : x;
    const Eigen::Vector2d grad = residual_g_gradient(curve, s, t);
    return std::pair{residual_g(curve, s, t), move_s ? grad.x() : grad.y()};
  };
  double f_lo = eval(lo).first;
  double x = guess;
  for (int it = 0; it < 100; ++it) {
    const auto [f, df] = eval(x);
    if (f == 0.0) return x;
    if ((f < 0) == (f_lo < 0)) {
      lo = x;
      f_lo = f;
    } else {
      hi = x;
    }
    double next = (df != 0.0) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

// Bitangent system p(s) + r m(s) - q(t) - r n(t) with m, n the frame normals
// scaled by fixed orientation signs.
struct BitangentSystem2D {
  const PlaneCurve& m;
  const PlaneCurve& n;
  double sign_m;
  double sign_n;

  Eigen::Vector2d residual(double s, double t, double r) const {
    const CurveFrame fm = curve_frame(m, s);
    const CurveFrame fn = curve_frame(n, t);
    return fm.point + r * sign_m * fm.normal - fn.point - r * sign_n * fn.normal;
  }

  std::optional<Eigen::Vector2d> solve(double s, Eigen::Vector2d seed) const {
    Eigen::Vector2d x = seed;  // (t, r)
    for (int it = 0; it < 50; ++it) {
      const CurveFrame fm = curve_frame(m, s);
      const CurveFrame fn = curve_frame(n, x[0]);
      const Eigen::Vector2d res =
          fm.point + x[1] * sign_m * fm.normal - fn.point - x[1] * sign_n * fn.normal;
      if (res.norm() < 1e-14) return x;
      Eigen::Matrix2d jac;
      const Eigen::Vector2d dn = -sign_n * fn.curvature * fn.speed * fn.tangent;
      jac.col(0) = -(fn.speed * fn.tangent + x[1] * dn);
      jac.col(1) = sign_m * fm.normal - sign_n * fn.normal;
      const Eigen::Vector2d step = jac.partialPivLu().solve(res);
      x -= step;
      if (!x.allFinite()) return std::nullopt;
      if (step.norm() < 1e-15 * (1.0 + x.norm())) {
        const Eigen::Vector2d check = residual(s, x[0], x[1]);
        if (check.norm() < 1e-11) return x;
      }
    }
    if (residual(s, x[0], x[1]).norm() < 1e-11) return x;
    return std::nullopt;
  }

  // Continuation from (s_from, seed) to s_to in halving steps.
  std::optional<Eigen::Vector2d> continue_to(double s_from, Eigen::Vector2d seed,
                                             double s_to) const {
    if (auto direct = solve(s_to, seed)) {
      if ((*direct - seed).norm() < 0.5) return direct;
    }
    for (int pieces = 2; pieces <= 64; pieces *= 2) {
      Eigen::Vector2d x = seed;
      bool ok = true;
      for (int k = 1; k <= pieces && ok; ++k) {
        const double s = s_from + (s_to - s_from) * k / pieces;
        auto next = solve(s, x);
        if (!next) ok = false;
        else x = *next;
      }
      if (ok) return x;
    }
    return std::nullopt;
  }
};

}  // namespace

double residual_g(const PlaneCurve& curve, double s, double t, TangentSign sign) {
  const CurveFrame fs = curve_frame(curve, s);
  const CurveFrame ft = curve_frame(curve, t);
  const double pm = sign == TangentSign::Minus ? -1.0 : 1.0;
  return (fs.point - ft.point).dot(fs.tangent + pm * ft.tangent);
}

Eigen::Vector2d residual_g_gradient(const PlaneCurve& curve, double s, double t,
                                    TangentSign sign) {
  const CurveFrame fs = curve_frame(curve, s);
  const CurveFrame ft = curve_frame(curve, t);
  const double pm = sign == TangentSign::Minus ? -1.0 : 1.0;
  const Eigen::Vector2d chord = fs.point - ft.point;
  const Eigen::Vector2d tsum = fs.tangent + pm * ft.tangent;
  const double ds = fs.speed * fs.tangent.dot(tsum) + chord.dot(tangent_derivative(fs));
  const double dt = -ft.speed * ft.tangent.dot(tsum) + pm * chord.dot(tangent_derivative(ft));
  return {ds, dt};
}

BitangentCircle bitangent_circle(const PlaneCurve& curve, double s, double t) {
  const CurveFrame fs = curve_frame(curve, s);
  const CurveFrame ft = curve_frame(curve, t);
  const Eigen::Vector2d dn = fs.normal - ft.normal;
  BitangentCircle c{};
  const double dn2 = dn.squaredNorm();
  if (dn2 < 1e-24) {
    c.finite = false;
    c.defect = std::numeric_limits<double>::infinity();
    return c;
  }
  c.radius = (ft.point - fs.point).dot(dn) / dn2;
  c.center = fs.point + c.radius * fs.normal;
  c.defect = std::abs((c.center - ft.point).norm() - std::abs(c.radius));
  c.finite = true;
  return c;
}

double wrap_difference(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d >= 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

PreSymCurve2D trace_presym2d(const PlaneCurve& curve, const TraceOptions& opt) {
  if (!curve.periodic()) throw std::invalid_argument("trace_presym2d needs a closed curve");
  if (opt.grid < 64) throw std::invalid_argument("grid must be at least 64");
  if (!(opt.diagonal_band > 0)) throw std::invalid_argument("diagonal band must be positive");

  const double period = curve.period();
  const int n = opt.grid;
  const double h = period / n;
  // Same offset on both axes keeps the grid swap-symmetric; 0.3 of a cell
  // keeps the nodes off lines of the form s + t = const multiple of h.
  const double offset = 0.3 * h;

  GridSpec grid{curve.domain_min() + offset, curve.domain_min() + offset, h, h, n, n, true, true};
  std::vector<CurveFrame> frames(n);
  for (int i = 0; i < n; ++i) frames[i] = curve_frame(curve, grid.x0 + i * h);

  std::vector<double> values(static_cast<std::size_t>(n) * n);
  double max_abs = 0.0;
  double scale = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const CurveFrame& fs = frames[i];
      const CurveFrame& ft = frames[j];
      const double v = (fs.point - ft.point).dot(fs.tangent - ft.tangent);
      values[static_cast<std::size_t>(j) * n + i] = v;
      max_abs = std::max(max_abs, std::abs(v));
      scale = std::max(scale, (fs.point - ft.point).squaredNorm());
    }
  }
  // g vanishing identically (all bitangent circles concentric): no isolated
  // branches to trace.
  if (max_abs <= 1e-12 * std::max(scale, 1e-300))
    throw Error(ErrorKind::NoBranches, "residual vanishes identically on the torus");

  const auto lines = trace_zero_contours(grid, values);

  PreSymCurve2D out;
  int branch = 0;
  for (const auto& line : lines) {
    std::vector<PreSymSample2D> polished;
    std::vector<bool> keep;
    for (const auto& p : line.points) {
      // Polish along the edge carrying the crossing.
      const bool move_s = p.along_x;
      const double fixed = move_s ? grid.y0 + p.j * h : grid.x0 + p.i * h;
      const double lo = move_s ? grid.x0 + p.i * h : grid.y0 + p.j * h;
      const double root = polish_on_edge(curve, fixed, move_s, lo, lo + h, move_s ? p.x : p.y);
      PreSymSample2D sample;
      sample.s = curve.domain_min() + wrap_positive((move_s ? root : fixed) - curve.domain_min(), period);
      sample.t = curve.domain_min() + wrap_positive((move_s ? fixed : root) - curve.domain_min(), period);
      sample.residual = std::abs(residual_g(curve, sample.s, sample.t));
      const double diag = std::abs(wrap_difference(sample.s, sample.t, period));
      bool ok = diag >= opt.diagonal_band && sample.residual < opt.newton_tolerance;
      sample.near_diagonal = diag < 2.0 * opt.diagonal_band;

      const CurveFrame fs = curve_frame(curve, sample.s);
      const CurveFrame ft = curve_frame(curve, sample.t);
      if (std::abs(cross2(fs.tangent, ft.tangent)) < opt.parallel_tolerance) {
        sample.near_parallel = true;
        const BitangentCircle c = bitangent_circle(curve, sample.s, sample.t);
        if (!c.finite || c.defect > 1e-8) ok = false;
      }
      polished.push_back(sample);
      keep.push_back(ok);
    }
    // A loop that is cut somewhere is re-read from just after a cut so each
    // surviving run becomes one contiguous branch.
    std::size_t start = 0;
    if (line.closed) {
      for (std::size_t k = 0; k < keep.size(); ++k) {
        if (!keep[k]) {
          start = k;
          break;
        }
      }
    }
    bool open_run = false;
    for (std::size_t step = 0; step < polished.size(); ++step) {
      const std::size_t k = (start + step) % polished.size();
      if (!keep[k]) {
        if (open_run) ++branch;
        open_run = false;
        continue;
      }
      polished[k].branch = branch;
      out.samples.push_back(polished[k]);
      open_run = true;
    }
    if (open_run) ++branch;
  }
  out.branch_count = branch;
  if (out.samples.empty())
    throw Error(ErrorKind::NoBranches, "no pre-symmetry branches outside the exclusions");
  return out;
}

double trace_symmetry_defect(const PreSymCurve2D& trace, double period) {
  double worst = 0.0;
  for (const auto& a : trace.samples) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : trace.samples) {
      const double ds = wrap_difference(a.t, b.s, period);
      const double dt = wrap_difference(a.s, b.t, period);
      best = std::min(best, std::hypot(ds, dt));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

A1A3Analysis a1a3_analyze(const PlaneCurve& m, const PlaneCurve& n, double s0, double t0,
                          double r0, const A1A3Options& opt) {
  const CurveFrame fm = curve_frame(m, s0);
  const double sign_m = fm.curvature >= 0 ? 1.0 : -1.0;
  const double kappa = sign_m * fm.curvature;
  const double dkappa = curvature_derivative(m, s0) / fm.speed;
  if (std::abs(r0 * kappa - 1.0) > opt.contact_tolerance)
    throw Error(ErrorKind::ContactMismatch, "r0 is not the radius of curvature at s0");
  if (std::abs(dkappa) > opt.contact_tolerance)
    throw Error(ErrorKind::ContactMismatch, "s0 is not a vertex (curvature derivative nonzero)");

  const Eigen::Vector2d center = fm.point + r0 * sign_m * fm.normal;
  const CurveFrame fn = curve_frame(n, t0);
  const Eigen::Vector2d to_center = center - fn.point;
  if (std::abs(to_center.norm() - r0) > opt.contact_tolerance ||
      std::abs(cross2(to_center, fn.normal)) > opt.contact_tolerance * r0)
    throw Error(ErrorKind::ContactMismatch, "circle of curvature is not tangent to N at t0");
  const double sign_n = to_center.dot(fn.normal) >= 0 ? 1.0 : -1.0;
  if (std::abs(r0 * sign_n * fn.curvature - 1.0) < opt.contact_tolerance)
    throw Error(ErrorKind::ContactMismatch, "contact at t0 is not A1");

  const BitangentSystem2D sys{m, n, sign_m, sign_n};
  const Eigen::Vector2d base(t0, r0);
  auto solve_at = [&](double s) {
    auto x = sys.continue_to(s0, base, s);
    if (!x) throw Error(ErrorKind::NoConvergence, "implicit solution lost near s0");
    return *x;
  };

  // Five-point central stencils, t and r sampled at s0 + k h.
  struct Stencil {
    double d1, d2, d3;
  };
  auto stencil = [&](double h, int comp) {
    std::array<double, 5> f{};
    for (int k = -2; k <= 2; ++k) f[k + 2] = (k == 0) ? base[comp] : solve_at(s0 + k * h)[comp];
    Stencil st{};
    st.d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
    st.d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
    st.d3 = (-f[0] + 2 * f[1] - 2 * f[3] + f[4]) / (2 * h * h * h);
    return st;
  };

  A1A3Analysis out;
  out.s0 = s0;
  out.t0 = t0;
  out.r0 = r0;
  const double h = opt.step;
  const Stencil th = stencil(h, 0), th2 = stencil(h / 2, 0);
  const Stencil rh = stencil(h, 1), rh2 = stencil(h / 2, 1);
  // One Richardson step: 4th-order stencils for d1, d2; 2nd order for d3.
  auto rich4 = [](double coarse, double fine) { return (16 * fine - coarse) / 15; };
  auto rich2 = [](double coarse, double fine) { return (4 * fine - coarse) / 3; };
  out.dt1 = rich4(th.d1, th2.d1);
  out.dt2 = rich4(th.d2, th2.d2);
  out.dt3 = rich2(th.d3, th2.d3);
  out.dr1 = rich4(rh.d1, rh2.d1);
  out.dr2 = rich4(rh.d2, rh2.d2);
  out.err_dt1 = std::abs(th.d1 - th2.d1);
  out.err_dt2 = std::abs(th.d2 - th2.d2);
  out.err_dt3 = std::abs(th.d3 - th2.d3);
  out.err_dr1 = std::abs(rh.d1 - rh2.d1);
  out.err_dr2 = std::abs(rh.d2 - rh2.d2);

  const auto rows = sample_bitangent_branch(m, n, s0, t0, r0 * sign_m, s0 - opt.window,
                                            s0 + opt.window, opt.window_samples);
  for (const auto& row : rows) out.samples.emplace_back(row[0], row[1], sign_m * row[2]);
  return out;
}

std::vector<Eigen::Vector3d> sample_bitangent_branch(const PlaneCurve& m, const PlaneCurve& n,
                                                     double s_seed, double t_seed, double r_seed,
                                                     double s_lo, double s_hi, int count) {
  const CurveFrame fm = curve_frame(m, s_seed);
  const CurveFrame fn = curve_frame(n, t_seed);
  const Eigen::Vector2d center = fm.point + r_seed * fm.normal;
  const double sign_n = (center - fn.point).dot(fn.normal) >= 0 ? 1.0 : -1.0;
  const double sign_r = r_seed >= 0 ? 1.0 : -1.0;
  // Signed radius r along m's frame normal becomes |r| with sign_m = sign_r.
  const BitangentSystem2D sys{m, n, sign_r, sign_n};
  auto seed = sys.solve(s_seed, {t_seed, std::abs(r_seed)});
  if (!seed) throw Error(ErrorKind::NoConvergence, "no bitangent circle at the seed");

  std::vector<Eigen::Vector3d> rows(static_cast<std::size_t>(count));
  const double step = (s_hi - s_lo) / (count - 1);
  // Nearest grid index to the seed, then walk outwards both ways.
  int k0 = static_cast<int>(std::lround((s_seed - s_lo) / step));
  k0 = std::clamp(k0, 0, count - 1);
  for (int dir : {-1, 1}) {
    double s_prev = s_seed;
    Eigen::Vector2d x = *seed;
    for (int k = (dir > 0 ? k0 : k0 - 1); k >= 0 && k < count; k += dir) {
      const double s = s_lo + k * step;
      auto next = sys.continue_to(s_prev, x, s);
      if (!next) throw Error(ErrorKind::NoConvergence, "continuation failed along the branch");
      x = *next;
      s_prev = s;
      rows[k] = {s, x[0], sign_r * x[1]};
    }
  }
  return rows;
}

int count_local_extrema(const std::vector<Eigen::Vector3d>& samples) {
  int count = 0;
  int last_sign = 0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double d = samples[k][1] - samples[k - 1][1];
    const int sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

}  // namespace presym
