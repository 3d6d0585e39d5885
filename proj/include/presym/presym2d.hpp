#ifndef PRESYM_PRESYM2D_HPP
#define PRESYM_PRESYM2D_HPP

#include <vector>

#include <Eigen/Core>

#include "presym/geometry2d.hpp"

namespace presym {

enum class TangentSign { Minus, Plus };

/// (gamma(s) - gamma(t)) . (T(s) -/+ T(t)): vanishes on pairs of points
/// admitting a circle tangent at both.
double residual_g(const PlaneCurve& curve, double s, double t,
                  TangentSign sign = TangentSign::Minus);

/// Partial derivatives (d/ds, d/dt) of residual_g.
Eigen::Vector2d residual_g_gradient(const PlaneCurve& curve, double s, double t,
                                    TangentSign sign = TangentSign::Minus);

struct BitangentCircle {
  Eigen::Vector2d center;
  double radius;  // signed along the curve normal at s
  double defect;  // | |center - gamma(t)| - |radius| |
  bool finite;
};

/// Circle tangent at gamma(s) whose center is equidistant from gamma(t).
BitangentCircle bitangent_circle(const PlaneCurve& curve, double s, double t);

struct TraceOptions {
  int grid = 256;
  double diagonal_band = 0.05;
  double parallel_tolerance = 1e-6;
  double newton_tolerance = 1e-10;
};

struct PreSymSample2D {
  int branch = 0;
  double s = 0.0;
  double t = 0.0;
  double residual = 0.0;
  bool near_diagonal = false;
  bool near_parallel = false;
};

struct PreSymCurve2D {
  std::vector<PreSymSample2D> samples;
  int branch_count = 0;
};

/// Traces {g = 0} on the parameter torus of a closed curve, excluding the
/// diagonal band and parallel-tangent pairs without a finite bitangent circle.
/// Throws Error(NoBranches) when nothing survives.
PreSymCurve2D trace_presym2d(const PlaneCurve& curve, const TraceOptions& options = {});

/// Signed difference a - b wrapped into [-period/2, period/2).
double wrap_difference(double a, double b, double period);

/// Largest distance between a traced sample with (s, t) swapped and the
/// nearest traced sample. Zero for an exactly symmetric trace.
double trace_symmetry_defect(const PreSymCurve2D& trace, double period);

/// Implicit solution of p(s) + r m(s) = q(t) + r n(t) near an A3 (vertex)
/// contact at s0 on M and an A1 contact at t0 on N.
struct A1A3Analysis {
  double s0 = 0.0;
  double t0 = 0.0;
  double r0 = 0.0;
  double dt1 = 0.0, dt2 = 0.0, dt3 = 0.0;  // t', t'', t''' at s0
  double dr1 = 0.0, dr2 = 0.0;             // r', r''
  double err_dt1 = 0.0, err_dt2 = 0.0, err_dt3 = 0.0;
  double err_dr1 = 0.0, err_dr2 = 0.0;
  std::vector<Eigen::Vector3d> samples;  // (s, t(s), r(s)) around s0
};

struct A1A3Options {
  double step = 1e-3;
  double window = 0.05;
  int window_samples = 41;
  double contact_tolerance = 1e-8;
};

A1A3Analysis a1a3_analyze(const PlaneCurve& m, const PlaneCurve& n, double s0, double t0,
                          double r0, const A1A3Options& options = {});

/// Continuation of (t(s), r(s)) over [s_lo, s_hi] from a seed at s_seed.
/// No contact-type preconditions; used to follow the family across a transition.
std::vector<Eigen::Vector3d> sample_bitangent_branch(const PlaneCurve& m, const PlaneCurve& n,
                                                     double s_seed, double t_seed, double r_seed,
                                                     double s_lo, double s_hi, int count);

/// Number of strict interior local extrema of t along sampled (s, t, r) rows.
int count_local_extrema(const std::vector<Eigen::Vector3d>& samples);

}  // namespace presym

#endif  // PRESYM_PRESYM2D_HPP
