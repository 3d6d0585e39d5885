#include "presym/offdiag.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/SVD>

#include "presym/contour.hpp"

namespace presym {

namespace {

using Vec3d = Eigen::Vector3d;

void require_two_patches(const BitangentScene& scene) {
  if (!scene.two_patch()) throw Error(ErrorKind::ContactMismatch, "scene has a single patch");
}

double scene_scale(const BitangentScene& scene) { return std::max(1.0, scene.sphere.radius); }

// The 3x3 block of dG for the given unknown columns.
Eigen::Matrix3d block(const Eigen::Matrix<double, 3, 5>& J, int a, int b, int c) {
  Eigen::Matrix3d out;
  out.col(0) = J.col(a);
  out.col(1) = J.col(b);
  out.col(2) = J.col(c);
  return out;
}

// Newton on three of the five unknowns; `fixed` chooses which pair is held.
enum class Unknowns { SecondContact, FirstContact };

OffDiagSample newton(const BitangentScene& scene, OffDiagSample x, Unknowns which,
                     const NewtonOptions& opt) {
  require_two_patches(scene);
  const double scale = scene_scale(scene);
  const MongePatch& pm = scene.m.patch;
  const MongePatch& pn = scene.n->patch;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Vec3d G = residual_G<double>(scene, x.s, x.t, x.u, x.v, x.r);
    x.residual = G.norm();
    const Eigen::Matrix<double, 3, 5> J = parametric_jacobian(scene, x);
    const Eigen::Matrix3d A =
        which == Unknowns::SecondContact ? block(J, 2, 3, 4) : block(J, 0, 1, 4);
    const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(A).singularValues();
    if (sv[2] <= opt.singular_ratio * sv[0]) {
      std::ostringstream msg;
      msg << "3x3 system degenerates at (s,t,u,v,r)=(" << x.s << "," << x.t << "," << x.u << ","
          << x.v << "," << x.r << "), singular values " << sv.transpose();
      throw Error(ErrorKind::SingularJacobian, msg.str());
    }
    if (x.residual < 1e-15 * scale) break;
    const Eigen::Vector3d dx = A.partialPivLu().solve(-G);
    if (which == Unknowns::SecondContact) {
      x.u += dx[0];
      x.v += dx[1];
    } else {
      x.s += dx[0];
      x.t += dx[1];
    }
    x.r += dx[2];
    if (!pm.in_box(x.s, x.t) || !pn.in_box(x.u, x.v) || !(x.r > 0.0) ||
        x.r > scene.radius_limit())
      throw Error(ErrorKind::NoConvergence, "Newton iterate left the admissible region");
    if (dx.norm() < 1e-15 * scale) {
      x.residual = residual_G<double>(scene, x.s, x.t, x.u, x.v, x.r).norm();
      break;
    }
  }
  x.residual = residual_G<double>(scene, x.s, x.t, x.u, x.v, x.r).norm();
  if (!(x.residual < opt.accept)) {
    std::ostringstream msg;
    msg << "residual " << x.residual << " after " << opt.max_iterations << " iterations";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  return x;
}

Contact safe_contact(const EmbeddedPatch& p, const Sphere& s) {
  try {
    return contact_type(p, s).type;
  } catch (const Error& e) {
    throw Error(ErrorKind::ContactMismatch, std::string("base contact: ") + e.what());
  }
}

}  // namespace

std::array<Eigen::Vector3d, 5> jacobian_columns(const BitangentScene& scene,
                                               const OffDiagSample& x) {
  require_two_patches(scene);
  const PrincipalData pm = principal_data(scene.m, x.s, x.t);
  const PrincipalData pn = principal_data(*scene.n, x.u, x.v);
  const double r = x.r;
  return {(1.0 - r * pm.k1) * pm.e1, (1.0 - r * pm.k2) * pm.e2, -(1.0 - r * pn.k1) * pn.e1,
          -(1.0 - r * pn.k2) * pn.e2, pm.normal - pn.normal};
}

Eigen::Matrix<double, 3, 5> parametric_jacobian(const BitangentScene& scene,
                                                const OffDiagSample& x) {
  require_two_patches(scene);
  using J1 = Jet<1>;
  const J1 r(x.r);
  const Vec3<J1> a = scene.m.point(J1::variable(0, x.s), J1::variable(1, x.t)) +
                     scene.m.normal(J1::variable(0, x.s), J1::variable(1, x.t)) * r;
  const Vec3<J1> b = scene.n->point(J1::variable(0, x.u), J1::variable(1, x.v)) +
                     scene.n->normal(J1::variable(0, x.u), J1::variable(1, x.v)) * r;
  Eigen::Matrix<double, 3, 5> out;
  for (int k = 0; k < 3; ++k) {
    out(k, 0) = a[k].coeff(1, 0);
    out(k, 1) = a[k].coeff(0, 1);
    out(k, 2) = -b[k].coeff(1, 0);
    out(k, 3) = -b[k].coeff(0, 1);
  }
  out.col(4) = scene.m.normal(x.s, x.t) - scene.n->normal(x.u, x.v);
  return out;
}

OffDiagSample solve_second_contact(const BitangentScene& scene, double s, double t,
                                   const Eigen::Vector3d& seed, const NewtonOptions& opt) {
  OffDiagSample x{s, t, seed[0], seed[1], seed[2], 0.0};
  return newton(scene, x, Unknowns::SecondContact, opt);
}

OffDiagSample solve_first_contact(const BitangentScene& scene, double u, double v,
                                  const Eigen::Vector3d& seed, const NewtonOptions& opt) {
  OffDiagSample x{seed[0], seed[1], u, v, seed[2], 0.0};
  return newton(scene, x, Unknowns::FirstContact, opt);
}

OffDiagSample base_sample(const BitangentScene& scene) {
  return solve_second_contact(scene, 0.0, 0.0, Eigen::Vector3d(0.0, 0.0, scene.sphere.radius));
}

int GraphField::valid_count() const {
  int n = 0;
  for (const auto& node : nodes) n += node.valid;
  return n;
}

namespace {

bool fill_node(const BitangentScene& scene, GraphNode& node, const OffDiagSample& sample) {
  try {
    const SolutionJet<2> jet = solution_jet<2>(scene, sample);
    node.sample = sample;
    node.u = jet.u;
    node.v = jet.v;
    node.r = jet.r;
    node.valid = true;
  } catch (const Error&) {
    node.valid = false;
  }
  return node.valid;
}

// Walks from a solved node to (s, t) in n equal steps, predicting each seed
// from the parent's expansion.
bool march(const BitangentScene& scene, const GraphNode& parent, double s, double t, int n,
           OffDiagSample& out) {
  const double ds = s - parent.sample.s;
  const double dt = t - parent.sample.t;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  for (int k = 1; k <= n; ++k) {
    const double f = static_cast<double>(k) / n;
    const Eigen::Vector3d pred(parent.u.evaluate(f * ds, f * dt), parent.v.evaluate(f * ds, f * dt),
                               parent.r.evaluate(f * ds, f * dt));
    try {
      out = solve_second_contact(scene, parent.sample.s + f * ds, parent.sample.t + f * dt,
                                 pred + offset);
    } catch (const Error&) {
      return false;
    }
    offset = Eigen::Vector3d(out.u, out.v, out.r) - pred;
  }
  return true;
}

int sgn(int v) { return (v > 0) - (v < 0); }

}  // namespace

GraphField build_graph_field(const BitangentScene& scene, const OffDiagSample& base,
                             const FieldOptions& options) {
  GraphField field;
  field.s0 = base.s;
  field.t0 = base.t;
  field.half = options.half_nodes;
  field.step = options.half_width / options.half_nodes;
  field.nodes.assign(static_cast<std::size_t>(field.width() * field.width()), GraphNode{});
  if (!fill_node(scene, field.at(0, 0), base))
    throw Error(ErrorKind::SingularJacobian, "base sample has a degenerate system");

  for (int k = 1; k <= field.half; ++k) {
    for (int j = -k; j <= k; ++j) {
      for (int i = -k; i <= k; ++i) {
        if (std::max(std::abs(i), std::abs(j)) != k) continue;
        // Parents in the previous ring, most direct first.
        const int pi = std::abs(i) == k ? i - sgn(i) : i;
        const int pj = std::abs(j) == k ? j - sgn(j) : j;
        const std::array<std::pair<int, int>, 3> parents = {
            std::pair{pi, pj}, std::pair{i - sgn(i), j}, std::pair{i, j - sgn(j)}};
        GraphNode& node = field.at(i, j);
        const double s = field.s_of(i), t = field.t_of(j);
        for (const auto& [a, b] : parents) {
          if (std::max(std::abs(a), std::abs(b)) != k - 1) continue;
          const GraphNode& parent = field.at(a, b);
          if (!parent.valid) continue;
          OffDiagSample x;
          for (int pieces = 1; pieces <= 16 && !node.valid; pieces *= 2) {
            if (march(scene, parent, s, t, pieces, x)) fill_node(scene, node, x);
          }
          if (node.valid) break;
        }
      }
    }
  }
  return field;
}

void write_field_csv(std::ostream& os, const GraphField& field) {
  os << "s,t,valid,u,v,r,u_s,u_t,v_s,v_t,r_s,r_t,u_ss,u_st,u_tt,v_ss,v_st,v_tt,r_ss,r_st,r_tt\n";
  os << std::setprecision(17);
  for (int j = -field.half; j <= field.half; ++j) {
    for (int i = -field.half; i <= field.half; ++i) {
      const GraphNode& n = field.at(i, j);
      os << field.s_of(i) << ',' << field.t_of(j) << ',' << (n.valid ? 1 : 0);
      if (n.valid) {
        for (const Jet<2>* jet : {&n.u, &n.v, &n.r}) os << ',' << jet->value();
        for (const Jet<2>* jet : {&n.u, &n.v, &n.r})
          os << ',' << jet->partial(1, 0) << ',' << jet->partial(0, 1);
        for (const Jet<2>* jet : {&n.u, &n.v, &n.r})
          os << ',' << jet->partial(2, 0) << ',' << jet->partial(1, 1) << ',' << jet->partial(0, 2);
      } else {
        for (int k = 0; k < 18; ++k) os << ",";
      }
      os << '\n';
    }
  }
}

CriticalCurves critical_curves(const GraphField& field) {
  const int w = field.width();
  std::vector<double> det(static_cast<std::size_t>(w * w), 0.0);
  std::vector<double> chi(det.size(), 0.0);

  // Kernel taken from a fixed row of dg so its orientation is consistent.
  const GraphNode& base = field.at(0, 0);
  const double nu = std::hypot(base.u.coeff(1, 0), base.u.coeff(0, 1));
  const double nv = std::hypot(base.v.coeff(1, 0), base.v.coeff(0, 1));
  const bool row_u = nu >= nv;

  for (int j = -field.half; j <= field.half; ++j) {
    for (int i = -field.half; i <= field.half; ++i) {
      const GraphNode& n = field.at(i, j);
      const std::size_t k = field.index(i, j);
      if (!n.valid) {
        det[k] = std::nan("");
        continue;
      }
      const Jet<2> Ds = n.u.derivative(0) * n.v.derivative(1) - n.u.derivative(1) * n.v.derivative(0);
      const double D = Ds.value();
      const Eigen::Vector2d grad(Ds.coeff(1, 0), Ds.coeff(0, 1));
      const Jet<2>& row = row_u ? n.u : n.v;
      const Eigen::Vector2d kernel(row.coeff(0, 1), -row.coeff(1, 0));
      det[k] = D;
      chi[k] = grad.dot(kernel);
    }
  }

  GridSpec g;
  g.x0 = field.s_of(-field.half);
  g.y0 = field.t_of(-field.half);
  g.dx = g.dy = field.step;
  g.nx = g.ny = w;
  std::vector<double> values = det;
  for (double& v : values)
    if (std::isnan(v)) v = 1.0;
  const auto lines = trace_zero_contours(g, values);

  CriticalCurves out;
  auto node_index = [&](int gi, int gj) {
    return static_cast<std::size_t>(gj * w + gi);
  };
  for (const ContourLine& line : lines) {
    std::vector<Eigen::Vector2d> sigma, image;
    std::vector<double> chis;
    auto flush = [&]() {
      for (std::size_t a = 1; a < chis.size(); ++a) {
        if ((chis[a - 1] < 0.0) != (chis[a] < 0.0)) {
          const double f = chis[a - 1] / (chis[a - 1] - chis[a]);
          out.cusps.push_back(sigma[a - 1] + f * (sigma[a] - sigma[a - 1]));
        }
      }
      if (sigma.size() > 1) {
        out.sigma.push_back(sigma);
        out.image.push_back(image);
      }
      sigma.clear();
      image.clear();
      chis.clear();
    };
    for (const ContourPoint& p : line.points) {
      const int ai = p.i, aj = p.j;
      const int bi = p.along_x ? p.i + 1 : p.i;
      const int bj = p.along_x ? p.j : p.j + 1;
      const std::size_t ka = node_index(ai, aj), kb = node_index(bi, bj);
      if (std::isnan(det[ka]) || std::isnan(det[kb])) {
        flush();
        continue;
      }
      const double f = det[ka] / (det[ka] - det[kb]);
      const GraphNode& na = field.nodes[ka];
      const GraphNode& nb = field.nodes[kb];
      sigma.emplace_back(p.x, p.y);
      image.emplace_back(na.u.value() + f * (nb.u.value() - na.u.value()),
                         na.v.value() + f * (nb.v.value() - na.v.value()));
      chis.push_back(chi[ka] + f * (chi[kb] - chi[ka]));
    }
    if (line.closed && !sigma.empty()) {
      sigma.push_back(sigma.front());
      image.push_back(image.front());
      chis.push_back(chis.front());
    }
    flush();
  }
  return out;
}

double line_of_curvature_bend(const MongePatch& p) { return 2.0 * p.b[1] / (p.k1 - p.k2); }

DerivativeReport derivative_identities_check(const BitangentScene& scene) {
  require_two_patches(scene);
  const Contact cm = safe_contact(scene.m, scene.sphere);
  const Contact cn = safe_contact(*scene.n, scene.sphere);
  if ((cm != Contact::A2 && cm != Contact::A3) || cn != Contact::A1)
    throw Error(ErrorKind::ContactMismatch, std::string("need A2 or A3 on M and A1 on N, found ") +
                                                to_string(cm) + to_string(cn));
  const OffDiagSample base = base_sample(scene);
  const SolutionJet<2> jet = solution_jet<2>(scene, base);

  DerivativeReport rep;
  rep.r_s = jet.r.partial(1, 0);
  rep.u_s = jet.u.partial(1, 0);
  rep.v_s = jet.v.partial(1, 0);
  rep.r_t = jet.r.partial(0, 1);
  const PrincipalData pm = principal_data(scene.m, 0.0, 0.0);
  const Eigen::Vector3d n = scene.n->normal(base.u, base.v);
  rep.r_t_closed = -pm.e2.dot(n) * (1.0 - base.r * pm.k2) / (pm.normal.dot(n) - 1.0);
  rep.pass = std::abs(rep.r_s) < 1e-6 && std::abs(rep.u_s) < 1e-6 && std::abs(rep.v_s) < 1e-6 &&
             std::abs(rep.r_t - rep.r_t_closed) < 1e-6;
  if (cm == Contact::A3) {
    const double kg = line_of_curvature_bend(scene.m.patch);
    rep.second_order = true;
    rep.r_ss = jet.r.partial(2, 0) + jet.r.partial(0, 1) * kg;
    rep.u_ss = jet.u.partial(2, 0) + jet.u.partial(0, 1) * kg;
    rep.v_ss = jet.v.partial(2, 0) + jet.v.partial(0, 1) * kg;
    rep.pass = rep.pass && std::abs(rep.r_ss) < 1e-5 && std::abs(rep.u_ss) < 1e-5;
  }
  return rep;
}

namespace {

void require_a3a1(const BitangentScene& scene) {
  require_two_patches(scene);
  const Contact cm = safe_contact(scene.m, scene.sphere);
  const Contact cn = safe_contact(*scene.n, scene.sphere);
  if (cm != Contact::A3 || cn != Contact::A1)
    throw Error(ErrorKind::ContactMismatch,
                std::string("need A3 on M and A1 on N, found ") + to_string(cm) + to_string(cn));
}

}  // namespace

TransitionReport transitional_a3a1_test(const BitangentScene& scene) {
  require_a3a1(scene);
  const OffDiagSample base = base_sample(scene);
  const PrincipalData pm = principal_data(scene.m, 0.0, 0.0);
  const Eigen::Vector3d n = scene.n->normal(base.u, base.v);
  const double r = base.r;
  TransitionReport rep;
  rep.delta = pm.e2.dot(n) * (1.0 - r * pm.k2) * pm.k1 * pm.k1 - pm.k1t * (pm.normal.dot(n) - 1.0);
  rep.transitional = std::abs(rep.delta) <= 1e-6;
  const Eigen::Vector3d plane = osculating_plane_normal(scene.m);
  const Eigen::Vector3d chord = scene.n->point(base.u, base.v) - pm.point;
  rep.plane_distance = std::abs(plane.dot(chord));
  rep.geometric_transitional = rep.plane_distance < 1e-6;
  return rep;
}

const char* to_string(LipsBeaks k) {
  switch (k) {
    case LipsBeaks::LipsSide: return "LipsSide";
    case LipsBeaks::BeaksSide: return "BeaksSide";
    case LipsBeaks::Degenerate: return "Degenerate";
  }
  return "?";
}

LipsBeaksReport lips_beaks_discriminant(const BitangentScene& scene) {
  require_a3a1(scene);
  const OffDiagSample base = base_sample(scene);
  const SolutionJet<2> jet = solution_jet<2>(scene, base);
  const Jet<3> k1 = principal_curvature_jet(scene.m.patch, base.s, base.t);
  Jet<2> k1_2;
  for (int deg = 0; deg <= 2; ++deg)
    for (int j = 0; j <= deg; ++j) k1_2.coeff(deg - j, j) = k1.coeff(deg - j, j);
  const Jet<2> R = jet.r * k1_2;

  LipsBeaksReport rep;
  rep.R_s = R.partial(1, 0);
  rep.R_t = R.partial(0, 1);
  rep.hessian << R.partial(2, 0), R.partial(1, 1), R.partial(1, 1), R.partial(0, 2);
  rep.det = rep.hessian.determinant();

  // Cross-check: second differences of R over independently solved samples.
  const double h = 1e-3;
  auto R_at = [&](double s, double t) {
    const Eigen::Vector3d seed(jet.u.evaluate(s, t), jet.v.evaluate(s, t), jet.r.evaluate(s, t));
    const OffDiagSample x = solve_second_contact(scene, s, t, seed);
    return x.r * principal_data(scene.m, s, t).k1;
  };
  const double R0 = R_at(0, 0);
  const double Rss = (R_at(h, 0) - 2 * R0 + R_at(-h, 0)) / (h * h);
  const double Rtt = (R_at(0, h) - 2 * R0 + R_at(0, -h)) / (h * h);
  const double Rst = (R_at(h, h) - R_at(h, -h) - R_at(-h, h) + R_at(-h, -h)) / (4 * h * h);
  rep.det_differenced = Rss * Rtt - Rst * Rst;

  if (std::abs(rep.R_s) > 1e-6 || std::abs(rep.R_t) > 1e-6) {
    std::ostringstream msg;
    msg << "R = r k1 is not critical at the base: (R_s, R_t) = (" << rep.R_s << ", " << rep.R_t
        << ")";
    throw Error(ErrorKind::StationarityFailure, msg.str());
  }
  if (std::abs(rep.det) < 1e-8)
    rep.kind = LipsBeaks::Degenerate;
  else
    rep.kind = rep.det > 0.0 ? LipsBeaks::LipsSide : LipsBeaks::BeaksSide;
  return rep;
}

std::vector<OffDiagSample> preimages(const BitangentScene& scene, double u, double v,
                                     double window, int seeds_per_axis) {
  std::vector<OffDiagSample> found;
  const double r0 = scene.sphere.radius;
  for (int a = 0; a < seeds_per_axis; ++a) {
    for (int b = 0; b < seeds_per_axis; ++b) {
      const double s = -window + 2.0 * window * a / (seeds_per_axis - 1);
      const double t = -window + 2.0 * window * b / (seeds_per_axis - 1);
      OffDiagSample x;
      try {
        x = solve_first_contact(scene, u, v, Eigen::Vector3d(s, t, r0));
      } catch (const Error&) {
        continue;
      }
      if (std::abs(x.s) > window || std::abs(x.t) > window) continue;
      bool dup = false;
      for (const auto& y : found) dup = dup || std::hypot(x.s - y.s, x.t - y.t) < 1e-7;
      if (!dup) found.push_back(x);
    }
  }
  return found;
}

}  // namespace presym
