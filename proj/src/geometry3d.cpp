#include "presym/geometry3d.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "presym/errors.hpp"

namespace presym {

double MongePatch::coefficient(int i, int j) const {
  switch (i + j) {
    case 2:
      if (i == 2) return 0.5 * k1;
      if (j == 2) return 0.5 * k2;
      return 0.0;
    case 3:
      return b[j];
    case 4:
      return c[j];
    case 5:
      return d[j];
    default:
      return 0.0;
  }
}

MongePatch MongePatch::flipped() const {
  MongePatch p = *this;
  p.k1 = -k1;
  p.k2 = -k2;
  // coefficient of x^i y^j picks up -(-1)^j
  for (int j = 0; j < 4; ++j) p.b[j] = (j % 2 ? 1.0 : -1.0) * b[j];
  for (int j = 0; j < 5; ++j) p.c[j] = (j % 2 ? 1.0 : -1.0) * c[j];
  for (int j = 0; j < 6; ++j) p.d[j] = (j % 2 ? 1.0 : -1.0) * d[j];
  return p;
}

MongePatch MongePatch::swapped() const {
  MongePatch p = *this;
  p.k1 = k2;
  p.k2 = k1;
  for (int j = 0; j < 4; ++j) p.b[j] = b[3 - j];
  for (int j = 0; j < 5; ++j) p.c[j] = c[4 - j];
  for (int j = 0; j < 6; ++j) p.d[j] = d[5 - j];
  return p;
}

RigidMotion RigidMotion::from_axis_angle(const Eigen::Vector3d& axis, double angle,
                                         const Eigen::Vector3d& translation) {
  RigidMotion m;
  if (axis.norm() > 0.0) m.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  m.translation = translation;
  return m;
}

RigidMotion RigidMotion::then(const RigidMotion& outer) const {
  RigidMotion m;
  m.rotation = outer.rotation * rotation;
  m.translation = outer.rotation * translation + outer.translation;
  return m;
}

bool RigidMotion::valid(double tol) const {
  return (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).norm() < tol &&
         std::abs(rotation.determinant() - 1.0) < tol;
}

namespace {

struct FundamentalForms {
  double E, F, G, L, M, N;
};

// Eigenvector of II - k I in parameter space, unnormalized.
Eigen::Vector2d principal_vector(const FundamentalForms& f, double k) {
  const Eigen::Vector2d a(-(f.M - k * f.F), f.L - k * f.E);
  const Eigen::Vector2d b(f.N - k * f.G, -(f.M - k * f.F));
  return a.norm() >= b.norm() ? a : b;
}

struct CurvatureJets {
  Jet<5> H, disc;
  FundamentalForms base;
};

CurvatureJets curvature_jets(const MongePatch& p, double x, double y) {
  using J = Jet<5>;
  const J X = J::variable(0, x);
  const J Y = J::variable(1, y);
  const J f = p.height(X, Y);
  const J fx = f.derivative(0);
  const J fy = f.derivative(1);
  const J fxx = fx.derivative(0);
  const J fxy = fx.derivative(1);
  const J fyy = fy.derivative(1);
  const J w = sqrt(J(1.0) + fx * fx + fy * fy);
  const J E = J(1.0) + fx * fx, F = fx * fy, G = J(1.0) + fy * fy;
  const J L = fxx / w, M = fxy / w, N = fyy / w;
  const J det = E * G - F * F;
  CurvatureJets out;
  out.H = (G * L - 2.0 * F * M + E * N) / (2.0 * det);
  const J K = (L * N - M * M) / det;
  out.disc = out.H * out.H - K;
  out.base = {E.value(), F.value(), G.value(), L.value(), M.value(), N.value()};
  return out;
}

// Sign (+1 / -1) of the square root giving the principal curvature whose
// direction is closest to the parameter x axis.
double first_branch_sign(const CurvatureJets& cj) {
  const double H = cj.H.value();
  const double root = std::sqrt(std::max(0.0, cj.disc.value()));
  auto closeness = [&](double k) {
    const Eigen::Vector2d v = principal_vector(cj.base, k);
    return std::abs(v.x()) / v.norm();
  };
  return closeness(H + root) >= closeness(H - root) ? 1.0 : -1.0;
}

}  // namespace

Jet<3> principal_curvature_jet(const MongePatch& patch, double x, double y) {
  const CurvatureJets cj = curvature_jets(patch, x, y);
  if (std::sqrt(std::max(0.0, cj.disc.value())) * 2.0 < 1e-9)
    throw Error(ErrorKind::UmbilicPoint, "principal curvatures coincide");
  const Jet<5> k = cj.H + first_branch_sign(cj) * sqrt(cj.disc);
  Jet<3> out;
  for (int deg = 0; deg <= 3; ++deg)
    for (int j = 0; j <= deg; ++j) out.coeff(deg - j, j) = k.coeff(deg - j, j);
  return out;
}

PrincipalData principal_data(const EmbeddedPatch& ep, double x, double y) {
  const MongePatch& p = ep.patch;
  const CurvatureJets cj = curvature_jets(p, x, y);
  const double root = std::sqrt(std::max(0.0, cj.disc.value()));
  if (2.0 * root < 1e-9) throw Error(ErrorKind::UmbilicPoint, "principal curvatures coincide");
  const double sign = first_branch_sign(cj);
  const Jet<5> k1 = cj.H + sign * sqrt(cj.disc);
  const FundamentalForms& f = cj.base;

  PrincipalData out;
  out.k1 = k1.value();
  out.k2 = cj.H.value() - sign * root;

  Eigen::Matrix2d I, II;
  I << f.E, f.F, f.F, f.G;
  II << f.L, f.M, f.M, f.N;
  out.shape_operator = I.inverse() * II;

  Eigen::Vector2d v1 = principal_vector(f, out.k1);
  v1 /= std::sqrt(v1.dot(I * v1));
  if (v1.x() < 0.0 || (v1.x() == 0.0 && v1.y() < 0.0)) v1 = -v1;

  const double fx = p.height_x(x, y);
  const double fy = p.height_y(x, y);
  const Eigen::Vector3d Xx(1.0, 0.0, fx), Xy(0.0, 1.0, fy);
  const Eigen::Vector3d nl = p.normal(x, y);
  const Eigen::Vector3d e1l = Xx * v1.x() + Xy * v1.y();
  const Eigen::Vector3d e2l = nl.cross(e1l);
  const Eigen::Vector2d v2 = I.inverse() * Eigen::Vector2d(Xx.dot(e2l), Xy.dot(e2l));

  out.dir1 = v1;
  out.dir2 = v2;
  out.point = ep.point(x, y);
  out.normal = ep.motion.rotate(Vec3<double>(nl));
  out.e1 = ep.motion.rotate(Vec3<double>(e1l));
  out.e2 = ep.motion.rotate(Vec3<double>(e2l));
  const Eigen::Vector2d grad(k1.coeff(1, 0), k1.coeff(0, 1));
  out.k1s = grad.dot(v1);
  out.k1t = grad.dot(v2);
  return out;
}

const char* to_string(Contact c) {
  switch (c) {
    case Contact::A1: return "A1";
    case Contact::A2: return "A2";
    case Contact::A3: return "A3";
    case Contact::A4: return "A4";
    case Contact::A5: return "A5";
  }
  return "?";
}

std::optional<Contact> contact_from_string(const std::string& s) {
  for (Contact c : {Contact::A1, Contact::A2, Contact::A3, Contact::A4, Contact::A5})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

double a3_numerator(const MongePatch& p) {
  const double k1 = p.k1, k2 = p.k2, c0 = p.c[0], b1 = p.b[1];
  return 0.25 * (k1 * k1 * k1 * k2 - k1 * k1 * k1 * k1 - 8.0 * c0 * k2 + 8.0 * c0 * k1 +
                 4.0 * b1 * b1);
}

double a3_denominator(const MongePatch& p) {
  return p.c[1] * p.k2 - p.c[1] * p.k1 - 2.0 * p.b[1] * p.b[2];
}

double a4_numerator(const MongePatch& p) {
  const double dk = p.k1 - p.k2;
  return p.d[0] * dk * dk + p.b[1] * p.c[1] * dk + p.b[1] * p.b[1] * p.b[2];
}

ContactReport contact_type(const EmbeddedPatch& ep, const Sphere& sphere, double tolerance) {
  const double r = sphere.radius;
  const Eigen::Vector3d cl = ep.motion.inverse_apply(sphere.center);
  const double scale = std::max(1.0, r);
  if (cl.head<2>().norm() > 1e-9 * scale || std::abs(std::abs(cl.z()) - r) > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "sphere center is off the patch normal line by " << cl.head<2>().norm()
        << ", radius defect " << std::abs(cl.z()) - r;
    throw Error(ErrorKind::NotTangent, msg.str());
  }
  MongePatch p = cl.z() < 0.0 ? ep.patch.flipped() : ep.patch;

  ContactReport rep;
  const double ax = 1.0 - r * p.k1;
  const double ay = 1.0 - r * p.k2;
  rep.kernel_along_x = std::abs(ax) <= std::abs(ay);
  if (!rep.kernel_along_x) p = p.swapped();
  const double hyy = 2.0 * (1.0 - r * p.k2);
  if (std::abs(hyy) <= tolerance)
    throw Error(ErrorKind::Degenerate, "sphere osculates in every direction (umbilic contact)");

  // Contact function h = |p - center|^2 - r^2 in the local frame; eliminate y
  // along the curve h_y = 0 and expand what remains in x.
  using J = Jet<7>;
  const J x = J::variable(0, 0.0);
  const J y = J::variable(1, 0.0);
  const J f = p.height(x, y);
  const J h = x * x + y * y + f * f - 2.0 * r * f;
  const J hy = h.derivative(1);
  const Series<7> X = Series<7>::variable(0.0);
  Series<7> phi(0.0);
  for (int it = 0; it < 8; ++it) phi = phi - compose(hy, X, phi) * (1.0 / hyy);
  const Series<7> g = compose(h, X, phi);
  for (int k = 2; k <= 7; ++k) rep.restricted[k] = g[k];

  int first = -1;
  for (int k = 2; k <= 6; ++k) {
    if (std::abs(g[k]) > tolerance) {
      first = k;
      break;
    }
  }
  if (first < 0) throw Error(ErrorKind::Degenerate, "contact beyond A5");
  rep.type = static_cast<Contact>(first - 2);
  rep.margin = std::abs(g[first]) - tolerance;

  if (std::abs(1.0 - r * p.k1) > tolerance)
    rep.formula_type = Contact::A1;
  else if (std::abs(6.0 * p.b[0]) > tolerance)
    rep.formula_type = Contact::A2;
  else if (std::abs(a3_numerator(p)) > tolerance)
    rep.formula_type = Contact::A3;
  else if (std::abs(a4_numerator(p)) > tolerance)
    rep.formula_type = Contact::A4;
  else
    rep.formula_type = Contact::A5;
  return rep;
}

namespace {

[[noreturn]] void unrealizable(const std::string& what) {
  throw Error(ErrorKind::UnrealizableSpec, what);
}

MongePatch impose(MongePatch p, Contact contact, double r, const char* label) {
  const std::string name(label);
  if (contact == Contact::A1) {
    if (std::abs(1.0 - r * p.k1) < 1e-6 || std::abs(1.0 - r * p.k2) < 1e-6)
      unrealizable(name + ": A1 requested but the sphere osculates");
    return p;
  }
  p.k1 = 1.0 / r;
  const double dk = p.k1 - p.k2;
  if (std::abs(dk) < 1e-6) unrealizable(name + ": k1 = k2 makes the contact point umbilic");
  if (contact >= Contact::A3) p.b[0] = 0.0;
  if (contact >= Contact::A4)
    p.c[0] = (p.k1 * p.k1 * p.k1 * dk - 4.0 * p.b[1] * p.b[1]) / (8.0 * dk);
  if (contact >= Contact::A5) p.d[0] = -(p.b[1] * p.c[1] * dk + p.b[1] * p.b[1] * p.b[2]) / (dk * dk);
  return p;
}

void check_contact(const EmbeddedPatch& ep, const Sphere& s, Contact want, const char* label) {
  Contact got;
  try {
    got = contact_type(ep, s).type;
  } catch (const Error& e) {
    unrealizable(std::string(label) + ": " + e.what());
  }
  if (got != want)
    unrealizable(std::string(label) + ": requested " + to_string(want) + " but coefficients give " +
                 to_string(got));
}

Eigen::Matrix3d frame_about(const Eigen::Vector3d& n0, double twist) {
  const Eigen::Vector3d ref =
      std::abs(n0.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d a = (ref - ref.dot(n0) * n0).normalized();
  const Eigen::Vector3d b = n0.cross(a);
  const Eigen::Vector3d f1 = std::cos(twist) * a + std::sin(twist) * b;
  Eigen::Matrix3d R;
  R.col(0) = f1;
  R.col(1) = n0.cross(f1);
  R.col(2) = n0;
  return R;
}

}  // namespace

BitangentScene BitangentScene::transformed(const RigidMotion& motion) const {
  BitangentScene s = *this;
  s.m.motion = m.motion.then(motion);
  if (n) s.n->motion = n->motion.then(motion);
  s.sphere.center = motion.rotation * sphere.center + motion.translation;
  return s;
}

BitangentScene construct_scene(const SceneSpec& spec) {
  const double r = spec.radius;
  if (!(r > 0.0) || !std::isfinite(r)) unrealizable("radius must be positive");

  BitangentScene scene;
  scene.sphere.radius = r;
  scene.contact_m = spec.m.contact;
  scene.m.patch = impose(spec.m.patch, spec.m.contact, r, "M");
  scene.m.motion = RigidMotion{};
  const Eigen::Vector3d center(0.0, 0.0, r);
  scene.sphere.center = center;

  if (spec.n) {
    scene.contact_n = spec.n->contact;
    EmbeddedPatch n;
    if (spec.n->motion) {
      n.motion = *spec.n->motion;
      if (!n.motion.valid()) unrealizable("N: placement is not a rigid motion");
      MongePatch p = spec.n->patch;
      const Eigen::Vector3d cl = n.motion.inverse_apply(center);
      if (cl.z() < 0.0) {
        // Reorient so the normal faces the center.
        p = p.flipped();
        n.motion.rotation = n.motion.rotation * Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
      }
      n.patch = impose(p, spec.n->contact, r, "N");
    } else {
      Eigen::Vector3d q0;
      if (spec.transitional) {
        if (spec.m.contact != Contact::A3)
          unrealizable("transitional placement needs an A3 contact on M");
        const MongePatch& pm = scene.m.patch;
        const double kg = 2.0 * pm.b[1] / (pm.k1 - pm.k2);
        const Eigen::Vector3d dir = Eigen::Vector3d(0.0, kg, pm.k1).normalized();
        const double rho = dir.z() * r;
        const double psi = spec.chord_angle;
        if (std::abs(std::sin(0.5 * psi)) < 1e-3) unrealizable("q0 coincides with p0");
        q0 = rho * (std::sin(psi) * Eigen::Vector3d::UnitX() + (1.0 - std::cos(psi)) * dir);
      } else {
        const double th = spec.chord_angle;
        if (!(th > 1e-3 && th <= M_PI)) unrealizable("chord angle must lie in (0, pi]");
        const Eigen::Vector3d w(std::sin(th) * std::cos(spec.azimuth),
                                std::sin(th) * std::sin(spec.azimuth), -std::cos(th));
        q0 = center + r * w;
      }
      const Eigen::Vector3d n0 = (center - q0).normalized();
      n.motion.rotation = frame_about(n0, spec.twist);
      n.motion.translation = q0;
      n.patch = impose(spec.n->patch, spec.n->contact, r, "N");
    }
    scene.n = n;
  }

  if (spec.m.motion) {
    if (!spec.m.motion->valid()) unrealizable("M: placement is not a rigid motion");
    scene = scene.transformed(*spec.m.motion);
  }
  if (spec.global) {
    if (!spec.global->valid()) unrealizable("global placement is not a rigid motion");
    scene = scene.transformed(*spec.global);
  }

  check_contact(scene.m, scene.sphere, scene.contact_m, "M");
  if (scene.n) check_contact(*scene.n, scene.sphere, scene.contact_n, "N");

  if (scene.n && spec.n_shift != 0.0) {
    const Eigen::Vector3d n0 = scene.n->normal(0.0, 0.0);
    scene.n->motion.translation += spec.n_shift * n0;
    scene.exact_base = false;
  }
  return scene;
}

Eigen::Vector3d osculating_plane_normal(const EmbeddedPatch& patch, double step) {
  const PrincipalData base = principal_data(patch, 0.0, 0.0);
  const Eigen::Vector2d dv = step * base.dir1;
  const Eigen::Vector3d ep = principal_data(patch, dv.x(), dv.y()).e1;
  const Eigen::Vector3d em = principal_data(patch, -dv.x(), -dv.y()).e1;
  const Eigen::Vector3d kvec = (ep - em) / (2.0 * step);
  const Eigen::Vector3d nrm = base.e1.cross(kvec);
  if (nrm.norm() < 1e-12) return Eigen::Vector3d::Zero();
  return nrm.normalized();
}

}  // namespace presym
