#ifndef PRESYM_GEOMETRY3D_HPP
#define PRESYM_GEOMETRY3D_HPP

#include <array>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "presym/jet.hpp"

namespace presym {

template <typename S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

/// z = f(x, y) = (k1 x^2 + k2 y^2) / 2 + sum b_i x^(3-i) y^i
///             + sum c_i x^(4-i) y^i + sum d_i x^(5-i) y^i.
struct MongePatch {
  double k1 = 1.0;
  double k2 = 2.0;
  std::array<double, 4> b{};
  std::array<double, 5> c{};
  std::array<double, 6> d{};
  double box = 0.4;  // parameters are valid on [-box, box]^2

  /// Coefficient of x^i y^j.
  double coefficient(int i, int j) const;

  template <typename S>
  S height(const S& x, const S& y) const {
    return eval_poly(x, y, 0, 0);
  }
  template <typename S>
  S height_x(const S& x, const S& y) const {
    return eval_poly(x, y, 1, 0);
  }
  template <typename S>
  S height_y(const S& x, const S& y) const {
    return eval_poly(x, y, 0, 1);
  }

  template <typename S>
  Vec3<S> point(const S& x, const S& y) const {
    return Vec3<S>(x, y, height(x, y));
  }

  /// Unit normal on the side z > 0 at the origin.
  template <typename S>
  Vec3<S> normal(const S& x, const S& y) const {
    const S fx = height_x(x, y);
    const S fy = height_y(x, y);
    using std::sqrt;
    const S w = sqrt(S(1.0) + fx * fx + fy * fy);
    return Vec3<S>(-fx / w, -fy / w, S(1.0) / w);
  }

  /// The same surface with the normal reversed: parameters (x, -y), height -f.
  MongePatch flipped() const;
  /// The same surface with the roles of x and y exchanged.
  MongePatch swapped() const;

  bool in_box(double x, double y) const { return std::abs(x) <= box && std::abs(y) <= box; }

 private:
  // Partial derivative d^(dx+dy) f evaluated with Horner's rule in x.
  template <typename S>
  S eval_poly(const S& x, const S& y, int dx, int dy) const {
    S result(0.0);
    for (int i = 5; i >= 0; --i) {
      S inner(0.0);
      for (int j = 5 - i; j >= 0; --j) {
        const int si = i + dx;
        const int sj = j + dy;
        double coef = (si + sj <= 5) ? coefficient(si, sj) : 0.0;
        for (int k = 0; k < dx; ++k) coef *= si - k;
        for (int k = 0; k < dy; ++k) coef *= sj - k;
        inner = inner * y + S(coef);
      }
      result = result * x + inner;
    }
    return result;
  }
};

struct RigidMotion {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidMotion from_axis_angle(const Eigen::Vector3d& axis, double angle,
                                     const Eigen::Vector3d& translation);

  template <typename S>
  Vec3<S> apply(const Vec3<S>& p) const {
    return rotate(p) + translation.cast<S>();
  }
  template <typename S>
  Vec3<S> rotate(const Vec3<S>& v) const {
    Vec3<S> out;
    for (int r = 0; r < 3; ++r)
      out[r] = rotation(r, 0) * v[0] + rotation(r, 1) * v[1] + rotation(r, 2) * v[2];
    return out;
  }
  Eigen::Vector3d inverse_apply(const Eigen::Vector3d& p) const {
    return rotation.transpose() * (p - translation);
  }

  RigidMotion then(const RigidMotion& outer) const;  // outer after this
  bool valid(double tol = 1e-12) const;
};

struct EmbeddedPatch {
  MongePatch patch;
  RigidMotion motion;

  template <typename S>
  Vec3<S> point(const S& x, const S& y) const {
    return motion.apply(patch.point(x, y));
  }
  template <typename S>
  Vec3<S> normal(const S& x, const S& y) const {
    return motion.rotate(patch.normal(x, y));
  }
};

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
};

struct PrincipalData {
  Eigen::Vector3d point;
  Eigen::Vector3d normal;
  Eigen::Vector3d e1, e2;
  Eigen::Vector2d dir1, dir2;  // parameter-space images of e1, e2
  double k1 = 0.0, k2 = 0.0;
  double k1s = 0.0;  // derivative of k1 along e1 (unit speed)
  double k1t = 0.0;  // derivative of k1 along e2
  Eigen::Matrix2d shape_operator;  // in parameter coordinates
};

/// Principal frame at (x, y). The first principal field is the one whose
/// direction is closest to the parameter x axis (e1 at the origin).
/// Throws Error(UmbilicPoint) if |k1 - k2| < 1e-9.
PrincipalData principal_data(const EmbeddedPatch& patch, double x, double y);

/// Taylor expansion (in parameter offsets) of the first principal curvature
/// about (x, y), exact up to total degree 3.
Jet<3> principal_curvature_jet(const MongePatch& patch, double x, double y);

enum class Contact { A1, A2, A3, A4, A5 };
const char* to_string(Contact c);
std::optional<Contact> contact_from_string(const std::string& s);

struct ContactReport {
  Contact type = Contact::A1;
  /// Coefficients g_k of the contact function restricted to its critical
  /// curve, g(x) = sum g_k x^k (k = 2..7). g_2 = 0 iff the sphere osculates.
  std::array<double, 8> restricted{};
  /// Classification from the Monge coefficient conditions, for cross-checking.
  Contact formula_type = Contact::A1;
  /// |first coefficient that decided the class| minus the tolerance.
  double margin = 0.0;
  bool kernel_along_x = true;
};

/// Contact between a sphere and a patch at the patch origin.
/// Throws NotTangent if the sphere is not tangent there, Degenerate beyond A5.
ContactReport contact_type(const EmbeddedPatch& patch, const Sphere& sphere,
                           double tolerance = 1e-8);

/// Numerator of the linear coefficient of the on-diagonal branch; zero iff A4
/// (for b0 = 0, k1 r = 1).
double a3_numerator(const MongePatch& p);
/// c1 k2 - c1 k1 - 2 b1 b2.
double a3_denominator(const MongePatch& p);
/// Numerator of t02 without the factor 3; zero iff A5.
double a4_numerator(const MongePatch& p);

struct PatchSpec {
  MongePatch patch;
  Contact contact = Contact::A1;
  std::optional<RigidMotion> motion;  // explicit placement
};

struct SceneSpec {
  double radius = 1.0;
  PatchSpec m;
  std::optional<PatchSpec> n;  // absent for single-patch (on-diagonal) scenes
  double chord_angle = 2.0;    // angle p0-center-q0 in (0, pi)
  double azimuth = 0.5;
  double twist = 0.3;          // rotation of N about its base normal
  bool transitional = false;   // put q0 on the osculating plane of the k1 line
  double n_shift = 0.0;        // translate N along its base normal
  std::optional<RigidMotion> global;
};

struct BitangentScene {
  EmbeddedPatch m;
  std::optional<EmbeddedPatch> n;
  Sphere sphere;
  Contact contact_m = Contact::A1;
  Contact contact_n = Contact::A1;
  bool exact_base = true;  // false once N has been shifted off the sphere

  bool two_patch() const { return n.has_value(); }
  double radius_limit() const { return 10.0 * sphere.radius; }
  BitangentScene transformed(const RigidMotion& motion) const;
};

/// Realizes a scene with the requested contact types. Coefficients that the
/// contact class determines (k1 = 1/r, b0 = 0, c0, d0) are overwritten.
/// Throws UnrealizableSpec.
BitangentScene construct_scene(const SceneSpec& spec);

/// Normal of the osculating plane of the first line of curvature through the
/// patch origin, computed by differencing the principal direction field.
Eigen::Vector3d osculating_plane_normal(const EmbeddedPatch& patch, double step = 1e-4);

}  // namespace presym

#endif  // PRESYM_GEOMETRY3D_HPP
