#ifndef PRESYM_JET_HPP
#define PRESYM_JET_HPP

// Truncated Taylor arithmetic in one and two variables.
//
// Jet<D> holds the Taylor coefficients of a smooth function of (x, y) about a
// base point up to total degree D; Series<D> does the same in one variable.
// All surface and solver code is templated on the scalar type so the same
// formulas evaluate plain doubles, first derivatives (Jet<1>) or full local
// expansions (Jet<4>, Jet<5>).

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <ostream>

#include <Eigen/Core>

namespace presym {

template <int D>
class Jet {
 public:
  static constexpr int kDegree = D;
  static constexpr int kSize = (D + 1) * (D + 2) / 2;

  /// Flat index of the coefficient of x^i y^j (i + j <= D).
  static constexpr int index(int i, int j) {
    const int k = i + j;
    return k * (k + 1) / 2 + j;
  }

  Jet() { c_.fill(0.0); }
  Jet(double value) {  // NOLINT: implicit by design of a scalar type
    c_.fill(0.0);
    c_[0] = value;
  }

  static Jet variable(int which, double base) {
    Jet j(base);
    if (D >= 1) j.c_[which == 0 ? index(1, 0) : index(0, 1)] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double& coeff(int i, int j) { return c_[index(i, j)]; }
  double coeff(int i, int j) const { return c_[index(i, j)]; }
  double& operator[](int k) { return c_[k]; }
  double operator[](int k) const { return c_[k]; }

  /// Partial derivative d^(i+j) / dx^i dy^j at the base point.
  double partial(int i, int j) const {
    return coeff(i, j) * factorial(i) * factorial(j);
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(0.0);
    for (int k1 = 0; k1 <= D; ++k1) {
      for (int j1 = 0; j1 <= k1; ++j1) {
        const double av = a.c_[index(k1 - j1, j1)];
        if (av == 0.0) continue;
        for (int k2 = 0; k1 + k2 <= D; ++k2) {
          for (int j2 = 0; j2 <= k2; ++j2) {
            r.c_[index(k1 - j1 + k2 - j2, j1 + j2)] += av * b.c_[index(k2 - j2, j2)];
          }
        }
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  /// f(base + delta) from the Taylor coefficients taylor[k] = f^(k)(base)/k!.
  template <typename Coeffs>
  Jet compose(const Coeffs& taylor) const {
    Jet delta = *this;
    delta.c_[0] = 0.0;
    Jet out(taylor[D]);
    for (int k = D - 1; k >= 0; --k) out = out * delta + Jet(taylor[k]);
    return out;
  }

  friend Jet reciprocal(const Jet& a) {
    const double a0 = a.c_[0];
    std::array<double, D + 1> t{};
    double p = 1.0 / a0;
    for (int k = 0; k <= D; ++k) {
      t[k] = p;
      p *= -1.0 / a0;
    }
    return a.compose(t);
  }

  friend Jet sqrt(const Jet& a) {
    const double a0 = a.c_[0];
    std::array<double, D + 1> t{};
    // binomial(1/2, k) a0^(1/2 - k)
    double binom = 1.0;
    for (int k = 0; k <= D; ++k) {
      t[k] = binom * std::pow(a0, 0.5 - k);
      binom *= (0.5 - k) / (k + 1);
    }
    return a.compose(t);
  }

  friend Jet abs(const Jet& a) { return a.c_[0] < 0 ? -a : a; }

  /// d/dx (which = 0) or d/dy (which = 1); the top degree becomes zero.
  Jet derivative(int which) const {
    Jet r(0.0);
    for (int k = 1; k <= D; ++k) {
      for (int j = 0; j <= k; ++j) {
        const int i = k - j;
        if (which == 0 && i > 0) r.coeff(i - 1, j) += i * coeff(i, j);
        if (which == 1 && j > 0) r.coeff(i, j - 1) += j * coeff(i, j);
      }
    }
    return r;
  }

  /// Truncated polynomial value at offset (dx, dy) from the base point.
  double evaluate(double dx, double dy) const {
    double sum = 0.0;
    for (int k = D; k >= 0; --k) {
      for (int j = 0; j <= k; ++j) sum += coeff(k - j, j) * std::pow(dx, k - j) * std::pow(dy, j);
    }
    return sum;
  }

  double max_abs_degree(int k) const {
    double m = 0.0;
    for (int j = 0; j <= k; ++j) m = std::max(m, std::abs(coeff(k - j, j)));
    return m;
  }

  friend bool operator<(const Jet& a, const Jet& b) { return a.c_[0] < b.c_[0]; }
  friend bool operator>(const Jet& a, const Jet& b) { return a.c_[0] > b.c_[0]; }

  friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
    os << "[";
    for (int k = 0; k < kSize; ++k) os << (k ? " " : "") << j.c_[k];
    return os << "]";
  }

 private:
  static constexpr double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }

  std::array<double, kSize> c_;
};

/// Univariate truncated power series, coefficient k of t^k.
template <int D>
class Series {
 public:
  Series() { c_.fill(0.0); }
  Series(double v) {  // NOLINT
    c_.fill(0.0);
    c_[0] = v;
  }
  static Series variable(double base = 0.0) {
    Series s(base);
    if (D >= 1) s.c_[1] = 1.0;
    return s;
  }

  double& operator[](int k) { return c_[k]; }
  double operator[](int k) const { return c_[k]; }

  friend Series operator+(Series a, const Series& b) {
    for (int k = 0; k <= D; ++k) a.c_[k] += b.c_[k];
    return a;
  }
  friend Series operator-(Series a, const Series& b) {
    for (int k = 0; k <= D; ++k) a.c_[k] -= b.c_[k];
    return a;
  }
  friend Series operator-(Series a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Series operator*(Series a, double s) {
    for (auto& v : a.c_) v *= s;
    return a;
  }
  friend Series operator*(double s, Series a) { return a * s; }
  friend Series operator*(const Series& a, const Series& b) {
    Series r(0.0);
    for (int i = 0; i <= D; ++i) {
      if (a.c_[i] == 0.0) continue;
      for (int j = 0; i + j <= D; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

 private:
  std::array<double, D + 1> c_;
};

/// Evaluate a bivariate jet (as a polynomial in the offsets from its base
/// point) at arguments of any ring type: composition of truncated series.
template <int D, typename S>
S compose(const Jet<D>& p, const S& dx, const S& dy) {
  // Horner in x over polynomials in y.
  S result(0.0);
  for (int i = D; i >= 0; --i) {
    S inner(0.0);
    for (int j = D - i; j >= 0; --j) inner = inner * dy + S(p.coeff(i, j));
    result = result * dx + inner;
  }
  return result;
}

inline double scalar_value(double v) { return v; }
template <int D>
double scalar_value(const Jet<D>& j) { return j.value(); }

}  // namespace presym

namespace Eigen {

template <int D>
struct NumTraits<presym::Jet<D>> : NumTraits<double> {
  using Real = presym::Jet<D>;
  using NonInteger = presym::Jet<D>;
  using Nested = presym::Jet<D>;
  using Literal = presym::Jet<D>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
};

}  // namespace Eigen

#endif  // PRESYM_JET_HPP
