#pragma once

#include <cmath>
#include <iosfwd>
#include <stdexcept>

namespace qrkhs {

struct DegenerateModulus : std::domain_error {
  DegenerateModulus() : std::domain_error("polar form of the zero quaternion is undefined") {}
};

/// Element of the skew field H, q = w + x*i + y*j + z*k.
/// Multiplication follows i*j = k, j*k = i, k*i = j, i^2 = j^2 = k^2 = -1.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_) : w(w_) {}
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }

  // Hamilton product.
  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr Quaternion operator*(Quaternion a, double s) { return {a.w * s, a.x * s, a.y * s, a.z * s}; }
  friend constexpr Quaternion operator*(double s, Quaternion a) { return a * s; }
  friend constexpr Quaternion operator/(Quaternion a, double s) { return {a.w / s, a.x / s, a.y / s, a.z / s}; }

  friend constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

/// |q|^2 = q * conj(q), always the plain sum of squares.
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }

inline double abs(const Quaternion& q) { return std::sqrt(norm2(q)); }

inline bool is_real(const Quaternion& q, double tol = 0.0) {
  return std::abs(q.x) <= tol && std::abs(q.y) <= tol && std::abs(q.z) <= tol;
}

inline Quaternion inverse(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 == 0.0) throw DegenerateModulus();
  return conj(q) / n2;
}

inline Quaternion operator/(const Quaternion& a, const Quaternion& b) { return a * inverse(b); }

/// q^n by repeated squaring, q^0 = 1.
inline Quaternion pow(Quaternion q, unsigned n) {
  Quaternion r{1.0};
  while (n) {
    if (n & 1u) r = r * q;
    q = q * q;
    n >>= 1u;
  }
  return r;
}

/// e^q = e^w (cos|v| + (v/|v|) sin|v|), v the imaginary part.
inline Quaternion exp(const Quaternion& q) {
  const double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  const double ew = std::exp(q.w);
  if (vn == 0.0) return {ew};
  const double s = ew * std::sin(vn) / vn;
  return {ew * std::cos(vn), s * q.x, s * q.y, s * q.z};
}

/// Polar representation q = r (cos theta2 + J sin theta2) = r e^{J theta2},
/// with J = J(theta1, phi) = i sin(theta1)cos(phi) + j sin(theta1)sin(phi) + k cos(theta1)
/// a unit imaginary quaternion on the upper hemisphere, theta1 in [0, pi/2], phi in [0, 2pi).
struct PolarForm {
  double r = 0.0;
  double theta2 = 0.0;  // phase in [0, 2pi)
  double theta1 = 0.0;  // axis colatitude in [0, pi/2]
  double phi = 0.0;     // axis azimuth in [0, 2pi)
  bool degenerate_axis = false;  // true when q was purely real and J is conventional
};

inline Quaternion axis(double theta1, double phi) {
  const double s = std::sin(theta1);
  return {0.0, s * std::cos(phi), s * std::sin(phi), std::cos(theta1)};
}

inline Quaternion axis(const PolarForm& p) { return axis(p.theta1, p.phi); }

inline Quaternion from_polar(const PolarForm& p) {
  const Quaternion J = axis(p.theta1, p.phi);
  return p.r * (Quaternion{std::cos(p.theta2)} + J * std::sin(p.theta2));
}

inline PolarForm to_polar(const Quaternion& q) {
  PolarForm p;
  p.r = abs(q);
  if (p.r == 0.0) throw DegenerateModulus();
  double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  p.theta2 = std::atan2(vn, q.w);
  if (vn == 0.0) {
    // Purely real: no canonical axis. Convention J = k, flagged.
    p.theta1 = 0.0;
    p.phi = 0.0;
    p.degenerate_axis = true;
    if (q.w < 0.0) p.theta2 = M_PI;
    return p;
  }
  // Hemisphere convention: flip the axis when its k-component is negative,
  // absorbing the sign into theta2 (e^{-J t} = e^{J (2pi - t)} reflected).
  double ax = q.x / vn, ay = q.y / vn, az = q.z / vn;
  if (az < 0.0 || (az == 0.0 && (ax < 0.0 || (ax == 0.0 && ay < 0.0)))) {
    ax = -ax; ay = -ay; az = -az;
    p.theta2 = 2.0 * M_PI - p.theta2;
  }
  p.theta1 = std::acos(std::clamp(az, -1.0, 1.0));
  p.phi = std::atan2(ay, ax);
  if (p.phi < 0.0) p.phi += 2.0 * M_PI;
  return p;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qrkhs
