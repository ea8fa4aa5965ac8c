#pragma once

#include <cmath>

namespace nct {

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Unit vector of flight. Construction checks |Ω| = 1 to 1e-12; use
/// `Direction::normalized` to build one from an arbitrary nonzero vector.
class Direction {
 public:
  static constexpr double kNormTolerance = 1e-12;

  Direction() = default;
  Direction(double x, double y, double z);
  explicit Direction(const Vec3& v) : Direction(v.x, v.y, v.z) {}

  static Direction normalized(const Vec3& v);

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  double operator[](int axis) const { return v_[axis]; }
  const Vec3& vec() const { return v_; }

  Direction operator-() const {
    Direction d;
    d.v_ = -v_;
    return d;
  }
  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

inline double dot(const Direction& a, const Direction& b) { return dot(a.vec(), b.vec()); }
inline double dot(const Direction& a, const Vec3& b) { return dot(a.vec(), b); }

}  // namespace nct
