#pragma once

#include <cmath>
#include <numbers>

namespace ss2d {

inline constexpr double kDeg2Rad = std::numbers::pi / 180.0;
inline constexpr double kRad2Deg = 180.0 / std::numbers::pi;

/// Wraps an angle in degrees into [-180, 180).
inline double normalize_angle(double deg) {
  double a = std::fmod(deg + 180.0, 360.0);
  if (a < 0.0) a += 360.0;
  return a - 180.0;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  static Vec2 polar(double length, double dir_deg) {
    return {length * std::cos(dir_deg * kDeg2Rad), length * std::sin(dir_deg * kDeg2Rad)};
  }

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  constexpr bool operator==(const Vec2&) const = default;

  double length() const { return std::hypot(x, y); }
  constexpr double length2() const { return x * x + y * y; }
  double dist(const Vec2& o) const { return (*this - o).length(); }
  /// Direction in degrees, [-180, 180). Zero vector yields 0.
  double dir() const { return (x == 0.0 && y == 0.0) ? 0.0 : normalize_angle(std::atan2(y, x) * kRad2Deg); }
  Vec2 rotated(double deg) const {
    const double c = std::cos(deg * kDeg2Rad);
    const double s = std::sin(deg * kDeg2Rad);
    return {x * c - y * s, x * s + y * c};
  }
  Vec2 normalized() const {
    const double l = length();
    return l > 0.0 ? *this / l : Vec2{};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Distance from `p` to the segment [a, b]; degenerates to point distance.
inline double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.length2();
  if (len2 <= 0.0) return p.dist(a);
  double t = ((p - a).x * ab.x + (p - a).y * ab.y) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return p.dist(a + ab * t);
}

/// Absolute angular difference in degrees, [0, 180].
inline double angle_diff(double a_deg, double b_deg) {
  return std::fabs(normalize_angle(a_deg - b_deg));
}

/// ceil() that ignores floating-point dust just above an integer.
inline int ceil_tol(double v) { return static_cast<int>(std::ceil(v - 1e-9)); }

}  // namespace ss2d
