#pragma once

#include <cmath>

namespace loggas {

/// A point of the plane, identified with x + iy where complex products are needed.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  Point2& operator+=(Point2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
  Point2& operator-=(Point2 b) {
    x -= b.x;
    y -= b.y;
    return *this;
  }
  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double norm2(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
/// Complex conjugate, written (x,y)^dagger = (x,-y).
constexpr Point2 conj(Point2 p) { return {p.x, -p.y}; }
/// Complex product.
constexpr Point2 cmul(Point2 a, Point2 b) { return {a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x}; }

}  // namespace loggas
