#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracms {

/// Points and directions live in a fixed 3-slot array; unused trailing
/// components are zero.
using Vec = std::array<double, 3>;

/// Spatial dimension, restricted to 1, 2 or 3.
class Dim {
 public:
  explicit Dim(int d) : d_(d) {
    if (d < 1 || d > 3)
      throw std::invalid_argument("dimension " + std::to_string(d) + " not in {1,2,3}");
  }
  int value() const { return d_; }
  operator int() const { return d_; }
  friend bool operator==(Dim a, Dim b) { return a.d_ == b.d_; }

 private:
  int d_;
};

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator*(double c, const Vec& a) { return {c * a[0], c * a[1], c * a[2]}; }
inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Converts a coordinate list to a Vec, checking its length against `d`.
inline Vec to_vec(std::span<const double> x, int d) {
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(d));
  Vec v{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) v[i] = x[i];
  return v;
}

inline std::vector<double> from_vec(const Vec& v, int d) { return {v.begin(), v.begin() + d}; }

}  // namespace fracms
