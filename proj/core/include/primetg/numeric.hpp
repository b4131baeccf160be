// numeric.hpp
// Small numeric kernels used everywhere: compensated summation with a fixed
// reduction order, and distance-to-integer for products q*t where a naive
// double multiply would lose the low bits that decide the answer.

#pragma once

#include <cmath>
#include <cstdint>

namespace ptg {

// Neumaier variant of Kahan summation. Deterministic for a fixed add order;
// all public sums in this library add terms in ascending index/prime order
// regardless of worker count.
class CompensatedSum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Fractional part in [0, 1).
inline double frac_part(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0; // floor(x) == x - 1 cannot happen, but keep total
  if (f < 0.0) f += 1.0;
  return f;
}

// ||x|| = distance from x to the nearest integer, in [0, 1/2].
inline double fractional_distance(double x) {
  double f = frac_part(x);
  return f <= 0.5 ? f : 1.0 - f;
}

// ||q*t|| for integer q. The product is formed as a two-term expansion
// (rounded product + exact fma residual) before reduction mod 1, so the
// low bits of q*t survive. Absolute error <= 2^-40 for |q| <= 2^30 and
// |t| <= 2^10; in practice it is at the 2^-50 scale.
inline double fractional_distance_scaled(int64_t q, double t) {
  double p = static_cast<double>(q) * t;
  double e = std::fma(static_cast<double>(q), t, -p); // exact residual
  double f = p - std::floor(p);
  f += e;
  f -= std::floor(f);
  if (f < 0.0) f += 1.0;
  if (f >= 1.0) f -= 1.0;
  return f <= 0.5 ? f : 1.0 - f;
}

// Error budget of fractional_distance_scaled, subtracted from acceptance
// margins before a certificate is verified.
inline constexpr double kScaledDistanceError = 9.094947017729282e-13; // 2^-40

// Floor of sqrt for 64-bit integers.
inline uint64_t isqrt(uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

} // namespace ptg
