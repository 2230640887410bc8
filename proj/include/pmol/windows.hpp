#pragma once
// Polynomial-blend Meyer windows of finite smoothness.

#include <cmath>
#include <iosfwd>
#include <numbers>

#include "pmol/errors.hpp"

namespace pmol {

// beta(x) = x^{nu+1} sum_{k<=nu} C(nu+k,k) (1-x)^k, clamped to [0,1].
// beta(x) + beta(1-x) = 1 and all derivatives up to nu vanish at 0 and 1.
template <class T>
T blend(T x, int nu) {
  if (x <= T(0)) return T(0);
  if (x >= T(1)) return T(1);
  const T y = T(1) - x;
  T sum = T(0), binom = T(1), ypow = T(1);
  for (int k = 0; k <= nu; ++k) {
    sum += binom * ypow;
    binom = binom * T(nu + k + 1) / T(k + 1);
    ypow *= y;
  }
  return std::pow(x, T(nu + 1)) * sum;
}

// Radial window W and angular window V with sum_j W(2^j r)^2 = 1 and sum_l V(t - l)^2 = 1.
// `transition` in (0, 1] sets how much of each octave (or direction cell) is spent blending:
// W rises on [a, (1 + transition) a] with a = (2 (1 + transition))^{-1/2}, so supp W = (a, 1/a)
// stays inside (1/2, 2); V is flat on |t| <= (1 - transition/3)/2 and vanishes from
// (1 + transition/3)/2, inside (-2/3, 2/3). transition = 1 is the widest blend.
struct WindowPair {
  int smoothness = 7;
  double transition = 1;

  // W rises on [rise_start, rise_end] and falls on twice that interval.
  double rise_start() const { return 1 / std::sqrt(2 * (1 + transition)); }
  double rise_end() const { return (1 + transition) * rise_start(); }

  template <class T>
  T W(T r) const {
    const T half_pi = std::numbers::pi_v<T> / T(2);
    const T rho = T(transition);
    const T a = T(1) / std::sqrt(T(2) * (T(1) + rho)), b = (T(1) + rho) * a;
    if (r <= a || r >= T(2) * b) return T(0);
    if (r < b) return std::sin(half_pi * blend((r - a) / (b - a), smoothness));
    if (r <= T(2) * a) return T(1);
    return std::cos(half_pi * blend((r / T(2) - a) / (b - a), smoothness));
  }

  template <class T>
  T V(T t) const {
    const T half_pi = std::numbers::pi_v<T> / T(2);
    const T delta = T(transition) / T(6);
    const T x = std::abs(t) - (T(0.5) - delta);
    if (x <= T(0)) return T(1);
    if (x >= T(2) * delta) return T(0);
    return std::cos(half_pi * blend(x / (T(2) * delta), smoothness));
  }

  // Low-pass profile: 1 on |t| <= a/4, 0 from |t| >= b/4 (1/8 and 1/4 at full transition),
  // with phi(t)^2 - phi(2t)^2 = W(8|t|)^2.
  template <class T>
  T phi(T t) const {
    const T half_pi = std::numbers::pi_v<T> / T(2);
    const T rho = T(transition);
    const T a = T(1) / std::sqrt(T(2) * (T(1) + rho)), b = (T(1) + rho) * a;
    const T u = T(4) * std::abs(t);
    if (u <= a) return T(1);
    if (u >= b) return T(0);
    return std::cos(half_pi * blend((u - a) / (b - a), smoothness));
  }

  // One-dimensional band-pass profile supported in 1/8 < |w| < 1/2, dyadic partition of unity.
  template <class T>
  T psi1(T w) const { return W(T(4) * std::abs(w)); }
};

inline WindowPair make_meyer_windows(int smoothness, double transition = 1) {
  if (smoothness < 1) throw ParameterError("window smoothness must be >= 1");
  if (!(transition > 0 && transition <= 1)) throw ParameterError("window transition must lie in (0, 1]");
  return WindowPair{smoothness, transition};
}

// CSV rows t,W,V on [0, 2.5] with `samples` points.
void write_window_csv(std::ostream& os, const WindowPair& w, int samples = 1001);

}  // namespace pmol
