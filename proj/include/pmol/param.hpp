#pragma once
// Parameter space R+ x T x R^2, index sets and the index distance.

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmol/errors.hpp"

namespace pmol {

// Shearlet cone flag. 0/1 are the horizontal and vertical cones; 2/3 are their
// antipodal halves, used when a shearlet system is split into one-sided
// (complex) elements. Curvelet and wavelet indices carry `none`.
enum class Cone : std::int8_t { none = -1, horizontal = 0, vertical = 1, horizontal_back = 2, vertical_back = 3 };

inline int cone_id(Cone c) { return static_cast<int>(c); }

struct Index {
  Cone cone = Cone::none;
  int j = 0;
  int l = 0;
  Eigen::Vector2i k = Eigen::Vector2i::Zero();

  friend bool operator==(const Index& a, const Index& b) {
    return a.cone == b.cone && a.j == b.j && a.l == b.l && a.k == b.k;
  }
};

struct IndexHash {
  std::size_t operator()(const Index& i) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : {std::int64_t(cone_id(i.cone)), std::int64_t(i.j), std::int64_t(i.l),
                           std::int64_t(i.k[0]), std::int64_t(i.k[1])}) {
      h ^= std::uint64_t(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return std::size_t(h);
  }
};

template <class T>
using Vec2 = Eigen::Matrix<T, 2, 1>;
template <class T>
using Mat2 = Eigen::Matrix<T, 2, 2>;

template <class T>
T wrap_angle(T theta) {
  const T two_pi = T(2) * std::numbers::pi_v<T>;
  T r = std::fmod(theta, two_pi);
  if (r < T(0)) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

// Signed difference on the circle, in [-pi, pi].
template <class T>
T angle_gap(T a, T b) {
  const T pi = std::numbers::pi_v<T>;
  T d = wrap_angle(a - b);
  return d > pi ? d - T(2) * pi : d;
}

template <class T>
struct BasicParamPoint {
  T s{0};
  T theta{0};
  Vec2<T> x = Vec2<T>::Zero();

  BasicParamPoint() = default;
  BasicParamPoint(T s_, T theta_, Vec2<T> x_) : s(s_), theta(wrap_angle(theta_)), x(std::move(x_)) {}
};
using ParamPoint = BasicParamPoint<double>;

template <class T>
Mat2<T> rotation(T theta) {
  Mat2<T> r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// D_a = diag(a, sqrt a); the transposed variant diag(sqrt a, a) is used by the vertical cone.
template <class T>
Mat2<T> parabolic_dilation(T a, bool transposed = false) {
  Mat2<T> d = Mat2<T>::Zero();
  d(0, 0) = transposed ? std::sqrt(a) : a;
  d(1, 1) = transposed ? a : std::sqrt(a);
  return d;
}

// Shear with slope l 2^{-floor(j/2)}; transposed for the vertical cone.
template <class T>
Mat2<T> shear(int l, int j, bool transposed = false) {
  Mat2<T> s = Mat2<T>::Identity();
  const T slope = T(l) * std::ldexp(T(1), -(j / 2));
  if (transposed) s(1, 0) = slope; else s(0, 1) = slope;
  return s;
}

// d(p, q) = |dtheta|^2 + |dx|^2 + |<e_p, dx>|. The angle gap is taken on the
// circle. Not symmetric: e_p uses the first argument's orientation.
template <class T>
T pseudo_distance(const BasicParamPoint<T>& p, const BasicParamPoint<T>& q) {
  const T dth = angle_gap(p.theta, q.theta);
  const Vec2<T> dx = p.x - q.x;
  // Short axis of a(D_{2^s} R_theta (x - x_p)), i.e. R_theta^T e_1.
  const Vec2<T> e(std::cos(p.theta), -std::sin(p.theta));
  return dth * dth + dx.squaredNorm() + std::abs(e.dot(dx));
}

template <class T>
T omega(const BasicParamPoint<T>& p, const BasicParamPoint<T>& q) {
  const T smin = std::min(p.s, q.s);
  return std::exp2(std::abs(p.s - q.s)) * (T(1) + std::exp2(smin) * pseudo_distance(p, q));
}

enum class AngleRange { half, full };

// Canonical map: s = j, theta = l 2^{-floor(j/2)} pi, x = R_{-theta} D_{2^{-s}} k.
// `half` accepts |l| <= 2^{floor(j/2)-1}; `full` accepts l in [-2^{floor(j/2)}, 2^{floor(j/2)}).
ParamPoint canonical_point(const Index& idx, AngleRange range = AngleRange::half);

// Shearlet map: s = j, theta = eps pi/2 + arctan(-l 2^{-floor(j/2)}),
// x = (S_l^eps)^{-1} D^eps_{2^{-j}} k. Cones 2/3 reuse the matrices of 0/1.
ParamPoint shearlet_point(const Index& idx);

// One (cone, j, l) orientation of a lattice-type parametrization: x = lattice * k.
struct Orientation {
  Cone cone = Cone::none;
  int j = 0;
  int l = 0;
  double theta = 0;
  Eigen::Matrix2d lattice = Eigen::Matrix2d::Identity();
};

enum class ParamKind { canonical, shearlet, table };

class Parametrization {
 public:
  using Entry = std::pair<Index, ParamPoint>;

  static Parametrization canonical(AngleRange range = AngleRange::half);
  static Parametrization shearlet();
  static Parametrization table(std::vector<Entry> entries);

  ParamKind kind() const { return kind_; }
  AngleRange angle_range() const { return range_; }

  ParamPoint operator()(const Index& idx) const;
  bool contains(const Index& idx) const;

  // Lattice kinds only.
  std::vector<Orientation> orientations(int j) const;
  // Table kind only.
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  ParamKind kind_ = ParamKind::canonical;
  AngleRange range_ = AngleRange::half;
  std::vector<Entry> entries_;
  std::unordered_map<Index, std::size_t, IndexHash> lookup_;
};

struct AdmissibilityOptions {
  int probe_jmax = 3;      // outer probes: indices with j <= probe_jmax ...
  int probe_kmax = 8;      // ... and |k|_inf <= probe_kmax
  int window = 64;         // inner translation window |k_i - c_i| <= window
  bool doubled_window = true;  // also accumulate the 2*window sums
};

// Partial sums of sup_lambda sum_mu omega^{-k} in both directions (A probes over
// B, and B probes over A), truncated to inner scales <= jmax.
struct AdmissibilityRow {
  int jmax = 0;
  double k = 0;
  double sup_ab = 0;
  double sup_ba = 0;
  double sup_ab_doubled = 0;  // same, with the doubled translation window
  double sup_ba_doubled = 0;
};

std::vector<AdmissibilityRow> admissibility_partial_sums(const Parametrization& a, const Parametrization& b,
                                                         double k, int jmax,
                                                         const AdmissibilityOptions& opt = {});

// Several exponents in one pass over the index sets; rows ordered by (k, jmax).
std::vector<AdmissibilityRow> admissibility_sweep(const Parametrization& a, const Parametrization& b,
                                                  const std::vector<double>& ks, int jmax,
                                                  const AdmissibilityOptions& opt = {});

// sum_{lambda in shell j} (1 + 2^q d(probe, lambda))^{-k} / 2^{growth (j-q)_+},
// over the translation window centred on the probe.
double strong_admissibility_ratio(const Parametrization& param, double k, double growth, int j, int q,
                                  const ParamPoint& probe, int window = 64);

// CSV rows: cone,j,l,k1,k2,s,theta,x1,x2 with 17 significant digits.
void write_parametrization_csv(std::ostream& os, const std::vector<Parametrization::Entry>& rows);

// Enumerate a lattice parametrization over j <= jmax and |k|_inf <= kmax.
std::vector<Parametrization::Entry> enumerate(const Parametrization& param, int jmax, int kmax);

}  // namespace pmol
