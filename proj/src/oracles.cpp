#include "pmol/oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

#include "pmol/errors.hpp"

namespace pmol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Adaptive Gauss-Kronrod over consecutive breakpoints (the ends may be infinite).
template <class F>
double integrate(F f, std::vector<double> cuts, const QuadratureOptions& q) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0, l1 = 0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], q.max_depth, q.tol, &err, &l1);
    if (!std::isfinite(v) || err > std::max(1e3 * q.tol * l1, 1e-300))
      throw PrecisionError("quadrature did not converge on [" + std::to_string(cuts[i]) + ", " +
                           std::to_string(cuts[i + 1]) + "]");
    total += v;
  }
  return total;
}

void finish(OracleResult& r) {
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : kInf;
  r.drift = std::abs(r.ratio_refined / r.ratio - 1);
}

double grafakos_lhs(double a, double a2, double y, double N, const QuadratureOptions& q) {
  auto f = [&](double x) { return std::pow(1 + a * std::abs(x), -N) * std::pow(1 + a2 * std::abs(x - y), -N); };
  const double lo = std::min(0.0, y), hi = std::max(0.0, y);
  const double w1 = 1 / std::max(a, a2), w2 = 1 / std::min(a, a2);
  return integrate(f, {-kInf, lo - w2, lo - w1, lo, 0.5 * (lo + hi), hi, hi + w1, hi + w2, kInf}, q);
}

double bumps_lhs(double a, double a2, double theta, double N, const QuadratureOptions& q) {
  auto f = [&](double phi) {
    return std::pow(1 + a * std::abs(std::sin(phi)), -N) * std::pow(1 + a2 * std::abs(std::sin(phi + theta)), -N);
  };
  std::vector<double> cuts{-kPi, 0.0, kPi};
  for (double c : {-theta, kPi - theta, -kPi - theta})
    if (c > -kPi && c < kPi) cuts.push_back(c);
  return integrate(f, cuts, q);
}

double polar_lhs(const EnvelopeParams& p, double r, double phi) {
  const double low = std::min(1.0, std::exp2(-p.s) * (1 + r));
  return std::pow(low, p.M) * std::pow(1 + std::exp2(-p.s) * r, -p.N1) *
         std::pow(1 + std::exp2(-p.s / 2) * r * std::abs(std::sin(phi + p.theta)), -p.N2);
}

double polar_max_ratio(const EnvelopeParams& p, double L, const PolarSamples& ps) {
  EnvelopeParams rhs = p;
  rhs.M = p.M - L;
  rhs.N2 = L;
  std::vector<double> radii{0.0, 1.0, std::exp2(p.s)};
  const double rmax = std::exp2(p.s + 12);
  for (int i = 0; i < ps.radial; ++i) radii.push_back(std::exp2(-6 + (std::log2(rmax) + 6) * i / (ps.radial - 1)));
  std::vector<double> angles{-p.theta};
  for (int i = 0; i < ps.angular; ++i) angles.push_back(-kPi + 2 * kPi * i / ps.angular);
  double m = 0;
  for (double r : radii)
    for (double phi : angles) m = std::max(m, polar_lhs(p, r, phi) / envelope_S(rhs, r, phi));
  return m;
}

double radial_factor(double s, double M, double N1, double r) {
  return std::pow(std::min(1.0, std::exp2(-s) * (1 + r)), M) * std::pow(1 + std::exp2(-s) * r, -N1);
}

double freqangdec_lhs(double s1, double s2, double theta1, double theta2, double M, double N1, double N2,
                      const QuadratureOptions& q) {
  auto radial = [&](double r) { return radial_factor(s1, M, N1, r) * radial_factor(s2, M, N1, r) * r; };
  std::vector<double> rcuts{0.0, kInf};
  for (double s : {s1, s2})
    for (double c : {std::exp2(s) - 1, std::exp2(s), 4 * std::exp2(s)})
      if (c > 0) rcuts.push_back(c);
  const double rad = integrate(radial, rcuts, q);
  auto angular = [&](double phi) {
    return std::pow(1 + std::exp2(s1 / 2) * std::abs(std::sin(phi + theta1)), -N2) *
           std::pow(1 + std::exp2(s2 / 2) * std::abs(std::sin(phi + theta2)), -N2);
  };
  std::vector<double> acuts{-kPi, kPi};
  for (double t : {theta1, theta2})
    for (double c : {-t, kPi - t, -kPi - t, 2 * kPi - t, -2 * kPi - t})
      if (c > -kPi && c < kPi) acuts.push_back(c);
  const double ang = integrate(angular, acuts, q);
  return std::exp2(-0.75 * (s1 + s2)) * rad * ang;
}

std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> v;
  const int n = int(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) v.push_back(lo + step * i);
  return v;
}

void accumulate(OracleSweep& s, std::vector<double> params, const OracleResult& r) {
  s.rows.push_back({std::move(params), r});
  s.max_ratio = std::max(s.max_ratio, r.ratio);
  s.max_drift = std::max(s.max_drift, r.drift);
  s.in_hypothesis = s.in_hypothesis && r.in_hypothesis;
}

}  // namespace

double envelope_S(const EnvelopeParams& p, double r, double phi) {
  const double low = std::min(1.0, std::exp2(-p.s) * (1 + r));
  return std::pow(low, p.M) * std::pow(1 + std::exp2(p.s / 2) * std::abs(std::sin(phi + p.theta)), -p.N2) *
         std::pow(1 + std::exp2(-p.s) * r, -p.N1);
}

OracleResult grafakos_check(double a, double a2, double y, double N, const QuadratureOptions& q) {
  if (!(a > 0) || !(a2 > 0)) throw ParameterError("grafakos_check needs a, a2 > 0");
  if (!(N > 1)) throw ParameterError("grafakos_check needs N > 1");
  OracleResult r;
  r.lhs = grafakos_lhs(a, a2, y, N, q);
  r.rhs = std::pow(1 + std::min(a, a2) * std::abs(y), -N) / std::max(a, a2);
  r.ratio_refined = grafakos_lhs(a, a2, y, N, q.refined()) / r.rhs;
  finish(r);
  return r;
}

OracleResult bumps_check(double a, double a2, double theta, double N, const QuadratureOptions& q) {
  if (!(a > 0) || !(a2 > 0)) throw ParameterError("bumps_check needs a, a2 > 0");
  if (!(N > 1)) throw ParameterError("bumps_check needs N > 1");
  if (std::abs(theta) > kPi / 2) throw ParameterError("bumps_check needs |theta| <= pi/2");
  OracleResult r;
  r.lhs = bumps_lhs(a, a2, theta, N, q);
  r.rhs = std::pow(1 + std::min(a, a2) * std::abs(theta), -N) / std::max(a, a2);
  r.ratio_refined = bumps_lhs(a, a2, theta, N, q.refined()) / r.rhs;
  finish(r);
  return r;
}

OracleResult polar_estimate_check(const EnvelopeParams& p, double L, const PolarSamples& samples) {
  if (L < 0 || L > p.N2) throw ParameterError("polar estimate needs 0 <= L <= N2");
  if (samples.radial < 2 || samples.angular < 1) throw ParameterError("polar estimate needs a sample grid");
  OracleResult r;
  r.ratio = polar_max_ratio(p, L, samples);
  r.lhs = r.ratio;
  r.rhs = 1;
  r.ratio_refined = polar_max_ratio(p, L, samples.refined());
  r.drift = std::abs(r.ratio_refined / r.ratio - 1);
  return r;
}

OracleResult freqangdec_check(double s1, double s2, double theta1, double theta2, double A, double B, double M,
                              double N1, double N2, const QuadratureOptions& q) {
  if (!(A > 0) || !(B > 0)) throw ParameterError("freqangdec_check needs A, B > 0");
  if (N1 <= 1) throw ParameterError("radial integral diverges for N1 <= 1");
  OracleResult r;
  r.in_hypothesis = M > A - 1.25 && N2 >= B && N1 >= A + 0.75;
  r.lhs = freqangdec_lhs(s1, s2, theta1, theta2, M, N1, N2, q);
  r.rhs = std::exp2(-A * std::abs(s1 - s2)) *
          std::pow(1 + std::exp2(std::min(s1, s2) / 2) * std::abs(theta1 - theta2), -B);
  r.ratio_refined = freqangdec_lhs(s1, s2, theta1, theta2, M, N1, N2, q.refined()) / r.rhs;
  finish(r);
  return r;
}

OracleSweep grafakos_sweep(double N, bool dense) {
  OracleSweep s;
  s.lemma = "grafakos";
  s.param_names = {"a", "a2", "y", "N"};
  const double step = dense ? 0.25 : 0.5;
  for (int ea = 0; ea <= 6; ++ea)
    for (int eb = 0; eb <= 6; ++eb)
      for (double y : steps(-8, 8, step)) {
        const double a = std::exp2(ea), a2 = std::exp2(eb);
        accumulate(s, {a, a2, y, N}, grafakos_check(a, a2, y, N));
      }
  return s;
}

OracleSweep bumps_sweep(double N, bool dense) {
  OracleSweep s;
  s.lemma = "bumps";
  s.param_names = {"a", "a2", "theta", "N"};
  const double step = kPi / (dense ? 32 : 16);
  for (int ea = 0; ea <= 6; ++ea)
    for (int eb = 0; eb <= 6; ++eb)
      for (double t : steps(-kPi / 2, kPi / 2, step)) {
        const double a = std::exp2(ea), a2 = std::exp2(eb);
        accumulate(s, {a, a2, t, N}, bumps_check(a, a2, t, N));
      }
  return s;
}

OracleSweep polar_sweep(double M, double N1, double N2, double L, int smax, bool dense) {
  OracleSweep s;
  s.lemma = "polar";
  s.param_names = {"s", "theta", "M", "N1", "N2", "L"};
  PolarSamples ps;
  if (dense) ps = ps.refined();
  for (int sc = 0; sc <= smax; ++sc)
    for (double t : {0.0, 0.3, kPi / 4}) {
      const EnvelopeParams p{double(sc), t, M, N1, N2};
      accumulate(s, {double(sc), t, M, N1, N2, L}, polar_estimate_check(p, L, ps));
    }
  return s;
}

OracleSweep freqangdec_sweep(double A, double B, double M, double N1, double N2, int max_gap, double theta_gap,
                             bool dense) {
  OracleSweep s;
  s.lemma = "freqangdec";
  s.param_names = {"s1", "s2", "theta1", "theta2", "A", "B", "M", "N1", "N2"};
  const std::vector<double> bases = dense ? steps(0, 2, 0.5) : steps(0, 2, 1);
  for (double base : bases)
    for (int g = 0; g <= max_gap; ++g)
      for (int order = 0; order < 2; ++order) {
        if (g == 0 && order == 1) continue;
        const double s1 = order == 0 ? base : base + g, s2 = order == 0 ? base + g : base;
        accumulate(s, {s1, s2, 0.0, theta_gap, A, B, M, N1, N2},
                   freqangdec_check(s1, s2, 0.0, theta_gap, A, B, M, N1, N2));
      }
  return s;
}

std::vector<double> ratio_by_gap(const OracleSweep& s) {
  std::map<int, double> by;
  for (const auto& row : s.rows) {
    const int g = int(std::lround(std::abs(row.params[0] - row.params[1])));
    by[g] = std::max(by[g], row.result.ratio);
  }
  std::vector<double> out;
  for (const auto& [g, v] : by) out.push_back(v);
  return out;
}

void write_sweep_csv(std::ostream& os, const OracleSweep& s) {
  for (const auto& n : s.param_names) os << n << ',';
  os << "lhs,rhs,ratio,ratio_refined,in_hypothesis\n";
  const auto old = os.precision(17);
  for (const auto& row : s.rows) {
    for (double v : row.params) os << v << ',';
    os << row.result.lhs << ',' << row.result.rhs << ',' << row.result.ratio << ',' << row.result.ratio_refined << ','
       << (row.result.in_hypothesis ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace pmol
