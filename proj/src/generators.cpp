#include "pmol/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace pmol {

namespace {
constexpr double kPi = std::numbers::pi;

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::curvelet_bl: return "curvelet_bl";
    case Family::shearlet_bl: return "shearlet_bl";
    case Family::shearlet_compact: return "shearlet_compact";
    case Family::wavelet_meyer: return "wavelet_meyer";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "curvelet_bl" || s == "curvelet") return Family::curvelet_bl;
  if (s == "shearlet_bl" || s == "shearlet") return Family::shearlet_bl;
  if (s == "shearlet_compact" || s == "compact") return Family::shearlet_compact;
  if (s == "wavelet_meyer" || s == "wavelet") return Family::wavelet_meyer;
  throw ParameterError("unknown frame family '" + s + "'");
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1 - (kPi * x) * (kPi * x) / 6;
  return std::sin(kPi * x) / (kPi * x);
}

double bspline(int m, double x) {
  if (m < 1) throw ParameterError("B-spline order must be >= 1");
  const double half = 0.5 * m;
  if (x <= -half || x >= half) return 0;
  // truncated-power form; fine for the small orders used here
  double sum = 0, fact = 1;
  for (int i = 2; i < m; ++i) fact *= i;
  for (int k = 0; k <= m; ++k) {
    const double t = x + half - k;
    if (t > 0) sum += ((k % 2) ? -1.0 : 1.0) * binom(m, k) * std::pow(t, m - 1);
  }
  return sum / fact;
}

std::complex<double> CompactGenerator::psi1_hat(double xi) const {
  const std::complex<double> diff(0, 2 * std::sin(kPi * xi));
  return std::pow(diff, vanishing_moments) * std::pow(sinc(xi), spline_order);
}

double CompactGenerator::psi2_hat(double xi) const { return std::pow(sinc(xi), spline_order + 2); }

double CompactGenerator::psi1(double x) const {
  double v = 0;
  const int M = vanishing_moments;
  for (int k = 0; k <= M; ++k) v += ((k % 2) ? -1.0 : 1.0) * binom(M, k) * bspline(spline_order, x + 0.5 * M - k);
  return v;
}

double CompactGenerator::psi2(double x) const { return bspline(spline_order + 2, x); }

double CompactGenerator::psi1_energy() const {
  const int M = vanishing_moments;
  double e = 0;
  for (int k = 0; k <= M; ++k)
    for (int q = 0; q <= M; ++q)
      e += (((k + q) % 2) ? -1.0 : 1.0) * binom(M, k) * binom(M, q) * bspline(2 * spline_order, double(k - q));
  return e;
}

double CompactGenerator::psi2_energy() const { return bspline(2 * (spline_order + 2), 0.0); }

CompactGenerator shearlet_compact_generator(int spline_order, int vanishing_moments) {
  if (vanishing_moments < 1) throw ParameterError("compact generator needs at least one vanishing moment");
  if (spline_order < 2) throw ParameterError("spline order must be >= 2 for a continuous wavelet");
  if (spline_order > 16 || vanishing_moments > 24) throw ParameterError("spline order or moment count too large");
  return {spline_order, vanishing_moments};
}

Parametrization FrameSpec::parametrization() const {
  switch (family) {
    case Family::curvelet_bl: return Parametrization::canonical(AngleRange::full);
    case Family::shearlet_bl:
    case Family::shearlet_compact: return Parametrization::shearlet();
    case Family::wavelet_meyer: break;
  }
  throw ParameterError("wavelet reference has no lattice parametrization");
}

std::string FrameSpec::id() const {
  std::ostringstream os;
  os << to_string(family) << "(jmax=" << jmax;
  if (family == Family::shearlet_compact)
    os << ",spline=" << compact.spline_order << ",moments=" << compact.vanishing_moments;
  else {
    os << ",nu=" << windows.smoothness;
    if (windows.transition != 1) os << ",tr=" << windows.transition;
  }
  if (!cones.empty()) {
    os << ",cones=";
    for (std::size_t i = 0; i < cones.size(); ++i) os << (i ? ":" : "") << cone_id(cones[i]);
  }
  os << ")";
  return os.str();
}

FrameSpec make_curvelet_spec(int jmax, int smoothness) {
  if (jmax < 1) throw ParameterError("curvelet frame needs jmax >= 1");
  FrameSpec s;
  s.family = Family::curvelet_bl;
  s.jmax = jmax;
  s.windows = make_meyer_windows(smoothness);
  return s;
}

FrameSpec make_shearlet_spec(int jmax, int smoothness) {
  if (jmax < 0) throw ParameterError("shearlet frame needs jmax >= 0");
  FrameSpec s;
  s.family = Family::shearlet_bl;
  s.jmax = jmax;
  s.windows = make_meyer_windows(smoothness);
  return s;
}

FrameSpec make_compact_shearlet_spec(int jmax, int spline_order, int vanishing_moments, MoleculeOrder claimed) {
  if (jmax < 0) throw ParameterError("shearlet frame needs jmax >= 0");
  FrameSpec s;
  s.family = Family::shearlet_compact;
  s.jmax = jmax;
  s.compact = shearlet_compact_generator(spline_order, vanishing_moments);
  s.claimed_order = claimed;
  return s;
}

FrameSpec make_wavelet_spec(int jmax, int smoothness) {
  if (jmax < 0) throw ParameterError("wavelet frame needs jmax >= 0");
  FrameSpec s;
  s.family = Family::wavelet_meyer;
  s.jmax = jmax;
  s.windows = make_meyer_windows(smoothness);
  return s;
}

namespace profile {

double curvelet_radial(const WindowPair& w, int j, int jmax, double r) {
  if (j == 0) {
    if (r / 2 >= w.rise_end()) return 0;
    const double v = w.W(r / 2);
    return std::sqrt(std::max(0.0, 1 - v * v));
  }
  const double t = std::ldexp(r, -j);
  if (j == jmax && t >= 1) return 1;
  return w.W(t);
}

double curvelet_angular(const WindowPair& w, int j, int l, double angle) {
  if (j == 0) return 1;
  const int a = j / 2;
  const double centre = -l * std::ldexp(kPi, -a);
  return w.V(std::ldexp(angle_gap(angle, centre), a) / kPi);
}

double shearlet_coarse(const WindowPair& w, double xi1, double xi2) { return w.phi(2 * xi1) * w.phi(2 * xi2); }

double shearlet_radial(const WindowPair& w, int j, int jmax, double xi1, double xi2) {
  const double outer = j == jmax ? 1.0 : w.phi(std::ldexp(xi1, -j)) * w.phi(std::ldexp(xi2, -j));
  const double inner = w.phi(std::ldexp(xi1, 1 - j)) * w.phi(std::ldexp(xi2, 1 - j));
  return std::sqrt(std::max(0.0, outer * outer - inner * inner));
}

// Half-cones: 0 east (xi1 > 0, |xi2| <= xi1), 1 north, 2 west, 3 south. Diagonals belong to east/west.
static int half_cone(double xi1, double xi2) {
  if (std::abs(xi2) <= std::abs(xi1)) return xi1 > 0 ? 0 : 2;
  return xi2 > 0 ? 1 : 3;
}

double shearlet_angular(int cone, int j, int l, double xi1, double xi2, const WindowPair& w) {
  if (xi1 == 0 && xi2 == 0) return 0;
  const int a = j / 2;
  const double scale = std::ldexp(1.0, a);
  const int here = half_cone(xi1, xi2);
  const bool horizontal_here = here == 0 || here == 2;
  const double slope = horizontal_here ? xi2 / xi1 : xi1 / xi2;
  if (here == cone) return w.V(scale * slope - l);
  // seam elements of the east/west half-cones continue into the neighbouring vertical half-cone
  const bool seam = (cone == 0 || cone == 2) && std::abs(l) == (1 << a);
  if (!seam || horizontal_here) return 0;
  int neighbour;
  if (cone == 0) neighbour = l > 0 ? 1 : 3;
  else neighbour = l > 0 ? 3 : 1;
  if (here != neighbour) return 0;
  return w.V(scale * slope - l);
}

}  // namespace profile

double shearlet_generator_hat(const WindowPair& w, double xi1, double xi2) {
  if (xi1 == 0) return 0;
  return w.psi1(xi1) * w.V(xi2 / xi1);
}

namespace {

// 1/||psi1||, 1/||psi2||, so every compact element has unit L2 norm. Cached since the
// energies are O(M^2) spline evaluations and windows are evaluated per grid point.
std::pair<double, double> unit_scales(const CompactGenerator& g) {
  thread_local std::map<std::pair<int, int>, std::pair<double, double>> cache;
  const auto key = std::make_pair(g.spline_order, g.vanishing_moments);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_pair(1 / std::sqrt(g.psi1_energy()), 1 / std::sqrt(g.psi2_energy()))).first;
  return it->second;
}

std::complex<double> compact_window(const FrameSpec& spec, const Index& idx, double xi1, double xi2) {
  const CompactGenerator& g = spec.compact;
  const auto [c1, c2] = unit_scales(g);
  if (idx.cone == Cone::none) return c2 * c2 * g.psi2_hat(xi1) * g.psi2_hat(xi2);
  const int c = cone_id(idx.cone);
  if (c > 1) throw InvalidIndex("compact shearlets use cones 0 and 1 only");
  if (c == 1) std::swap(xi1, xi2);
  const double slope = idx.l * std::ldexp(1.0, -(idx.j / 2));
  const double u = std::ldexp(xi1, -idx.j);
  const double v = std::exp2(-0.5 * idx.j) * (xi2 - slope * xi1);
  return c1 * c2 * g.psi1_hat(u) * g.psi2_hat(v);
}

double wavelet_window(const FrameSpec& spec, const Index& idx, double xi1, double xi2) {
  const WindowPair& w = spec.windows;
  if (idx.j == 0 && idx.l == 0) return profile::shearlet_coarse(w, xi1, xi2);
  // a_i: outer low-pass squared, b_i: inner
  auto lp = [&](double x, int e) { return w.phi(std::ldexp(x, e)); };
  const int j = idx.j;
  const double a1 = j == spec.jmax ? 1.0 : lp(xi1, -j), a2 = j == spec.jmax ? 1.0 : lp(xi2, -j);
  const double b1 = lp(xi1, 1 - j), b2 = lp(xi2, 1 - j);
  const double p1 = std::sqrt(std::max(0.0, a1 * a1 - b1 * b1));
  const double p2 = std::sqrt(std::max(0.0, a2 * a2 - b2 * b2));
  switch (idx.l) {
    case 1: return p1 * b2;
    case 2: return b1 * p2;
    case 3: return p1 * p2;
  }
  throw InvalidIndex("wavelet subband must be 1, 2 or 3");
}

}  // namespace

std::complex<double> element_window(const FrameSpec& spec, const Index& idx, double xi1, double xi2) {
  if (idx.j < 0 || idx.j > spec.jmax) throw InvalidIndex("scale outside frame range");
  switch (spec.family) {
    case Family::curvelet_bl: {
      const double r = std::hypot(xi1, xi2);
      const double ang = std::atan2(xi2, xi1);
      return profile::curvelet_radial(spec.windows, idx.j, spec.jmax, r) *
             profile::curvelet_angular(spec.windows, idx.j, idx.l, ang);
    }
    case Family::shearlet_bl: {
      if (idx.cone == Cone::none) return profile::shearlet_coarse(spec.windows, xi1, xi2);
      return profile::shearlet_radial(spec.windows, idx.j, spec.jmax, xi1, xi2) *
             profile::shearlet_angular(cone_id(idx.cone), idx.j, idx.l, xi1, xi2, spec.windows);
    }
    case Family::shearlet_compact: return compact_window(spec, idx, xi1, xi2);
    case Family::wavelet_meyer: return wavelet_window(spec, idx, xi1, xi2);
  }
  return 0;
}

namespace {

std::complex<double> modulated(double norm, std::complex<double> win, const Eigen::Vector2d& x,
                               const Eigen::Vector2d& xi) {
  const double ph = -2 * kPi * x.dot(xi);
  return norm * win * std::complex<double>(std::cos(ph), std::sin(ph));
}

Eigen::Vector2d coarse_location(const Index& idx) { return idx.k.cast<double>(); }

}  // namespace

std::complex<double> curvelet_hat(const FrameSpec& spec, const Index& idx, const Eigen::Vector2d& xi) {
  if (spec.family != Family::curvelet_bl) throw ParameterError("curvelet_hat needs a curvelet spec");
  const Eigen::Vector2d x = idx.j == 0 ? coarse_location(idx) : canonical_point(idx, AngleRange::full).x;
  return modulated(std::exp2(-0.75 * idx.j), element_window(spec, idx, xi[0], xi[1]), x, xi);
}

std::complex<double> shearlet_hat_bandlimited(const FrameSpec& spec, const Index& idx, const Eigen::Vector2d& xi) {
  if (spec.family != Family::shearlet_bl) throw ParameterError("shearlet_hat_bandlimited needs a shearlet spec");
  if (idx.cone == Cone::none) return modulated(1.0, element_window(spec, idx, xi[0], xi[1]), coarse_location(idx), xi);
  return modulated(std::exp2(-0.75 * idx.j), element_window(spec, idx, xi[0], xi[1]), shearlet_point(idx).x, xi);
}

std::complex<double> shearlet_hat_compact(const FrameSpec& spec, const Index& idx, const Eigen::Vector2d& xi) {
  if (spec.family != Family::shearlet_compact) throw ParameterError("shearlet_hat_compact needs a compact spec");
  if (idx.cone == Cone::none) return modulated(1.0, element_window(spec, idx, xi[0], xi[1]), coarse_location(idx), xi);
  return modulated(std::exp2(-0.75 * idx.j), element_window(spec, idx, xi[0], xi[1]), shearlet_point(idx).x, xi);
}

std::complex<double> molecule_profile(const FrameSpec& spec, const Index& idx, const ParamPoint& p,
                                      const Eigen::Vector2d& eta) {
  const Eigen::Vector2d d(std::exp2(p.s) * eta[0], std::exp2(0.5 * p.s) * eta[1]);
  const Eigen::Vector2d xi = rotation(p.theta).transpose() * d;
  return std::exp2(0.75 * (p.s - idx.j)) * element_window(spec, idx, xi[0], xi[1]);
}

namespace {

ParamPoint molecule_point(const FrameSpec& spec, const Index& idx) {
  if (idx.cone == Cone::none && spec.family != Family::curvelet_bl) return ParamPoint(0, 0, coarse_location(idx));
  if (spec.family == Family::curvelet_bl && idx.j == 0) return ParamPoint(0, 0, coarse_location(idx));
  return spec.parametrization()(idx);
}

struct DerivBundle {
  double max_ratio = 0;
  Eigen::Vector2d worst = Eigen::Vector2d::Zero();
};

DerivBundle scan(const FrameSpec& spec, const MoleculeOrder& order, const Index& idx, const ParamPoint& p,
                 const FrequencyGrid& g, int dorder) {
  const double h = std::exp2(-0.5 * p.s) * 1e-2;
  auto f = [&](double e1, double e2) { return molecule_profile(spec, idx, p, Eigen::Vector2d(e1, e2)); };
  DerivBundle out;
  const double sp = g.spacing();
  for (int m1 = -g.n / 2; m1 < g.n / 2; ++m1) {
    for (int m2 = -g.n / 2; m2 < g.n / 2; ++m2) {
      const double e1 = sp * m1, e2 = sp * m2;
      const std::complex<double> f0 = f(e1, e2);
      double worst = std::abs(f0);
      if (dorder >= 1) {
        // values at +-h and +-h/2 along each axis, combined by Richardson extrapolation
        std::complex<double> ax[2][4];
        for (int ax_i = 0; ax_i < 2; ++ax_i) {
          const double dx = ax_i == 0 ? 1 : 0, dy = 1 - dx;
          ax[ax_i][0] = f(e1 + h * dx, e2 + h * dy);
          ax[ax_i][1] = f(e1 - h * dx, e2 - h * dy);
          ax[ax_i][2] = f(e1 + 0.5 * h * dx, e2 + 0.5 * h * dy);
          ax[ax_i][3] = f(e1 - 0.5 * h * dx, e2 - 0.5 * h * dy);
          const auto d1h = (ax[ax_i][0] - ax[ax_i][1]) / (2 * h);
          const auto d1q = (ax[ax_i][2] - ax[ax_i][3]) / h;
          worst = std::max(worst, std::abs((4.0 * d1q - d1h) / 3.0));
          if (dorder >= 2) {
            const auto d2h = (ax[ax_i][0] - 2.0 * f0 + ax[ax_i][1]) / (h * h);
            const auto d2q = (ax[ax_i][2] - 2.0 * f0 + ax[ax_i][3]) / (0.25 * h * h);
            worst = std::max(worst, std::abs((4.0 * d2q - d2h) / 3.0));
          }
        }
        if (dorder >= 2) {
          auto mixed = [&](double t) {
            return (f(e1 + t, e2 + t) - f(e1 + t, e2 - t) - f(e1 - t, e2 + t) + f(e1 - t, e2 - t)) / (4 * t * t);
          };
          worst = std::max(worst, std::abs((4.0 * mixed(0.5 * h) - mixed(h)) / 3.0));
        }
      }
      const double env = envelope_bound<double>(order, p.s, Eigen::Vector2d(e1, e2));
      const double ratio = worst / env;
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.worst = Eigen::Vector2d(e1, e2);
      }
    }
  }
  return out;
}

}  // namespace

MoleculeReport verify_molecule_condition(const FrameSpec& spec, const MoleculeOrder& order,
                                         const std::vector<Index>& sample, const FrequencyGrid& grid) {
  if (sample.empty()) throw ParameterError("molecule check needs a nonempty index sample");
  if (grid.spacing() > 1.0 / 16 || grid.extent < 4)
    throw ResolutionError(grid.id() + " too coarse for the molecule check (need spacing <= 1/16, extent >= 4)");
  MoleculeReport rep;
  rep.derivative_order = int(std::min(2.0, std::floor(order.R)));
  rep.smoothness = spec.family == Family::shearlet_compact ? spec.compact.spline_order : spec.windows.smoothness;
  const FrequencyGrid fine(grid.n * 4, grid.extent * 2);
  for (const Index& idx : sample) {
    if (idx.j > spec.jmax) throw ResolutionError("sample index beyond frame jmax");
    const ParamPoint p = molecule_point(spec, idx);
    const DerivBundle a = scan(spec, order, idx, p, grid, rep.derivative_order);
    const DerivBundle b = scan(spec, order, idx, p, fine, rep.derivative_order);
    rep.per_index.push_back({idx, a.max_ratio, b.max_ratio, b.worst});
    rep.max_constant = std::max(rep.max_constant, a.max_ratio);
    rep.max_constant_refined = std::max(rep.max_constant_refined, b.max_ratio);
  }
  rep.relative_change = std::abs(rep.max_constant_refined - rep.max_constant) / std::max(rep.max_constant, 1e-300);
  rep.pass = rep.max_constant > 0 && std::isfinite(rep.max_constant_refined) && rep.relative_change < 0.05;
  return rep;
}

void write_spec_config(std::ostream& os, const FrameSpec& spec) {
  os << "family = " << to_string(spec.family) << '\n';
  os << "jmax = " << spec.jmax << '\n';
  os << "smoothness = " << spec.windows.smoothness << '\n';
  os << "spline_order = " << spec.compact.spline_order << '\n';
  os << "vanishing_moments = " << spec.compact.vanishing_moments << '\n';
  if (spec.claimed_order.arbitrary) os << "order = arbitrary\n";
  else
    os << "order = " << spec.claimed_order.R << ',' << spec.claimed_order.M << ',' << spec.claimed_order.N1 << ','
       << spec.claimed_order.N2 << '\n';
  if (!spec.cones.empty()) {
    os << "cones = ";
    for (std::size_t i = 0; i < spec.cones.size(); ++i) os << (i ? "," : "") << cone_id(spec.cones[i]);
    os << '\n';
  }
}

}  // namespace pmol
