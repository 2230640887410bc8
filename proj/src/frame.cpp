#include "pmol/frame.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

namespace pmol {

namespace {

constexpr double kPi = std::numbers::pi;

int nice_size(int x) {
  for (int s = std::max(1, x);; ++s) {
    int r = s;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return s;
  }
}

int pmod(int a, int n) {
  const int r = a % n;
  return r < 0 ? r + n : r;
}

std::complex<double> cis(double t) { return {std::cos(t), std::sin(t)}; }

// kissfft mishandles length 1
void dft(Eigen::FFT<double>& fft, std::vector<cplx>& out, const std::vector<cplx>& in, bool inverse) {
  if (in.size() == 1) {
    out = in;
    return;
  }
  if (inverse) fft.inv(out, in);
  else fft.fwd(out, in);
}

// Orientation of a one-sided shearlet: minus the angle of its frequency direction, the
// same convention as the curvelet wedges. Agrees with shearlet_point modulo pi.
double one_sided_theta(int cone, double slope) {
  switch (cone) {
    case 0: return wrap_angle(-std::atan(slope));
    case 1: return wrap_angle(-kPi / 2 + std::atan(slope));
    case 2: return wrap_angle(kPi - std::atan(slope));
    default: return wrap_angle(kPi / 2 + std::atan(slope));
  }
}

struct Point {
  int u, v;
  std::complex<double> g;
};

// Extent along u and the largest v-chord over the columns of a support.
std::pair<int, int> span_and_chord(std::vector<std::pair<int, int>>& uv) {
  if (uv.empty()) return {1, 1};
  std::sort(uv.begin(), uv.end());
  const int span = uv.back().first - uv.front().first + 1;
  int chord = 1;
  for (std::size_t i = 0; i < uv.size();) {
    std::size_t k = i;
    while (k < uv.size() && uv[k].first == uv[i].first) ++k;
    chord = std::max(chord, uv[k - 1].second - uv[i].second + 1);
    i = k;
  }
  return {span, chord};
}

}  // namespace

std::size_t CoefficientSet::size() const {
  std::size_t s = 0;
  for (const auto& b : blocks) s += std::size_t(b.size());
  return s;
}

double CoefficientSet::energy() const {
  double e = 0;
  for (const auto& b : blocks) e += b.squaredNorm();
  return e;
}

Frame::Frame(FrameSpec spec, const FrequencyGrid& grid) : spec_(std::move(spec)), grid_(grid) {
  if (spec_.jmax < 0) throw ParameterError("frame jmax must be nonnegative");
  if (spec_.family == Family::shearlet_compact) build_compact();
  else build_bandlimited();
  for (std::size_t i = 0; i < wedges_.size(); ++i) lookup_.emplace(wedges_[i].tag, int(i));
}

std::size_t Frame::size() const {
  std::size_t s = 0;
  for (const auto& w : wedges_) s += w.count();
  return s;
}

void Frame::build_bandlimited() {
  const int n = grid_.n;
  const double h = grid_.spacing();
  const WindowPair& win = spec_.windows;
  const int jmax = spec_.jmax;
  std::unordered_map<Index, int, IndexHash> ids;

  auto keep_cone = [&](Cone c) {
    if (spec_.cones.empty() || c == Cone::none) return true;
    return std::find(spec_.cones.begin(), spec_.cones.end(), c) != spec_.cones.end();
  };
  auto wedge_for = [&](Cone cone, int j, int l) -> Wedge& {
    Index tag{cone, j, l, Eigen::Vector2i::Zero()};
    auto it = ids.find(tag);
    if (it != ids.end()) return wedges_[it->second];
    Wedge w;
    w.tag = tag;
    w.scale = std::max(0, j - scale_offset(spec_.family));
    const int a = j / 2;
    switch (spec_.family) {
      case Family::curvelet_bl: w.theta = j == 0 ? 0.0 : wrap_angle(l * std::ldexp(kPi, -a)); break;
      case Family::shearlet_bl:
        if (cone == Cone::none) break;
        w.theta = one_sided_theta(cone_id(cone), l * std::ldexp(1.0, -a));
        w.transposed = cone_id(cone) % 2 == 1;
        w.shear = l * std::ldexp(1.0, -a);
        break;
      case Family::wavelet_meyer: w.theta = l == 2 ? kPi / 2 : (l == 3 ? kPi / 4 : 0.0); break;
      case Family::shearlet_compact: break;
    }
    ids.emplace(tag, int(wedges_.size()));
    wedges_.push_back(std::move(w));
    return wedges_.back();
  };
  auto add = [&](Cone cone, int j, int l, int slot, double val) {
    if (val <= 0 || !keep_cone(cone)) return;
    Wedge& w = wedge_for(cone, j, l);
    w.slots.push_back(slot);
    w.values.emplace_back(val);
  };

  for (int p = 0; p < n; ++p) {
    const int m1 = grid_.index_of_slot(p);
    const double xi1 = h * m1;
    for (int q = 0; q < n; ++q) {
      const int m2 = grid_.index_of_slot(q);
      const double xi2 = h * m2;
      const int slot = p * n + q;
      switch (spec_.family) {
        case Family::curvelet_bl: {
          const double r = std::hypot(xi1, xi2), ang = std::atan2(xi2, xi1);
          for (int j = 0; j <= jmax; ++j) {
            const double rad = profile::curvelet_radial(win, j, jmax, r);
            if (rad <= 0) continue;
            if (j == 0) { add(Cone::none, 0, 0, slot, rad); continue; }
            const int a = j / 2, half = 1 << a, count = 2 * half;
            const int l0 = int(std::lround(-ang * half / kPi));
            std::set<int> ls;
            for (int d = -1; d <= 1; ++d) ls.insert(pmod(l0 + d + half, count) - half);
            for (int l : ls) add(Cone::none, j, l, slot, rad * profile::curvelet_angular(win, j, l, ang));
          }
          break;
        }
        case Family::shearlet_bl: {
          add(Cone::none, 0, 0, slot, profile::shearlet_coarse(win, xi1, xi2));
          if (m1 == 0 && m2 == 0) break;
          const bool horiz = std::abs(xi2) <= std::abs(xi1);
          const int here = horiz ? (xi1 > 0 ? 0 : 2) : (xi2 > 0 ? 1 : 3);
          const double slope = horiz ? xi2 / xi1 : xi1 / xi2;
          for (int j = 0; j <= jmax; ++j) {
            const double rad = profile::shearlet_radial(win, j, jmax, xi1, xi2);
            if (rad <= 0) continue;
            const int a = j / 2, half = 1 << a;
            const int l0 = int(std::lround(slope * half));
            const int lo = horiz ? -half : -half + 1, hi = horiz ? half : half - 1;
            for (int l = std::max(lo, l0 - 1); l <= std::min(hi, l0 + 1); ++l)
              add(Cone(here), j, l, slot, rad * profile::shearlet_angular(here, j, l, xi1, xi2, win));
            if (!horiz && std::abs(l0) >= half - 1) {
              for (int c : {0, 2})
                for (int l : {-half, half})
                  add(Cone(c), j, l, slot, rad * profile::shearlet_angular(c, j, l, xi1, xi2, win));
            }
          }
          break;
        }
        case Family::wavelet_meyer: {
          add(Cone::none, 0, 0, slot, profile::shearlet_coarse(win, xi1, xi2));
          for (int j = 0; j <= jmax; ++j)
            for (int l = 1; l <= 3; ++l)
              add(Cone::none, j, l, slot,
                  element_window(spec_, Index{Cone::none, j, l, Eigen::Vector2i::Zero()}, xi1, xi2).real());
          break;
        }
        case Family::shearlet_compact: break;
      }
    }
  }
  std::sort(wedges_.begin(), wedges_.end(), [](const Wedge& a, const Wedge& b) {
    if (a.tag.j != b.tag.j) return a.tag.j < b.tag.j;
    if (a.tag.cone != b.tag.cone) return cone_id(a.tag.cone) < cone_id(b.tag.cone);
    return a.tag.l < b.tag.l;
  });
  for (auto& w : wedges_) finish_wedge(w);
}

void Frame::build_compact() {
  const double L = grid_.period();
  auto keep = [&](Cone c) {
    return spec_.cones.empty() || std::find(spec_.cones.begin(), spec_.cones.end(), c) != spec_.cones.end();
  };
  auto lattice_sizes = [&](Wedge& w, int ju, int jv) {
    w.n_u = std::max(1, int(std::lround(L * std::ldexp(1.0, ju))));
    w.n_v = std::max(1, int(std::lround(L * std::ldexp(1.0, jv))));
    w.norm = L / std::sqrt(double(w.n_u) * w.n_v);
    w.stored = false;
    w.alias_free = false;
  };
  {
    Wedge w;
    w.tag = Index{Cone::none, 0, 0, Eigen::Vector2i::Zero()};
    lattice_sizes(w, 0, 0);
    wedges_.push_back(w);
  }
  for (int j = 0; j <= spec_.jmax; ++j) {
    const int a = j / 2;
    for (int c = 0; c < 2; ++c) {
      if (!keep(Cone(c))) continue;
      for (int l = -(1 << a); l <= (1 << a); ++l) {
        Wedge w;
        w.tag = Index{Cone(c), j, l, Eigen::Vector2i::Zero()};
        w.scale = std::max(0, j - scale_offset(spec_.family));
        w.theta = wrap_angle(c * kPi / 2 + std::atan(-l * std::ldexp(1.0, -a)));
        w.transposed = c == 1;
        w.shear = l * std::ldexp(1.0, -a);
        lattice_sizes(w, j, (j + 1) / 2);
        wedges_.push_back(w);
      }
    }
  }
}

void Frame::finish_wedge(Wedge& w) {
  const int n = grid_.n;
  auto uv_of = [&](int slot, bool tr) {
    const int m1 = grid_.index_of_slot(slot / n), m2 = grid_.index_of_slot(slot % n);
    return tr ? std::make_pair(m2, m1) : std::make_pair(m1, m2);
  };
  auto measure = [&](bool tr) {
    std::vector<std::pair<int, int>> uv;
    uv.reserve(w.slots.size());
    for (int s : w.slots) uv.push_back(uv_of(s, tr));
    return span_and_chord(uv);
  };
  const bool shearlet = spec_.family == Family::shearlet_bl && w.tag.cone != Cone::none;
  if (shearlet) {
    const auto [span, chord] = measure(w.transposed);
    w.n_u = std::min(n, nice_size(span));
    w.n_v = std::min(n, nice_size(chord));
  } else {
    const auto [s0, c0] = measure(false);
    const auto [s1, c1] = measure(true);
    const long p0 = long(nice_size(s0)) * nice_size(c0), p1 = long(nice_size(s1)) * nice_size(c1);
    w.transposed = p1 < p0;
    w.shear = 0;
    w.n_u = std::min(n, nice_size(w.transposed ? s1 : s0));
    w.n_v = std::min(n, nice_size(w.transposed ? c1 : c0));
  }
  w.norm = grid_.period() / std::sqrt(double(w.n_u) * w.n_v);
  // order support by (u, v) for the column passes
  std::vector<std::size_t> order(w.slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return uv_of(w.slots[a], w.transposed) < uv_of(w.slots[b], w.transposed);
  });
  std::vector<int> slots(order.size());
  std::vector<std::complex<double>> vals(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    slots[i] = w.slots[order[i]];
    vals[i] = w.values[order[i]];
  }
  w.slots = std::move(slots);
  w.values = std::move(vals);
  const auto [span, chord] = measure(w.transposed);
  w.alias_free = span <= w.n_u && chord <= w.n_v;
}

int Frame::wedge_of(const Index& idx) const {
  Index tag = idx;
  tag.k = Eigen::Vector2i::Zero();
  auto it = lookup_.find(tag);
  return it == lookup_.end() ? -1 : it->second;
}

bool Frame::contains(const Index& idx) const {
  const int w = wedge_of(idx);
  if (w < 0) return false;
  int wi, ku, kv;
  lattice_of(idx, wi, ku, kv);
  return ku >= 0 && kv >= 0 && ku < wedges_[w].n_u && kv < wedges_[w].n_v;
}

Index Frame::index_of(int wedge, int ku, int kv) const {
  const Wedge& w = wedges_.at(std::size_t(wedge));
  Index idx = w.tag;
  idx.k = w.transposed ? Eigen::Vector2i(kv, ku) : Eigen::Vector2i(ku, kv);
  return idx;
}

void Frame::lattice_of(const Index& idx, int& wedge, int& ku, int& kv) const {
  wedge = wedge_of(idx);
  if (wedge < 0) throw InvalidIndex("index orientation not in frame " + id());
  const Wedge& w = wedges_[std::size_t(wedge)];
  ku = w.transposed ? idx.k[1] : idx.k[0];
  kv = w.transposed ? idx.k[0] : idx.k[1];
}

Eigen::Vector2d Frame::location(int wedge, int ku, int kv) const {
  const Wedge& w = wedges_.at(std::size_t(wedge));
  const double L = grid_.period();
  const double du = L / w.n_u, dv = L / w.n_v;
  double xu = ku * du - w.shear * kv * dv, xv = kv * dv;
  auto reduce = [L](double x) { return x - L * std::floor(x / L + 0.5); };
  xu = reduce(xu);
  xv = reduce(xv);
  return w.transposed ? Eigen::Vector2d(xv, xu) : Eigen::Vector2d(xu, xv);
}

ParamPoint Frame::point(const Index& idx) const {
  int w, ku, kv;
  lattice_of(idx, w, ku, kv);
  if (ku < 0 || kv < 0 || ku >= wedges_[w].n_u || kv >= wedges_[w].n_v) throw InvalidIndex("translation outside lattice");
  return ParamPoint(wedges_[w].scale, wedges_[w].theta, location(w, ku, kv));
}

Parametrization Frame::parametrization(double radius, int jmax_cut) const {
  std::vector<Parametrization::Entry> rows;
  for (int wi = 0; wi < int(wedges_.size()); ++wi) {
    const Wedge& w = wedges_[wi];
    if (w.tag.j > jmax_cut) continue;
    for (int ku = 0; ku < w.n_u; ++ku)
      for (int kv = 0; kv < w.n_v; ++kv) {
        const Eigen::Vector2d x = location(wi, ku, kv);
        if (x.norm() <= radius) rows.push_back({index_of(wi, ku, kv), ParamPoint(w.scale, w.theta, x)});
      }
  }
  return Parametrization::table(std::move(rows));
}

std::complex<double> Frame::window(int wedge, int m1, int m2) const {
  const Wedge& w = wedges_.at(std::size_t(wedge));
  const double h = grid_.spacing();
  if (!w.stored) return element_window(spec_, w.tag, h * m1, h * m2);
  const int slot = grid_.slot(m1) * grid_.n + grid_.slot(m2);
  auto it = std::lower_bound(w.slots.begin(), w.slots.end(), slot, [&](int a, int b) {
    const int n = grid_.n;
    auto uv = [&](int s) {
      const int a1 = grid_.index_of_slot(s / n), a2 = grid_.index_of_slot(s % n);
      return w.transposed ? std::make_pair(a2, a1) : std::make_pair(a1, a2);
    };
    return uv(a) < uv(b);
  });
  if (it != w.slots.end() && *it == slot) return w.values[std::size_t(it - w.slots.begin())];
  return 0;
}

namespace {

// Visit the support points of a wedge with g = F conj(U), grouped by column u.
template <class Fn>
void gather(const Frame& fr, const Wedge& w, const Spectrum& F, const std::vector<int>& nonzero, Fn&& fn) {
  const FrequencyGrid& g = fr.grid();
  const int n = g.n;
  std::vector<Point> pts;
  if (w.stored) {
    pts.reserve(w.slots.size());
    for (std::size_t i = 0; i < w.slots.size(); ++i) {
      const int s = w.slots[i];
      const std::complex<double> f = F.values(s / n, s % n);
      const int m1 = g.index_of_slot(s / n), m2 = g.index_of_slot(s % n);
      pts.push_back(w.transposed ? Point{m2, m1, f * std::conj(w.values[i])} : Point{m1, m2, f * std::conj(w.values[i])});
    }
  } else {
    const double h = g.spacing();
    pts.reserve(nonzero.size());
    for (int s : nonzero) {
      const int m1 = g.index_of_slot(s / n), m2 = g.index_of_slot(s % n);
      const std::complex<double> u = element_window(fr.spec(), w.tag, h * m1, h * m2);
      if (u == 0.0) continue;
      const std::complex<double> val = F.values(s / n, s % n) * std::conj(u);
      pts.push_back(w.transposed ? Point{m2, m1, val} : Point{m1, m2, val});
    }
    std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.u < b.u; });
  }
  fn(pts);
}

}  // namespace

CoefficientSet Frame::analyze(const Spectrum& F) const {
  if (F.grid.n != grid_.n || F.grid.extent != grid_.extent) throw ParameterError("spectrum grid differs from frame grid");
  CoefficientSet out;
  out.frame_id = spec_.id();
  out.grid_id = grid_.id();
  out.blocks.reserve(wedges_.size());
  const int n = grid_.n;
  const double h2 = grid_.spacing() * grid_.spacing();
  std::vector<int> nonzero;
  if (spec_.family == Family::shearlet_compact) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (F.values(p, q) != 0.0) nonzero.push_back(p * n + q);
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> buf, tmp;
  for (const Wedge& w : wedges_) {
    CMatrix C = CMatrix::Zero(w.n_u, w.n_v);
    gather(*this, w, F, nonzero, [&](const std::vector<Point>& pts) {
      buf.assign(std::size_t(w.n_v), 0.0);
      for (std::size_t i = 0; i < pts.size();) {
        std::size_t k = i;
        std::fill(buf.begin(), buf.end(), 0.0);
        while (k < pts.size() && pts[k].u == pts[i].u) {
          buf[std::size_t(pmod(pts[k].v, w.n_v))] += pts[k].g;
          ++k;
        }
        dft(fft, tmp, buf, true);
        const int u = pts[i].u;
        const int ru = pmod(u, w.n_u);
        for (int kv = 0; kv < w.n_v; ++kv) {
          // e^{-2 pi i s k_v u / n_v}, reduced to keep the argument small
          const double t = w.shear * kv * double(u) / w.n_v;
          C(ru, kv) += tmp[std::size_t(kv)] * cis(-2 * kPi * (t - std::floor(t)));
        }
        i = k;
      }
    });
    buf.resize(std::size_t(w.n_u));
    for (int kv = 0; kv < w.n_v; ++kv) {
      for (int ku = 0; ku < w.n_u; ++ku) buf[std::size_t(ku)] = C(ku, kv);
      dft(fft, tmp, buf, true);
      for (int ku = 0; ku < w.n_u; ++ku) C(ku, kv) = tmp[std::size_t(ku)] * (w.norm * h2);
    }
    out.blocks.push_back(std::move(C));
  }
  return out;
}

Spectrum Frame::synthesize(const CoefficientSet& c) const {
  if (spec_.family == Family::shearlet_compact || !spec_.parseval())
    throw UnsupportedDual("synthesis needs a Parseval family; " + spec_.id() + " has no implemented dual");
  if (c.blocks.size() != wedges_.size()) throw ParameterError("coefficient set does not match frame " + id());
  Spectrum F(grid_);
  const int n = grid_.n;
  Eigen::FFT<double> fft;
  std::vector<cplx> buf, tmp;
  for (std::size_t wi = 0; wi < wedges_.size(); ++wi) {
    const Wedge& w = wedges_[wi];
    const CMatrix& C = c.blocks[wi];
    if (C.rows() != w.n_u || C.cols() != w.n_v) throw ParameterError("coefficient block shape mismatch");
    if (C.squaredNorm() == 0) continue;
    CMatrix Q(w.n_u, w.n_v);
    buf.resize(std::size_t(w.n_u));
    for (int kv = 0; kv < w.n_v; ++kv) {
      for (int ku = 0; ku < w.n_u; ++ku) buf[std::size_t(ku)] = C(ku, kv);
      dft(fft, tmp, buf, false);
      for (int ku = 0; ku < w.n_u; ++ku) Q(ku, kv) = tmp[std::size_t(ku)];
    }
    buf.resize(std::size_t(w.n_v));
    for (std::size_t i = 0; i < w.slots.size();) {
      const int s0 = w.slots[i];
      const int a1 = grid_.index_of_slot(s0 / n), a2 = grid_.index_of_slot(s0 % n);
      const int u = w.transposed ? a2 : a1;
      const int ru = pmod(u, w.n_u);
      for (int kv = 0; kv < w.n_v; ++kv) {
        const double t = w.shear * kv * double(u) / w.n_v;
        buf[std::size_t(kv)] = Q(ru, kv) * cis(2 * kPi * (t - std::floor(t)));
      }
      dft(fft, tmp, buf, false);
      std::size_t k = i;
      for (; k < w.slots.size(); ++k) {
        const int s = w.slots[k];
        const int b1 = grid_.index_of_slot(s / n), b2 = grid_.index_of_slot(s % n);
        const int uk = w.transposed ? b2 : b1, vk = w.transposed ? b1 : b2;
        if (uk != u) break;
        F.values(s / n, s % n) += w.norm * w.values[k] * tmp[std::size_t(pmod(vk, w.n_v))];
      }
      i = k;
    }
  }
  return F;
}

Spectrum Frame::element(const Index& idx) const {
  int wi, ku, kv;
  lattice_of(idx, wi, ku, kv);
  const Wedge& w = wedges_[std::size_t(wi)];
  if (ku < 0 || kv < 0 || ku >= w.n_u || kv >= w.n_v) throw InvalidIndex("translation outside lattice");
  Spectrum F(grid_);
  const int n = grid_.n;
  auto put = [&](int p, int q, std::complex<double> u) {
    const int m1 = grid_.index_of_slot(p), m2 = grid_.index_of_slot(q);
    const int uu = w.transposed ? m2 : m1, vv = w.transposed ? m1 : m2;
    double t = double(ku) * uu / w.n_u + double(kv) * vv / w.n_v - w.shear * kv * double(uu) / w.n_v;
    t -= std::floor(t);
    F.values(p, q) = w.norm * u * cis(-2 * kPi * t);
  };
  if (w.stored) {
    for (std::size_t i = 0; i < w.slots.size(); ++i) put(w.slots[i] / n, w.slots[i] % n, w.values[i]);
  } else {
    const double h = grid_.spacing();
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        put(p, q, element_window(spec_, w.tag, h * grid_.index_of_slot(p), h * grid_.index_of_slot(q)));
  }
  return F;
}

RMatrix Frame::symbol() const {
  const int n = grid_.n;
  RMatrix s = RMatrix::Zero(n, n);
  const double h = grid_.spacing();
  for (const Wedge& w : wedges_) {
    if (w.stored) {
      for (std::size_t i = 0; i < w.slots.size(); ++i) s(w.slots[i] / n, w.slots[i] % n) += std::norm(w.values[i]);
    } else {
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          s(p, q) += std::norm(element_window(spec_, w.tag, h * grid_.index_of_slot(p), h * grid_.index_of_slot(q)));
    }
  }
  return s;
}

cplx inner_product(const std::function<cplx(const Eigen::Vector2d&)>& a,
                   const std::function<cplx(const Eigen::Vector2d&)>& b, const FrequencyGrid& grid) {
  const int n = grid.n;
  const double h = grid.spacing();
  cplx sum = 0;
  double ea = 0, eb = 0, ra = 0, rb = 0;
  for (int m1 = -n / 2; m1 < n / 2; ++m1)
    for (int m2 = -n / 2; m2 < n / 2; ++m2) {
      const Eigen::Vector2d xi(h * m1, h * m2);
      const cplx va = a(xi), vb = b(xi);
      sum += va * std::conj(vb);
      const bool ring = m1 == -n / 2 || m1 == n / 2 - 1 || m2 == -n / 2 || m2 == n / 2 - 1;
      ea += std::norm(va);
      eb += std::norm(vb);
      if (ring) {
        ra += std::norm(va);
        rb += std::norm(vb);
      }
    }
  if ((ea > 0 && ra > 1e-6 * ea) || (eb > 0 && rb > 1e-6 * eb))
    throw ResolutionError(grid.id() + ": element energy reaches the grid boundary");
  return h * h * sum;
}

CoefficientSet analyze(const DigitalImage& f, const Frame& frame) { return frame.analyze(to_spectrum(f)); }

std::vector<cplx> analyze(const DigitalImage& f, const Frame& frame, const std::vector<Index>& indices) {
  for (const Index& idx : indices)
    if (!frame.contains(idx)) throw InvalidIndex("index outside frame " + frame.id());
  const CoefficientSet c = analyze(f, frame);
  std::vector<cplx> out;
  out.reserve(indices.size());
  for (const Index& idx : indices) {
    int w, ku, kv;
    frame.lattice_of(idx, w, ku, kv);
    out.push_back(c.blocks[std::size_t(w)](ku, kv));
  }
  return out;
}

DigitalImage synthesize(const CoefficientSet& c, const Frame& frame) { return to_image(frame.synthesize(c)); }

void write_coefficients_csv(std::ostream& os, const CoefficientSet& c, const Frame& frame) {
  os << "cone,j,l,k1,k2,re,im\n";
  const auto old = os.precision(17);
  for (std::size_t wi = 0; wi < c.blocks.size(); ++wi) {
    const CMatrix& C = c.blocks[wi];
    for (int ku = 0; ku < C.rows(); ++ku)
      for (int kv = 0; kv < C.cols(); ++kv) {
        const Index idx = frame.index_of(int(wi), ku, kv);
        os << cone_id(idx.cone) << ',' << idx.j << ',' << idx.l << ',' << idx.k[0] << ',' << idx.k[1] << ','
           << C(ku, kv).real() << ',' << C(ku, kv).imag() << '\n';
      }
  }
  os.precision(old);
}

DigitalImage random_bandlimited_image(const FrequencyGrid& grid, double radius, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Spectrum F(grid);
  const int n = grid.n;
  const double h = grid.spacing();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double r = h * std::hypot(double(grid.index_of_slot(p)), double(grid.index_of_slot(q)));
      const double a = nd(rng), b = nd(rng);
      if (r <= radius) F.values(p, q) = cplx(a, b);
    }
  CMatrix sym = F.values;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) sym(p, q) = 0.5 * (F.values(p, q) + std::conj(F.values((n - p) % n, (n - q) % n)));
  F.values = sym;
  DigitalImage f = to_image(F);
  f.values = f.values.real().cast<cplx>();
  return f;
}

}  // namespace pmol
