#include "pmol/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

namespace pmol {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double reduce(double x, double L) { return x - L * std::floor(x / L + 0.5); }

// Omega with b moved to the periodic copy nearest to a.
double torus_omega(const ParamPoint& a, const ParamPoint& b, double L) {
  ParamPoint q = b;
  const Eigen::Vector2d d = a.x - b.x;
  q.x = a.x - Eigen::Vector2d(reduce(d[0], L), reduce(d[1], L));
  return omega(a, q);
}

// Support of a stored wedge sorted by grid slot.
struct SlotList {
  std::vector<int> slot;
  std::vector<cplx> value;
};

SlotList slot_sorted(const Wedge& w) {
  std::vector<std::size_t> order(w.slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w.slots[a] < w.slots[b]; });
  SlotList out;
  out.slot.reserve(order.size());
  out.value.reserve(order.size());
  for (std::size_t i : order) {
    out.slot.push_back(w.slots[i]);
    out.value.push_back(w.values[i]);
  }
  return out;
}

struct Overlap {
  std::vector<int> m1, m2;
  std::vector<cplx> w;  // U_a conj(U_b)
};

Overlap overlap(const Frame& a, int wa, const Frame& b, int wb) {
  const FrequencyGrid& g = a.grid();
  const int n = g.n;
  const double h = g.spacing();
  const Wedge& A = a.wedges()[std::size_t(wa)];
  const Wedge& B = b.wedges()[std::size_t(wb)];
  Overlap o;
  auto push = [&](int slot, cplx v) {
    if (v == 0.0) return;
    o.m1.push_back(g.index_of_slot(slot / n));
    o.m2.push_back(g.index_of_slot(slot % n));
    o.w.push_back(v);
  };
  if (A.stored && B.stored) {
    const SlotList la = slot_sorted(A), lb = slot_sorted(B);
    std::size_t i = 0, k = 0;
    while (i < la.slot.size() && k < lb.slot.size()) {
      if (la.slot[i] < lb.slot[k]) ++i;
      else if (la.slot[i] > lb.slot[k]) ++k;
      else {
        push(la.slot[i], la.value[i] * std::conj(lb.value[k]));
        ++i;
        ++k;
      }
    }
  } else if (A.stored || B.stored) {
    const Wedge& S = A.stored ? A : B;
    const Frame& other = A.stored ? b : a;
    const Index tag = A.stored ? B.tag : A.tag;
    for (std::size_t i = 0; i < S.slots.size(); ++i) {
      const int s = S.slots[i];
      const cplx u = element_window(other.spec(), tag, h * g.index_of_slot(s / n), h * g.index_of_slot(s % n));
      push(s, A.stored ? S.values[i] * std::conj(u) : u * std::conj(S.values[i]));
    }
  } else {
    throw UnsupportedDual("Gramian between two compact shearlet frames is not supported on a finite grid");
  }
  return o;
}

void check_grids(const Frame& a, const Frame& b) {
  if (a.grid().n != b.grid().n || a.grid().extent != b.grid().extent)
    throw ParameterError("frames live on different grids");
}

struct Element {
  int wedge, ku, kv;
};

std::vector<Element> elements_in_disc(const Frame& f, int jmin, int jmax, double radius) {
  std::vector<Element> out;
  for (int wi = 0; wi < int(f.wedges().size()); ++wi) {
    const Wedge& w = f.wedges()[std::size_t(wi)];
    if (w.tag.j < jmin || w.tag.j > jmax) continue;
    for (int ku = 0; ku < w.n_u; ++ku)
      for (int kv = 0; kv < w.n_v; ++kv)
        if (f.location(wi, ku, kv).norm() <= radius) out.push_back({wi, ku, kv});
  }
  return out;
}

// Which orientation pairs have overlapping frequency support; all pairs when a frame is compact.
std::vector<std::vector<int>> overlapping_wedges(const Frame& a, const Frame& b) {
  const int na = int(a.wedges().size()), nb = int(b.wedges().size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(na));
  const bool dense = !std::all_of(a.wedges().begin(), a.wedges().end(), [](const Wedge& w) { return w.stored; }) ||
                     !std::all_of(b.wedges().begin(), b.wedges().end(), [](const Wedge& w) { return w.stored; });
  if (dense) {
    for (int i = 0; i < na; ++i)
      for (int k = 0; k < nb; ++k) out[std::size_t(i)].push_back(k);
    return out;
  }
  const int n = a.grid().n;
  std::vector<std::vector<int>> at(std::size_t(n) * n);
  for (int k = 0; k < nb; ++k)
    for (int s : b.wedges()[std::size_t(k)].slots) at[std::size_t(s)].push_back(k);
  std::vector<std::set<int>> acc(static_cast<std::size_t>(na));
  for (int i = 0; i < na; ++i)
    for (int s : a.wedges()[std::size_t(i)].slots)
      for (int k : at[std::size_t(s)]) acc[std::size_t(i)].insert(k);
  for (int i = 0; i < na; ++i) out[std::size_t(i)].assign(acc[std::size_t(i)].begin(), acc[std::size_t(i)].end());
  return out;
}

}  // namespace

GramianSample gramian_pairs(const Frame& a, const Frame& b, const std::vector<std::pair<Index, Index>>& pairs) {
  check_grids(a, b);
  const double h = a.grid().spacing(), L = a.grid().period();
  GramianSample out;
  out.a.resize(pairs.size());
  out.b.resize(pairs.size());
  out.entries.assign(pairs.size(), 0.0);
  out.omega.assign(pairs.size(), 1.0);
  std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int wa = a.wedge_of(pairs[i].first), wb = b.wedge_of(pairs[i].second);
    if (!a.contains(pairs[i].first) || !b.contains(pairs[i].second)) throw InvalidIndex("pair index outside its frame");
    out.a[i] = {pairs[i].first, a.point(pairs[i].first)};
    out.b[i] = {pairs[i].second, b.point(pairs[i].second)};
    out.omega[i] = torus_omega(out.a[i].point, out.b[i].point, L);
    groups[{wa, wb}].push_back(i);
  }
  for (const auto& [key, members] : groups) {
    const Overlap o = overlap(a, key.first, b, key.second);
    const double scale = a.wedges()[std::size_t(key.first)].norm * b.wedges()[std::size_t(key.second)].norm * h * h;
    for (std::size_t i : members) {
      const Eigen::Vector2d d = out.a[i].point.x - out.b[i].point.x;
      const double c1 = kTwoPi * h * d[0], c2 = kTwoPi * h * d[1];
      cplx sum = 0;
      for (std::size_t t = 0; t < o.w.size(); ++t) {
        const double ph = -(c1 * o.m1[t] + c2 * o.m2[t]);
        sum += o.w[t] * cplx(std::cos(ph), std::sin(ph));
      }
      out.entries[i] = scale * sum;
    }
  }
  return out;
}

GramianBlock compute_gramian(const Frame& a, const Frame& b, const std::vector<Index>& rows,
                             const std::vector<Index>& cols) {
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(rows.size() * cols.size());
  for (const Index& r : rows)
    for (const Index& c : cols) pairs.emplace_back(r, c);
  const GramianSample s = gramian_pairs(a, b, pairs);
  GramianBlock g;
  g.entries.resize(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
  g.omega.resize(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    g.rows.push_back(s.a[i * cols.size()]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      g.entries(Eigen::Index(i), Eigen::Index(k)) = s.entries[i * cols.size() + k];
      g.omega(Eigen::Index(i), Eigen::Index(k)) = s.omega[i * cols.size() + k];
    }
  }
  for (std::size_t k = 0; k < cols.size(); ++k) g.cols.push_back(s.b[k]);
  return g;
}

std::vector<std::pair<Index, Index>> sample_pairs(const Frame& a, const Frame& b, const PairSampling& opt) {
  check_grids(a, b);
  const double L = a.grid().period();
  const std::vector<Element> ea = elements_in_disc(a, opt.jmin_a, opt.jmax_a, opt.radius);
  const std::vector<Element> eb = elements_in_disc(b, opt.jmin_b, opt.jmax_b, opt.radius);
  if (ea.empty() || eb.empty()) throw InsufficientData("no elements inside the sampling disc");
  std::vector<std::vector<std::size_t>> b_by_wedge(b.wedges().size());
  for (std::size_t i = 0; i < eb.size(); ++i) b_by_wedge[std::size_t(eb[i].wedge)].push_back(i);
  const auto partners = overlapping_wedges(a, b);
  // cumulative element counts of the overlapping b orientations, per a orientation
  std::vector<std::vector<std::pair<std::size_t, int>>> cumulative(a.wedges().size());
  for (std::size_t wa = 0; wa < a.wedges().size(); ++wa) {
    std::size_t total = 0;
    for (int wb : partners[wa]) {
      if (b_by_wedge[std::size_t(wb)].empty()) continue;
      total += b_by_wedge[std::size_t(wb)].size();
      cumulative[wa].emplace_back(total, wb);
    }
  }
  std::mt19937_64 rng(opt.seed);
  auto touches_top = [&](const Element& x, const Element& y) {
    return a.wedges()[std::size_t(x.wedge)].tag.j == opt.jmax_a || b.wedges()[std::size_t(y.wedge)].tag.j == opt.jmax_b;
  };
  std::map<std::pair<int, int>, std::vector<std::pair<std::size_t, std::size_t>>> strata;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::uniform_int_distribution<std::size_t> pick_a(0, ea.size() - 1);
  for (std::size_t draw = 0; draw < opt.pool; ++draw) {
    const std::size_t ia = pick_a(rng);
    const auto& cum = cumulative[std::size_t(ea[ia].wedge)];
    if (cum.empty()) continue;
    const std::size_t r = std::uniform_int_distribution<std::size_t>(0, cum.back().first - 1)(rng);
    const auto it = std::upper_bound(cum.begin(), cum.end(), r,
                                     [](std::size_t v, const std::pair<std::size_t, int>& c) { return v < c.first; });
    const auto& members = b_by_wedge[std::size_t(it->second)];
    const std::size_t before = it == cum.begin() ? 0 : std::prev(it)->first;
    const std::size_t ib = members[r - before];
    if (opt.require_top && !touches_top(ea[ia], eb[ib])) continue;
    if (!seen.insert({ia, ib}).second) continue;
    const Index xa = a.index_of(ea[ia].wedge, ea[ia].ku, ea[ia].kv);
    const Index xb = b.index_of(eb[ib].wedge, eb[ib].ku, eb[ib].kv);
    const double w = torus_omega(a.point(xa), b.point(xb), L);
    const int ds = std::min(10, int(std::lround(std::abs(a.point(xa).s - b.point(xb).s))));
    strata[{ds, int(std::floor(std::log10(w)))}].emplace_back(ia, ib);
  }
  // round robin over strata
  std::vector<std::pair<Index, Index>> out;
  std::vector<std::size_t> cursor(strata.size(), 0);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>*> lists;
  for (auto& [key, v] : strata) lists.push_back(&v);
  bool progress = true;
  while (out.size() < opt.pairs && progress) {
    progress = false;
    for (std::size_t s = 0; s < lists.size() && out.size() < opt.pairs; ++s) {
      if (cursor[s] >= lists[s]->size()) continue;
      const auto [ia, ib] = (*lists[s])[cursor[s]++];
      out.emplace_back(a.index_of(ea[ia].wedge, ea[ia].ku, ea[ia].kv), b.index_of(eb[ib].wedge, eb[ib].ku, eb[ib].kv));
      progress = true;
    }
  }
  return out;
}

DecayFit decay_fit(const std::vector<cplx>& entries, const std::vector<double>& omega, double omega_min) {
  if (entries.size() != omega.size()) throw ParameterError("entries and omega differ in length");
  DecayFit f;
  f.omega_min = omega_min;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (omega[i] < omega_min) continue;
    const double v = std::abs(entries[i]);
    if (v <= kEntryFloor) {
      ++f.floor_count;
      continue;
    }
    x.push_back(std::log(omega[i]));
    y.push_back(std::log(v));
  }
  f.n_pairs = int(x.size());
  if (x.size() < 30)
    throw InsufficientData("decay fit needs 30 pairs above the floor, got " + std::to_string(x.size()) + " (" +
                           std::to_string(f.floor_count) + " at floor)");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(x.size());
  my /= double(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw InsufficientData("omega values do not vary");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.residual = std::sqrt(rss / double(x.size()));
  return f;
}

DecayFit decay_fit(const GramianBlock& g, double omega_min) {
  std::vector<cplx> e(g.entries.data(), g.entries.data() + g.entries.size());
  std::vector<double> w(g.omega.data(), g.omega.data() + g.omega.size());
  return decay_fit(e, w, omega_min);
}

DecayFit decay_fit(const GramianSample& g, double omega_min) { return decay_fit(g.entries, g.omega, omega_min); }

double max_weighted_entry(const GramianSample& g, double N) {
  double m = 0;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(g.entries[i]) * std::pow(g.omega[i], N));
  return m;
}

double operator_p_norm_bound(const CMatrix& A, double p) {
  if (!(p > 0)) throw ParameterError("p must be positive");
  const double r = std::min(1.0, p);
  const Eigen::MatrixXd P = A.cwiseAbs().array().pow(r).matrix();
  const double rows = P.rows() ? P.rowwise().sum().maxCoeff() : 0.0;
  const double cols = P.cols() ? P.colwise().sum().maxCoeff() : 0.0;
  return std::pow(std::max(rows, cols), 1 / r);
}

double lp_norm(const Eigen::VectorXcd& x, double p) {
  if (!(p > 0)) throw ParameterError("p must be positive");
  return std::pow(x.cwiseAbs().array().pow(p).sum(), 1 / p);
}

std::vector<SparsityLevel> sparsity_levels(int jmax_a, int jmax_b, int window, double period, int steps) {
  if (steps < 2) throw ParameterError("a trajectory needs at least two steps");
  std::vector<SparsityLevel> out;
  for (int t = steps - 1; t >= 0; --t)
    out.push_back({jmax_a - t, jmax_b - t, std::ldexp(double(window), -t) * period / 64});
  return out;
}

namespace {

// `count` lattice elements nearest to the origin for each orientation at scales <= jmax.
std::vector<Index> probes(const Frame& f, int jmax, int count) {
  std::vector<Index> out;
  for (int wi = 0; wi < int(f.wedges().size()); ++wi) {
    const Wedge& w = f.wedges()[std::size_t(wi)];
    if (w.tag.j > jmax) continue;
    std::vector<std::pair<double, Element>> cand;
    for (int ku = 0; ku < w.n_u; ++ku)
      for (int kv = 0; kv < w.n_v; ++kv) cand.push_back({f.location(wi, ku, kv).norm(), {wi, ku, kv}});
    const std::size_t keep = std::min<std::size_t>(std::size_t(count), cand.size());
    std::partial_sort(cand.begin(), cand.begin() + std::ptrdiff_t(keep), cand.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < keep; ++i) out.push_back(f.index_of(wi, cand[i].second.ku, cand[i].second.kv));
  }
  return out;
}

// Relative energy error of a compact probe on the grid: spectrum beyond the extent
// plus the spatial wrap of a support longer than the torus.
double outside_fraction(const Frame& f, const Index& idx, const Spectrum& F) {
  const Wedge& w = f.wedges()[std::size_t(f.wedge_of(idx))];
  // windows are unit-energy, so the continuous energy is 2^{3j/2} before the lattice weight
  const double exact = idx.cone == Cone::none ? 1.0 : std::exp2(1.5 * idx.j);
  return std::abs(1 - F.norm2() / (w.norm * w.norm * exact));
}

// sums[level] of |<probe, e>|^r over elements e of `other` inside each level's window.
void accumulate(const Frame& probe_frame, const Frame& other, const std::vector<Index>& probe_set,
                const std::vector<SparsityLevel>& levels, bool probe_is_a, double r, std::vector<double>& sup,
                std::vector<double>& periodization) {
  const double L = probe_frame.grid().period();
  const bool compact_probe = probe_frame.spec().family == Family::shearlet_compact;
  for (const Index& idx : probe_set) {
    const Spectrum F = probe_frame.element(idx);
    const ParamPoint pp = probe_frame.point(idx);
    const CoefficientSet c = other.analyze(F);
    std::vector<double> sums(levels.size(), 0.0);
    for (std::size_t wi = 0; wi < other.wedges().size(); ++wi) {
      const int j = other.wedges()[wi].tag.j;
      const CMatrix& B = c.blocks[wi];
      for (int ku = 0; ku < B.rows(); ++ku)
        for (int kv = 0; kv < B.cols(); ++kv) {
          const double v = std::abs(B(ku, kv));
          if (v == 0) continue;
          const Eigen::Vector2d d = other.location(int(wi), ku, kv) - pp.x;
          const double dist = std::hypot(reduce(d[0], L), reduce(d[1], L));
          const double vr = std::pow(v, r);
          for (std::size_t s = 0; s < levels.size(); ++s) {
            const int jlim = probe_is_a ? levels[s].jmax_b : levels[s].jmax_a;
            if (j <= jlim && dist <= levels[s].radius) sums[s] += vr;
          }
        }
    }
    for (std::size_t s = 0; s < levels.size(); ++s) {
      const int plim = probe_is_a ? levels[s].jmax_a : levels[s].jmax_b;
      if (idx.j > plim) continue;
      sup[s] = std::max(sup[s], sums[s]);
      if (compact_probe) periodization[s] = std::max(periodization[s], outside_fraction(probe_frame, idx, F));
    }
  }
}

}  // namespace

SparsityReport sparsity_equivalence_test(const Frame& a, const Frame& b, double p,
                                         const std::vector<SparsityLevel>& levels, int probes_per_wedge) {
  if (!(p > 0 && p <= 1)) throw ParameterError("sparsity equivalence needs 0 < p <= 1");
  if (levels.size() < 2) throw ParameterError("need at least two truncation levels");
  check_grids(a, b);
  int ja = 0, jb = 0;
  for (const auto& l : levels) {
    ja = std::max(ja, l.jmax_a);
    jb = std::max(jb, l.jmax_b);
  }
  const double r = p;
  std::vector<double> row(levels.size(), 0.0), col(levels.size(), 0.0), per(levels.size(), 0.0);
  accumulate(a, b, probes(a, ja, probes_per_wedge), levels, true, r, row, per);
  accumulate(b, a, probes(b, jb, probes_per_wedge), levels, false, r, col, per);
  SparsityReport rep;
  rep.p = p;
  for (std::size_t s = 0; s < levels.size(); ++s) {
    SparsityStep st;
    st.level = levels[s];
    st.row_sup = row[s];
    st.col_sup = col[s];
    st.bound = std::pow(std::max(row[s], col[s]), 1 / r);
    st.periodization = per[s];
    rep.steps.push_back(st);
  }
  const double last = rep.steps.back().bound, prev = rep.steps[rep.steps.size() - 2].bound;
  rep.final_growth = prev > 0 ? last / prev - 1 : 0;
  rep.pass = rep.final_growth < 0.02;
  return rep;
}

namespace {
void index_fields(std::ostream& os, const Index& i) {
  os << cone_id(i.cone) << ',' << i.j << ',' << i.l << ',' << i.k[0] << ',' << i.k[1];
}
}  // namespace

void write_gramian_csv(std::ostream& os, const GramianSample& g) {
  os << "a_cone,a_j,a_l,a_k1,a_k2,b_cone,b_j,b_l,b_k1,b_k2,re,im,omega\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    index_fields(os, g.a[i].idx);
    os << ',';
    index_fields(os, g.b[i].idx);
    os << ',' << g.entries[i].real() << ',' << g.entries[i].imag() << ',' << g.omega[i] << '\n';
  }
  os.precision(old);
}

void write_gramian_csv(std::ostream& os, const GramianBlock& g) {
  os << "a_cone,a_j,a_l,a_k1,a_k2,b_cone,b_j,b_l,b_k1,b_k2,re,im,omega\n";
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < g.entries.rows(); ++i)
    for (Eigen::Index k = 0; k < g.entries.cols(); ++k) {
      index_fields(os, g.rows[std::size_t(i)].idx);
      os << ',';
      index_fields(os, g.cols[std::size_t(k)].idx);
      os << ',' << g.entries(i, k).real() << ',' << g.entries(i, k).imag() << ',' << g.omega(i, k) << '\n';
    }
  os.precision(old);
}

void write_decay_fit(std::ostream& os, const DecayFit& f) {
  const auto old = os.precision(17);
  os << "{\n  slope: " << f.slope << ",\n  intercept: " << f.intercept << ",\n  residual: " << f.residual
     << ",\n  n_pairs: " << f.n_pairs << ",\n  floor_count: " << f.floor_count << ",\n  omega_min: " << f.omega_min
     << "\n}\n";
  os.precision(old);
}

}  // namespace pmol
