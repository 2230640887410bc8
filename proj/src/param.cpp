#include "pmol/param.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>

namespace pmol {

namespace {

constexpr double kPi = std::numbers::pi;

int half_count(int j) { return (1 << (j / 2)) / 2; }  // 2^{floor(j/2)-1}, or 0 at the coarsest scales

void check_scale(const Index& idx) {
  if (idx.j < 0) throw InvalidIndex("negative scale j=" + std::to_string(idx.j));
  if (idx.j > 40) throw InvalidIndex("scale j=" + std::to_string(idx.j) + " out of supported range");
}

Eigen::Matrix2d canonical_lattice(int j, double theta) {
  return rotation(-theta) * parabolic_dilation(std::ldexp(1.0, -j));
}

Eigen::Matrix2d shearlet_lattice(int cone, int j, int l) {
  const bool vertical = (cone % 2) == 1;
  return shear<double>(l, j, vertical).inverse() * parabolic_dilation(std::ldexp(1.0, -j), vertical);
}

double shearlet_angle(int cone, int j, int l) {
  return cone * kPi / 2 + std::atan(-double(l) * std::ldexp(1.0, -(j / 2)));
}

}  // namespace

ParamPoint canonical_point(const Index& idx, AngleRange range) {
  check_scale(idx);
  const int a = idx.j / 2;
  const bool ok = range == AngleRange::half ? std::abs(idx.l) <= half_count(idx.j)
                                            : (idx.l >= -(1 << a) && idx.l < (1 << a));
  if (!ok) throw InvalidIndex("direction l=" + std::to_string(idx.l) + " outside canonical range at j=" +
                              std::to_string(idx.j));
  const double theta = idx.l * std::ldexp(kPi, -a);
  Eigen::Vector2d x = canonical_lattice(idx.j, theta) * idx.k.cast<double>();
  return {double(idx.j), theta, x};
}

ParamPoint shearlet_point(const Index& idx) {
  check_scale(idx);
  if (idx.cone == Cone::none) throw InvalidIndex("shearlet index without cone flag");
  const int a = idx.j / 2;
  if (std::abs(idx.l) > (1 << a))
    throw InvalidIndex("shear l=" + std::to_string(idx.l) + " outside shearlet range at j=" + std::to_string(idx.j));
  const int c = cone_id(idx.cone);
  Eigen::Vector2d x = shearlet_lattice(c, idx.j, idx.l) * idx.k.cast<double>();
  return {double(idx.j), shearlet_angle(c, idx.j, idx.l), x};
}

Parametrization Parametrization::canonical(AngleRange range) {
  Parametrization p;
  p.kind_ = ParamKind::canonical;
  p.range_ = range;
  return p;
}

Parametrization Parametrization::shearlet() {
  Parametrization p;
  p.kind_ = ParamKind::shearlet;
  return p;
}

Parametrization Parametrization::table(std::vector<Entry> entries) {
  Parametrization p;
  p.kind_ = ParamKind::table;
  p.entries_ = std::move(entries);
  p.lookup_.reserve(p.entries_.size());
  for (std::size_t i = 0; i < p.entries_.size(); ++i) p.lookup_.emplace(p.entries_[i].first, i);
  return p;
}

bool Parametrization::contains(const Index& idx) const {
  if (idx.j < 0) return false;
  switch (kind_) {
    case ParamKind::canonical:
      if (idx.cone != Cone::none) return false;
      return range_ == AngleRange::half ? std::abs(idx.l) <= half_count(idx.j)
                                        : (idx.l >= -(1 << (idx.j / 2)) && idx.l < (1 << (idx.j / 2)));
    case ParamKind::shearlet:
      return idx.cone != Cone::none && std::abs(idx.l) <= (1 << (idx.j / 2));
    case ParamKind::table:
      return lookup_.count(idx) > 0;
  }
  return false;
}

ParamPoint Parametrization::operator()(const Index& idx) const {
  switch (kind_) {
    case ParamKind::canonical: return canonical_point(idx, range_);
    case ParamKind::shearlet: return shearlet_point(idx);
    case ParamKind::table: {
      auto it = lookup_.find(idx);
      if (it == lookup_.end()) throw InvalidIndex("index not in parametrization table");
      return entries_[it->second].second;
    }
  }
  throw InvalidIndex("unknown parametrization kind");
}

std::vector<Orientation> Parametrization::orientations(int j) const {
  std::vector<Orientation> out;
  if (kind_ == ParamKind::table) throw ParameterError("table parametrizations have no lattice orientations");
  const int a = j / 2;
  if (kind_ == ParamKind::canonical) {
    const int lo = range_ == AngleRange::half ? -half_count(j) : -(1 << a);
    const int hi = range_ == AngleRange::half ? half_count(j) : (1 << a) - 1;
    for (int l = lo; l <= hi; ++l) {
      const double theta = l * std::ldexp(kPi, -a);
      out.push_back({Cone::none, j, l, wrap_angle(theta), canonical_lattice(j, theta)});
    }
  } else {
    for (int c = 0; c < 2; ++c)
      for (int l = -(1 << a); l <= (1 << a); ++l)
        out.push_back({Cone(c), j, l, wrap_angle(shearlet_angle(c, j, l)), shearlet_lattice(c, j, l)});
  }
  return out;
}

std::vector<Parametrization::Entry> enumerate(const Parametrization& param, int jmax, int kmax) {
  std::vector<Parametrization::Entry> out;
  if (param.kind() == ParamKind::table) {
    for (const auto& e : param.entries())
      if (e.first.j <= jmax && e.first.k.cwiseAbs().maxCoeff() <= kmax) out.push_back(e);
    return out;
  }
  for (int j = 0; j <= jmax; ++j)
    for (const auto& o : param.orientations(j))
      for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
          Index idx{o.cone, j, o.l, Eigen::Vector2i(k1, k2)};
          out.push_back({idx, ParamPoint(double(j), o.theta, o.lattice * Eigen::Vector2d(k1, k2))});
        }
  return out;
}

namespace {

// Accumulates sum over one orientation's translation window of omega^{-k} for
// each requested exponent, split into the inner window and the doubled window.
struct ShellAccumulator {
  const std::vector<double>& ks;
  std::vector<double> inner, outer;  // per exponent

  explicit ShellAccumulator(const std::vector<double>& k) : ks(k), inner(k.size(), 0.0), outer(k.size(), 0.0) {}

  void add(double w_inv, bool in_inner) {
    auto& dst = in_inner ? inner : outer;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double k = ks[i];
      double t;
      if (k == 1.0) t = w_inv;
      else if (k == 2.0) t = w_inv * w_inv;
      else if (k == 3.0) t = w_inv * w_inv * w_inv;
      else t = std::pow(w_inv, k);
      dst[i] += t;
    }
  }
};

// Orientation-level sum with the window centred on the lattice point nearest the probe.
// probe_first selects which point supplies e in the distance (the A-system point always does).
void orientation_sum(const ParamPoint& probe, const Orientation& o, bool probe_first, int window, bool doubled,
                     ShellAccumulator& acc) {
  const Eigen::Vector2d c = o.lattice.inverse() * probe.x;
  const int c1 = int(std::lround(c[0])), c2 = int(std::lround(c[1]));
  const int reach = doubled ? 2 * window : window;
  const double dth = angle_gap(probe.theta, o.theta);
  const double base = std::exp2(std::abs(probe.s - o.j));
  const double sc = std::exp2(std::min(probe.s, double(o.j)));
  const double th_e = probe_first ? probe.theta : o.theta;
  const Eigen::Vector2d e(std::cos(th_e), -std::sin(th_e));
  const Eigen::Vector2d col1 = o.lattice.col(0), col2 = o.lattice.col(1);
  const double d0 = dth * dth;
  const std::size_t nk = acc.ks.size();
  const bool fast3 = nk == 2 && acc.ks[0] == 1.0 && acc.ks[1] == 3.0;

  for (int i1 = -reach; i1 <= reach; ++i1) {
    const bool row_inner = std::abs(i1) <= window;
    Eigen::Vector2d x = col1 * double(c1 + i1) + col2 * double(c2 - reach) - probe.x;
    double s_in1 = 0, s_in3 = 0, s_out1 = 0, s_out3 = 0;
    for (int i2 = -reach; i2 <= reach; ++i2, x += col2) {
      const double dx2 = x.squaredNorm();
      const double proj = std::abs(e.dot(x));
      const double w = base * (1.0 + sc * (d0 + dx2 + proj));
      const double inv = 1.0 / w;
      const bool in = row_inner && std::abs(i2) <= window;
      if (fast3) {
        const double t3 = inv * inv * inv;
        if (in) { s_in1 += inv; s_in3 += t3; } else { s_out1 += inv; s_out3 += t3; }
      } else {
        acc.add(inv, in);
      }
    }
    if (fast3) {
      acc.inner[0] += s_in1; acc.inner[1] += s_in3;
      acc.outer[0] += s_out1; acc.outer[1] += s_out3;
    }
  }
}

struct ProbeResult {
  // [exponent][scale] -> inner-window sum and doubled-window sum
  std::vector<std::vector<double>> inner, doubled;
};

ProbeResult probe_sums(const ParamPoint& probe, const Parametrization& inner, bool probe_first,
                       const std::vector<double>& ks, int jmax, const AdmissibilityOptions& opt) {
  ProbeResult r;
  r.inner.assign(ks.size(), std::vector<double>(jmax + 1, 0.0));
  r.doubled = r.inner;
  if (inner.kind() == ParamKind::table) {
    for (const auto& [idx, pt] : inner.entries()) {
      if (idx.j > jmax) continue;
      const double w = probe_first ? omega(probe, pt) : omega(pt, probe);
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const double t = std::pow(w, -ks[i]);
        r.inner[i][idx.j] += t;
        r.doubled[i][idx.j] += t;
      }
    }
    return r;
  }
  for (int j = 0; j <= jmax; ++j) {
    ShellAccumulator acc(ks);
    for (const auto& o : inner.orientations(j)) orientation_sum(probe, o, probe_first, opt.window, opt.doubled_window, acc);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      r.inner[i][j] = acc.inner[i];
      r.doubled[i][j] = acc.inner[i] + acc.outer[i];
    }
  }
  return r;
}

// sup over probes of the scale-truncated partial sums; out[i][J] for exponent i, truncation J.
void sup_partial(const std::vector<Parametrization::Entry>& probes, const Parametrization& inner, bool probe_first,
                 const std::vector<double>& ks, int jmax, const AdmissibilityOptions& opt,
                 std::vector<std::vector<double>>& sup_in, std::vector<std::vector<double>>& sup_dbl) {
  sup_in.assign(ks.size(), std::vector<double>(jmax + 1, 0.0));
  sup_dbl = sup_in;
  for (const auto& pr : probes) {
    const ProbeResult r = probe_sums(pr.second, inner, probe_first, ks, jmax, opt);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      double a = 0, b = 0;
      for (int J = 0; J <= jmax; ++J) {
        a += r.inner[i][J];
        b += r.doubled[i][J];
        sup_in[i][J] = std::max(sup_in[i][J], a);
        sup_dbl[i][J] = std::max(sup_dbl[i][J], b);
      }
    }
  }
}

}  // namespace

std::vector<AdmissibilityRow> admissibility_sweep(const Parametrization& a, const Parametrization& b,
                                                  const std::vector<double>& ks, int jmax,
                                                  const AdmissibilityOptions& opt) {
  for (double k : ks)
    if (!(k > 0)) throw ParameterError("admissibility exponent k must be positive");
  if (jmax < 0) throw ParameterError("jmax must be nonnegative");
  if (opt.window < 1) throw ParameterError("translation window must be >= 1");
  const auto probes_a = enumerate(a, opt.probe_jmax, opt.probe_kmax);
  const auto probes_b = enumerate(b, opt.probe_jmax, opt.probe_kmax);
  std::vector<std::vector<double>> ab_in, ab_dbl, ba_in, ba_dbl;
  sup_partial(probes_a, b, true, ks, jmax, opt, ab_in, ab_dbl);
  sup_partial(probes_b, a, false, ks, jmax, opt, ba_in, ba_dbl);
  std::vector<AdmissibilityRow> rows;
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (int J = 0; J <= jmax; ++J)
      rows.push_back({J, ks[i], ab_in[i][J], ba_in[i][J], ab_dbl[i][J], ba_dbl[i][J]});
  return rows;
}

std::vector<AdmissibilityRow> admissibility_partial_sums(const Parametrization& a, const Parametrization& b,
                                                         double k, int jmax, const AdmissibilityOptions& opt) {
  return admissibility_sweep(a, b, {k}, jmax, opt);
}

double strong_admissibility_ratio(const Parametrization& param, double k, double growth, int j, int q,
                                  const ParamPoint& probe, int window) {
  if (!(k > 0)) throw ParameterError("exponent k must be positive");
  if (window < 0) throw ParameterError("window must be nonnegative");
  const double scale = std::exp2(double(q));
  double sum = 0;
  std::size_t count = 0;
  auto term = [&](const ParamPoint& pt) {
    sum += std::pow(1.0 + scale * pseudo_distance(probe, pt), -k);
    ++count;
  };
  if (param.kind() == ParamKind::table) {
    for (const auto& [idx, pt] : param.entries())
      if (idx.j == j) term(pt);
  } else if (j >= 0) {
    for (const auto& o : param.orientations(j)) {
      const Eigen::Vector2d c = o.lattice.inverse() * probe.x;
      const int c1 = int(std::lround(c[0])), c2 = int(std::lround(c[1]));
      for (int i1 = -window; i1 <= window; ++i1)
        for (int i2 = -window; i2 <= window; ++i2)
          term(ParamPoint(double(j), o.theta, o.lattice * Eigen::Vector2d(c1 + i1, c2 + i2)));
    }
  }
  if (count == 0) throw EmptyShell("scale shell j=" + std::to_string(j) + " is empty");
  return sum / std::exp2(growth * std::max(0, j - q));
}

void write_parametrization_csv(std::ostream& os, const std::vector<Parametrization::Entry>& rows) {
  os << "cone,j,l,k1,k2,s,theta,x1,x2\n";
  const auto old = os.precision(17);
  for (const auto& [idx, p] : rows) {
    os << cone_id(idx.cone) << ',' << idx.j << ',' << idx.l << ',' << idx.k[0] << ',' << idx.k[1] << ','
       << p.s << ',' << p.theta << ',' << p.x[0] << ',' << p.x[1] << '\n';
  }
  os.precision(old);
}

}  // namespace pmol
