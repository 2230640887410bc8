#include "pmol/approx.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "pmol/parallel.hpp"

namespace pmol {

namespace {

constexpr double kPi = std::numbers::pi;

// exponents (a, b) of the graded monomial basis
constexpr std::array<std::array<int, 2>, 15> kMonomials = {{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0},
                                                            {2, 1}, {1, 2}, {0, 3}, {4, 0}, {3, 1}, {2, 2}, {1, 3},
                                                            {0, 4}}};

double ipow(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// d^dx/dx d^dy/dy of the polynomial
double poly_derivative(const Poly2& p, int dx, int dy, double x, double y) {
  double s = 0;
  for (std::size_t i = 0; i < kMonomials.size(); ++i) {
    const int a = kMonomials[i][0], b = kMonomials[i][1];
    if (a < dx || b < dy || p.c[i] == 0) continue;
    double f = p.c[i];
    for (int t = 0; t < dx; ++t) f *= a - t;
    for (int t = 0; t < dy; ++t) f *= b - t;
    s += f * ipow(x, a - dx) * ipow(y, b - dy);
  }
  return s;
}

// C-infinity bump on (0, 1), equal to 1 at t = 1/2.
double cutoff(double t) {
  if (t <= 0 || t >= 1) return 0;
  return std::exp(4 - 1 / (t * (1 - t)));
}

Poly2 random_poly(std::mt19937_64& rng, double constant) {
  std::uniform_real_distribution<double> u(-1, 1);
  Poly2 p;
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    const int deg = kMonomials[i][0] + kMonomials[i][1];
    p.c[i] = 0.5 * u(rng) / double(1 + deg * deg);
  }
  p.c[0] = constant + 0.3 * u(rng);
  return p;
}

}  // namespace

double Poly2::operator()(double x, double y) const { return poly_derivative(*this, 0, 0, x, y); }

double Poly2::c2_norm() const {
  double m = 0;
  constexpr int kSamples = 33;
  for (int i = 0; i < kSamples; ++i)
    for (int k = 0; k < kSamples; ++k) {
      const double x = double(i) / (kSamples - 1), y = double(k) / (kSamples - 1);
      for (int dx = 0; dx <= 2; ++dx)
        for (int dy = 0; dx + dy <= 2; ++dy) m = std::max(m, std::abs(poly_derivative(*this, dx, dy, x, y)));
    }
  return m;
}

double StarBoundary::radius(double phi) const {
  double r = rho0;
  for (std::size_t h = 0; h < a.size(); ++h) r += a[h] * std::cos(double(h + 1) * phi + b[h]);
  return r;
}

double StarBoundary::radius_d1(double phi) const {
  double r = 0;
  for (std::size_t h = 0; h < a.size(); ++h) r -= a[h] * double(h + 1) * std::sin(double(h + 1) * phi + b[h]);
  return r;
}

double StarBoundary::radius_d2(double phi) const {
  double r = 0;
  for (std::size_t h = 0; h < a.size(); ++h) {
    const double k = double(h + 1);
    r -= a[h] * k * k * std::cos(k * phi + b[h]);
  }
  return r;
}

bool StarBoundary::inside(double x, double y) const {
  const double dx = x - cx, dy = y - cy;
  return std::hypot(dx, dy) < radius(std::atan2(dy, dx));
}

double StarBoundary::max_curvature(int samples) const {
  double m = 0;
  for (int i = 0; i < samples; ++i) {
    const double phi = 2 * kPi * i / samples;
    const double r = radius(phi), r1 = radius_d1(phi), r2 = radius_d2(phi);
    const double k = std::abs(r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
    m = std::max(m, k);
  }
  return m;
}

double StarBoundary::min_radius(int samples) const {
  double m = rho0;
  for (int i = 0; i < samples; ++i) m = std::min(m, radius(2 * kPi * i / samples));
  return m;
}

double StarBoundary::max_radius(int samples) const {
  double m = rho0;
  for (int i = 0; i < samples; ++i) m = std::max(m, radius(2 * kPi * i / samples));
  return m;
}

double CartoonImage::value(double x, double y) const {
  if (x <= 0 || y <= 0 || x >= 1 || y >= 1) return 0;
  double v = f0(x, y) * cutoff(x) * cutoff(y);
  if (edge && boundary.inside(x, y)) v += f1(x, y);
  return v;
}

CartoonImage make_cartoon(unsigned seed, const FrequencyGrid& grid, const CartoonOptions& opt) {
  if (grid.n < 2 || (grid.n & (grid.n - 1)) != 0) throw ParameterError("cartoon grid size must be a power of two");
  if (opt.harmonics < 0 || opt.amplitude < 0 || opt.rho0 <= 0 || opt.subsamples < 1)
    throw ParameterError("invalid cartoon options");
  if (opt.scene <= 0 || opt.scene > grid.period()) throw ParameterError("cartoon scene must fit in the torus");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  CartoonImage img(grid);
  img.seed = seed;
  img.edge = opt.edge;
  img.scene = opt.scene;
  StarBoundary& B = img.boundary;
  B.rho0 = opt.rho0;
  B.cx = 0.5 + 0.04 * u(rng);
  B.cy = 0.5 + 0.04 * u(rng);
  for (int h = 1; h <= opt.harmonics; ++h) {
    B.a.push_back(opt.amplitude * u(rng) / h);
    B.b.push_back(kPi * u(rng));
  }
  const double reach = B.max_radius() + std::max(std::abs(B.cx - 0.5), std::abs(B.cy - 0.5));
  if (B.min_radius() <= 0 || reach >= 0.5)
    throw ParameterError("cartoon boundary leaves the unit square; lower amplitude or rho0");
  img.f0 = random_poly(rng, 1.0);
  img.f1 = random_poly(rng, 1.0);
  img.f0_c2 = img.f0.c2_norm();
  img.f1_c2 = img.f1.c2_norm();
  img.curvature = B.max_curvature();

  const int n = grid.n, S = opt.subsamples;
  const double px = grid.pixel() / opt.scene;  // pixel size in scene units
  // sample offsets and the separable cutoff per axis
  std::vector<double> coord(std::size_t(n) * S), cut(std::size_t(n) * S);
  for (int p = 0; p < n; ++p)
    for (int s = 0; s < S; ++s) {
      const double t = (p + (s + 0.5) / S - 0.5) * px;
      coord[std::size_t(p * S + s)] = t;
      cut[std::size_t(p * S + s)] = cutoff(t);
    }
  const int limit = std::min(n, int(std::ceil(1.0 / px)) + 1);
  for (int p = 0; p < limit; ++p)
    for (int q = 0; q < limit; ++q) {
      double acc = 0;
      for (int sp = 0; sp < S; ++sp) {
        const std::size_t ip = std::size_t(p * S + sp);
        const double x = coord[ip];
        if (x <= 0 || x >= 1) continue;
        for (int sq = 0; sq < S; ++sq) {
          const std::size_t iq = std::size_t(q * S + sq);
          const double y = coord[iq];
          if (y <= 0 || y >= 1) continue;
          double v = img.f0(x, y) * cut[ip] * cut[iq];
          if (img.edge && B.inside(x, y)) v += img.f1(x, y);
          acc += v;
        }
      }
      img.rendered.values(p, q) = acc / (S * S);
    }
  return img;
}

std::vector<int> default_n_grid(std::size_t total) {
  std::vector<int> out;
  const double cap = std::min(8192.0, 0.25 * double(total));
  for (int N = 16; N <= cap; N *= 2) out.push_back(N);
  return out;
}

NTermCurve n_term_error_curve(const DigitalImage& f, const Frame& frame, const std::vector<int>& N_values,
                              bool allow_proxy) {
  const bool proxy = !frame.spec().parseval();
  if (proxy && !allow_proxy)
    throw UnsupportedDual(frame.spec().id() + " has no dual; request the tail-energy proxy explicitly");
  for (int N : N_values)
    if (N < 0) throw ParameterError("N must be nonnegative");

  const Spectrum F = to_spectrum(f);
  const CoefficientSet c = frame.analyze(F);
  struct Slot {
    double mag;
    std::uint32_t block, pos;
  };
  std::vector<Slot> order;
  order.reserve(c.size());
  for (std::size_t b = 0; b < c.blocks.size(); ++b)
    for (Eigen::Index i = 0; i < c.blocks[b].size(); ++i)
      order.push_back({std::abs(c.blocks[b].data()[i]), std::uint32_t(b), std::uint32_t(i)});
  std::sort(order.begin(), order.end(), [](const Slot& x, const Slot& y) {
    if (x.mag != y.mag) return x.mag > y.mag;
    return x.block != y.block ? x.block < y.block : x.pos < y.pos;
  });

  NTermCurve out;
  out.frame_id = frame.id();
  out.proxy = proxy;
  out.energy = F.norm2();
  out.sorted_coeffs.reserve(order.size());
  for (const Slot& s : order) out.sorted_coeffs.push_back(s.mag);
  // tail[i] = sum_{n >= i} |c_(n)|^2, accumulated from the small end
  std::vector<double> suffix(order.size() + 1, 0.0);
  for (std::size_t i = order.size(); i-- > 0;) suffix[i] = suffix[i + 1] + order[i].mag * order[i].mag;

  std::vector<int> Ns = N_values;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  CoefficientSet kept = c;
  for (auto& B : kept.blocks) B.setZero();
  std::size_t filled = 0;
  for (int N : Ns) {
    const std::size_t n_keep = std::min<std::size_t>(std::size_t(N), order.size());
    out.N.push_back(N);
    out.tail.push_back(suffix[n_keep]);
    if (proxy) {
      out.errors.push_back(suffix[n_keep]);
      continue;
    }
    for (; filled < n_keep; ++filled) {
      const Slot& s = order[filled];
      kept.blocks[s.block].data()[s.pos] = c.blocks[s.block].data()[s.pos];
    }
    Spectrum R = frame.synthesize(kept);
    R.values -= F.values;
    out.errors.push_back(R.norm2());
  }
  return out;
}

NTermCurve n_term_error_curve(const CartoonImage& f, const FrameSpec& spec, const FrequencyGrid& grid,
                              const std::vector<int>& N_values, bool allow_proxy) {
  const Frame frame(spec, grid);
  return n_term_error_curve(f.rendered, frame, N_values, allow_proxy);
}

RateFit rate_fit(const NTermCurve& curve, int Nmin, int Nmax, int min_points) {
  if (Nmin <= 0 || Nmax <= Nmin) throw ParameterError("rate fit needs 0 < Nmin < Nmax");
  std::vector<double> lx, ly, lc;
  for (std::size_t i = 0; i < curve.N.size(); ++i) {
    const int N = curve.N[i];
    if (N < Nmin || N > Nmax || !(curve.errors[i] > 0)) continue;
    lx.push_back(std::log(double(N)));
    ly.push_back(std::log(curve.errors[i]));
    const std::size_t k = std::size_t(N) - 1;
    lc.push_back(k < curve.sorted_coeffs.size() && curve.sorted_coeffs[k] > 0 ? std::log(curve.sorted_coeffs[k])
                                                                              : std::nan(""));
  }
  if (int(lx.size()) < min_points)
    throw ParameterError("rate fit range holds " + std::to_string(lx.size()) + " points, need " +
                         std::to_string(min_points));
  auto fit = [&](const std::vector<double>& y, double& slope, double& intercept) {
    double mx = 0, my = 0;
    int m = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
      if (std::isfinite(y[i])) {
        mx += lx[i];
        my += y[i];
        ++m;
      }
    mx /= m;
    my /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
      if (std::isfinite(y[i])) {
        sxy += (lx[i] - mx) * (y[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
      }
    slope = sxy / sxx;
    intercept = my - slope * mx;
  };
  RateFit r;
  r.points = int(lx.size());
  fit(ly, r.slope, r.intercept);
  double ci = 0;
  fit(lc, r.coeff_slope, ci);
  return r;
}

Comparison compare_systems(const CartoonImage& f, const std::vector<FrameSpec>& specs, const FrequencyGrid& grid,
                           const std::vector<int>& N_values, int Nmin, int Nmax, int threads) {
  if (specs.empty()) throw ParameterError("comparison needs at least one frame");
  Comparison out;
  out.rows.resize(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) {
    ComparisonRow& row = out.rows[i];
    row.curve = n_term_error_curve(f, specs[i], grid, N_values, true);
    row.frame_id = row.curve.frame_id;
    row.fit = rate_fit(row.curve, Nmin, Nmax);
  });
  const int m = int(specs.size());
  out.gaps = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) out.gaps(i, k) = out.rows[i].fit.slope - out.rows[k].fit.slope;
  return out;
}

void write_curve_csv(std::ostream& os, const NTermCurve& c) {
  os << "N,error,proxy_flag\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < c.N.size(); ++i) os << c.N[i] << ',' << c.errors[i] << ',' << (c.proxy ? 1 : 0) << '\n';
  os.precision(old);
}

void write_comparison_csv(std::ostream& os, const Comparison& c) {
  os << "frame,slope,intercept,points,coeff_slope\n";
  const auto old = os.precision(17);
  for (const auto& r : c.rows)
    os << '"' << r.frame_id << "\"," << r.fit.slope << ',' << r.fit.intercept << ',' << r.fit.points << ','
       << r.fit.coeff_slope << '\n';
  os.precision(old);
}

void write_comparison_text(std::ostream& os, const Comparison& c) {
  std::size_t width = 5;
  for (const auto& r : c.rows) width = std::max(width, r.frame_id.size());
  const auto flags = os.flags();
  const auto old = os.precision(4);
  os << std::left << std::setw(int(width)) << "frame" << "  " << std::right << std::setw(9) << "slope"
     << std::setw(12) << "coeff" << '\n';
  for (const auto& r : c.rows)
    os << std::left << std::setw(int(width)) << r.frame_id << "  " << std::right << std::fixed << std::setw(9)
       << r.fit.slope << std::setw(12) << r.fit.coeff_slope << '\n';
  os.flags(flags);
  os.precision(old);
  if (c.rows.size() > 1) {
    os << "slope gaps (row - column):\n";
    for (Eigen::Index i = 0; i < c.gaps.rows(); ++i) {
      for (Eigen::Index k = 0; k < c.gaps.cols(); ++k) os << (k ? " " : "") << std::setw(8) << c.gaps(i, k);
      os << '\n';
    }
  }
}

}  // namespace pmol
