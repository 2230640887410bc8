// pmol: batch driver for the molecule experiments.
//
//   pmol <command> [--config FILE] [--out DIR] [--seed N] [--threads N] [--grid-n N] [--jmax N] [--set key=value]...
//
// Every command reads all of its keys first, so unknown keys and type errors
// surface before any computation (exit 2). Gate failures exit 1.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmol/approx.hpp"
#include "pmol/config.hpp"
#include "pmol/generators.hpp"
#include "pmol/gramian.hpp"
#include "pmol/io.hpp"
#include "pmol/norms.hpp"
#include "pmol/oracles.hpp"
#include "pmol/param.hpp"

namespace {

using namespace pmol;

// Run phase of a command: writes artifacts under `out`, appends to `summary`, returns the gate.
using Job = std::function<bool(const std::string& out, std::ostream& summary)>;

void write_artifact(const std::string& out, const std::string& name, const std::string& text) {
  atomic_write((std::filesystem::path(out) / name).string(), text);
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  os << std::setprecision(17);
  fn(os);
  return os.str();
}

FrequencyGrid read_grid(ExperimentConfig& c, int n, double extent) {
  return FrequencyGrid(c.get_int("grid_n", n), c.get_double("extent", extent));
}

MoleculeOrder read_order(ExperimentConfig& c, const std::string& key, std::vector<double> def) {
  const auto v = c.get_doubles(key, def);
  if (v.size() != 4) throw UsageError("'" + key + "' must list R, M, N1, N2");
  return {v[0], v[1], v[2], v[3]};
}

struct CompactDefaults {
  int spline_order = 4, vanishing_moments = 6;
  std::vector<double> order{2, 4, 2, 2};
};

// Family-specific keys carry the frame's role as prefix: A_smoothness, B_spline_order, ...
FrameSpec read_spec(ExperimentConfig& c, const std::string& role, Family family, int jmax,
                    const CompactDefaults& cd = {}) {
  const std::string p = role + "_";
  switch (family) {
    case Family::curvelet_bl: return make_curvelet_spec(jmax, c.get_int(p + "smoothness", 7));
    case Family::shearlet_bl: return make_shearlet_spec(jmax, c.get_int(p + "smoothness", 7));
    case Family::wavelet_meyer: return make_wavelet_spec(jmax, c.get_int(p + "smoothness", 7));
    case Family::shearlet_compact:
      return make_compact_shearlet_spec(jmax, c.get_int(p + "spline_order", cd.spline_order),
                                        c.get_int(p + "vanishing_moments", cd.vanishing_moments),
                                        read_order(c, p + "order", cd.order));
  }
  throw UsageError("unknown family");
}

// Frame pair whose top scales cover the same band; B_jmax overrides the match.
struct FramePair {
  FrameSpec a, b;
};

FramePair read_pair(ExperimentConfig& c, const std::string& fa_def, const std::string& fb_def, int jmax_a,
                    const CompactDefaults& cd = {}) {
  const Family fa = family_from_string(c.get_string("A", fa_def));
  const Family fb = family_from_string(c.get_string("B", fb_def));
  const int jmax_b = c.get_int("B_jmax", jmax_a + scale_offset(fb) - scale_offset(fa));
  return {read_spec(c, "A", fa, jmax_a, cd), read_spec(c, "B", fb, jmax_b, cd)};
}

Parametrization param_from_string(const std::string& s) {
  if (s == "canonical") return Parametrization::canonical();
  if (s == "shearlet") return Parametrization::shearlet();
  throw UsageError("parametrization kind must be canonical or shearlet, got '" + s + "'");
}

double rel_change(double now, double before) { return before > 0 ? now / before - 1 : 0.0; }

// ---------------------------------------------------------------------------------

Job param_command(ExperimentConfig& c) {
  const std::string kind = c.get_string("kind", "canonical");
  const std::string against = c.get_string("against", kind);
  const double k = c.get_double("k", 3);
  const int jmax = c.get_int("jmax", 6);
  AdmissibilityOptions opt;
  opt.probe_jmax = c.get_int("probe_jmax", opt.probe_jmax);
  opt.probe_kmax = c.get_int("probe_kmax", opt.probe_kmax);
  opt.window = c.get_int("window", opt.window);
  const double tol = c.get_double("tolerance", 0.01);
  const double growth_min = c.get_double("growth_min", 0.10);
  const std::string expect = c.get_string("expect", "converge");
  const int table_jmax = c.get_int("table_jmax", 3);
  const int table_kmax = c.get_int("table_kmax", 2);
  if (expect != "converge" && expect != "diverge") throw UsageError("expect must be converge or diverge");
  if (jmax < 1) throw UsageError("jmax must be at least 1");
  const Parametrization a = param_from_string(kind), b = param_from_string(against);

  return [=](const std::string& out, std::ostream& summary) {
    const auto rows = admissibility_sweep(a, b, {k}, jmax, opt);
    write_artifact(out, "admissibility.csv", render([&](std::ostream& os) {
      os << "jmax,k,sup_ab,sup_ba,sup_ab_doubled,sup_ba_doubled\n";
      for (const auto& r : rows)
        os << r.jmax << ',' << r.k << ',' << r.sup_ab << ',' << r.sup_ba << ',' << r.sup_ab_doubled << ','
           << r.sup_ba_doubled << '\n';
    }));
    write_artifact(out, "parametrization.csv",
                   render([&](std::ostream& os) { write_parametrization_csv(os, enumerate(a, table_jmax, table_kmax)); }));
    const auto& last = rows.back();
    const auto& prev = rows[rows.size() - 2];
    const double scale_change =
        std::max(rel_change(last.sup_ab, prev.sup_ab), rel_change(last.sup_ba, prev.sup_ba));
    const double window_change =
        std::max(rel_change(last.sup_ab_doubled, last.sup_ab), rel_change(last.sup_ba_doubled, last.sup_ba));
    summary << "sup_ab: " << last.sup_ab << "\nsup_ba: " << last.sup_ba << "\nscale_change: " << scale_change
            << "\nwindow_change: " << window_change << '\n';
    if (expect == "converge") return scale_change < tol && window_change < tol;
    return scale_change >= growth_min;
  };
}

// Indices for the molecule check: a few orientations per scale, one off-origin translation.
std::vector<Index> molecule_sample(const FrameSpec& spec, int jmin, int jmax) {
  std::vector<Index> out;
  for (int j = jmin; j <= jmax; ++j) {
    const int half = 1 << (j / 2);
    switch (spec.family) {
      case Family::curvelet_bl:
        for (int l : {-half, 0, 1}) out.push_back(Index{Cone::none, j, l, {1, -1}});
        break;
      case Family::wavelet_meyer:
        for (int l : {1, 2, 3}) out.push_back(Index{Cone::none, j, l, {1, -1}});
        break;
      default:
        for (int cone = 0; cone < 2; ++cone)
          for (int l : {-half, 0, 1}) out.push_back(Index{Cone(cone), j, l, {1, -1}});
    }
  }
  return out;
}

Job frame_command(ExperimentConfig& c) {
  const Family family = family_from_string(c.get_string("family", "curvelet"));
  const std::string mode = c.get_string("mode", "parseval");
  if (mode != "parseval" && mode != "molecule") throw UsageError("mode must be parseval or molecule");

  if (mode == "parseval") {
    const FrequencyGrid grid = read_grid(c, 512, 128);
    const int jmax = c.get_int("jmax", family == Family::curvelet_bl ? 6 : matched_shearlet_jmax(6));
    const FrameSpec spec = read_spec(c, "frame", family, jmax);
    const int images = c.get_int("images", 20);
    const double radius = c.get_double("radius", grid.extent);
    const double tol = c.get_double("tolerance", 1e-3);
    const unsigned seed = unsigned(c.get_int("seed", 1));
    if (images < 1) throw UsageError("images must be positive");
    return [=](const std::string& out, std::ostream& summary) {
      const Frame frame(spec, grid);
      std::vector<double> ratios;
      for (int i = 0; i < images; ++i) {
        const DigitalImage f = random_bandlimited_image(grid, radius, seed + unsigned(i));
        ratios.push_back(analyze(f, frame).energy() / f.norm2());
      }
      write_artifact(out, "parseval.csv", render([&](std::ostream& os) {
        os << "image,ratio\n";
        for (std::size_t i = 0; i < ratios.size(); ++i) os << i << ',' << ratios[i] << '\n';
      }));
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      summary << "frame: " << frame.id() << "\nelements: " << frame.size() << "\nmin_ratio: " << *lo
              << "\nmax_ratio: " << *hi << '\n';
      if (!spec.parseval()) {
        summary << "gate: none (frame is not Parseval; ratios bracket the frame bounds)\n";
        return true;
      }
      return *lo >= 1 - tol && *hi <= 1 + tol;
    };
  }

  const FrequencyGrid grid = read_grid(c, 256, 8);
  const int jmax = c.get_int("jmax", 4);
  const FrameSpec spec = read_spec(c, "frame", family, jmax);
  const MoleculeOrder order = read_order(c, "order", {2, 4, 2, 2});
  const int jmin = c.get_int("sample_jmin", 1);
  return [=](const std::string& out, std::ostream& summary) {
    const MoleculeReport r = verify_molecule_condition(spec, order, molecule_sample(spec, jmin, jmax), grid);
    write_artifact(out, "molecule.csv", render([&](std::ostream& os) {
      os << "cone,j,l,k1,k2,constant,constant_refined,eta1,eta2\n";
      for (const auto& m : r.per_index)
        os << cone_id(m.idx.cone) << ',' << m.idx.j << ',' << m.idx.l << ',' << m.idx.k[0] << ',' << m.idx.k[1]
           << ',' << m.constant << ',' << m.constant_refined << ',' << m.worst_eta[0] << ',' << m.worst_eta[1]
           << '\n';
    }));
    summary << "max_constant: " << r.max_constant << "\nmax_constant_refined: " << r.max_constant_refined
            << "\nrelative_change: " << r.relative_change << "\nderivative_order: " << r.derivative_order << '\n';
    return r.pass;
  };
}

struct GramianSetup {
  FrequencyGrid grid;
  FramePair frames;
  PairSampling sampling;
};

// Pairs are drawn from scales <= jmax; frames extend `headroom` scales above so the
// sampled elements are not the absorbing top shells.
GramianSetup read_gramian(ExperimentConfig& c) {
  GramianSetup s;
  s.grid = read_grid(c, 1024, 256);
  const int jmax = c.get_int("jmax", 5);
  const int headroom = c.get_int("headroom", 2);
  s.frames = read_pair(c, "curvelet", "shearlet", jmax + headroom);
  s.sampling.jmax_a = jmax;
  s.sampling.jmax_b = s.frames.b.jmax - headroom;
  s.sampling.radius = c.get_double("radius", s.sampling.radius);
  s.sampling.pairs = std::size_t(c.get_int("pairs", int(s.sampling.pairs)));
  s.sampling.pool = std::size_t(c.get_int("pool", int(s.sampling.pool)));
  s.sampling.seed = unsigned(c.get_int("seed", 1));
  if (headroom < 1) throw UsageError("headroom must be at least 1");
  return s;
}

Job gramian_command(ExperimentConfig& c) {
  const GramianSetup s = read_gramian(c);
  return [=](const std::string& out, std::ostream& summary) {
    const Frame a(s.frames.a, s.grid), b(s.frames.b, s.grid);
    const GramianSample g = gramian_pairs(a, b, sample_pairs(a, b, s.sampling));
    write_artifact(out, "gramian.csv", render([&](std::ostream& os) { write_gramian_csv(os, g); }));
    summary << "frame_a: " << a.id() << "\nframe_b: " << b.id() << "\npairs: " << g.size() << '\n';
    return true;
  };
}

Job decay_command(ExperimentConfig& c) {
  const GramianSetup s = read_gramian(c);
  const double N = c.get_double("N", 2);
  const double omega_min = c.get_double("omega_min", 4);
  const double slope_gate = c.get_double("slope_gate", -1.7);
  const double tol = c.get_double("stability_tolerance", 0.10);
  const int top_pairs = c.get_int("top_pairs", 5000);
  return [=](const std::string& out, std::ostream& summary) {
    const Frame a(s.frames.a, s.grid), b(s.frames.b, s.grid);
    const GramianSample g = gramian_pairs(a, b, sample_pairs(a, b, s.sampling));
    const DecayFit fit = decay_fit(g, omega_min);
    // add one scale on both sides, drawing only pairs that touch it
    PairSampling top = s.sampling;
    top.jmax_a += 1;
    top.jmax_b += 1;
    top.require_top = true;
    top.pairs = std::size_t(top_pairs);
    top.seed = s.sampling.seed + 1;
    const GramianSample gt = gramian_pairs(a, b, sample_pairs(a, b, top));
    const double base = max_weighted_entry(g, N);
    const double extended = std::max(base, max_weighted_entry(gt, N));
    const double change = rel_change(extended, base);
    write_artifact(out, "gramian.csv", render([&](std::ostream& os) { write_gramian_csv(os, g); }));
    write_artifact(out, "decay_fit.txt", render([&](std::ostream& os) { write_decay_fit(os, fit); }));
    summary << "slope: " << fit.slope << "\nslope_gate: " << slope_gate << "\nmax_weighted: " << base
            << "\nmax_weighted_extended: " << extended << "\nstability_change: " << change << '\n';
    return fit.slope <= slope_gate && change < tol;
  };
}

Job sparsity_command(ExperimentConfig& c) {
  const FrequencyGrid grid = read_grid(c, 1024, 32);
  const int jmax = c.get_int("jmax", 5);
  const FramePair frames = read_pair(c, "compact", "curvelet", jmax, CompactDefaults{9, 18, {6, 12, 7, 6}});
  const double p = c.get_double("p", 2.0 / 3.0);
  const int window = c.get_int("window", 32);
  const int steps = c.get_int("steps", 3);
  const int probes = c.get_int("probes_per_wedge", 2);
  return [=](const std::string& out, std::ostream& summary) {
    const Frame a(frames.a, grid), b(frames.b, grid);
    const auto levels = sparsity_levels(frames.a.jmax, frames.b.jmax, window, grid.period(), steps);
    const SparsityReport r = sparsity_equivalence_test(a, b, p, levels, probes);
    write_artifact(out, "sparsity.csv", render([&](std::ostream& os) {
      os << "jmax_a,jmax_b,radius,row_sup,col_sup,bound,periodization\n";
      for (const auto& st : r.steps)
        os << st.level.jmax_a << ',' << st.level.jmax_b << ',' << st.level.radius << ',' << st.row_sup << ','
           << st.col_sup << ',' << st.bound << ',' << st.periodization << '\n';
    }));
    summary << "frame_a: " << a.id() << "\nframe_b: " << b.id() << "\nfinal_growth: " << r.final_growth
            << "\nperiodization: " << r.steps.back().periodization << '\n';
    return r.pass;
  };
}

Job cartoon_command(ExperimentConfig& c) {
  const FrequencyGrid grid = read_grid(c, 512, 128);
  const int jmax = c.get_int("jmax", 6);
  const int seeds = c.get_int("cartoons", 3);
  const unsigned seed = unsigned(c.get_int("seed", 1));
  CartoonOptions opt;
  opt.harmonics = c.get_int("harmonics", opt.harmonics);
  opt.amplitude = c.get_double("amplitude", opt.amplitude);
  opt.rho0 = c.get_double("rho0", opt.rho0);
  opt.subsamples = c.get_int("subsamples", opt.subsamples);
  opt.edge = c.get_bool("edge", opt.edge);
  const int Nmin = c.get_int("Nmin", 32), Nmax = c.get_int("Nmax", 4096);
  const double curvelet_max = c.get_double("curvelet_slope_max", -1.5);
  const double shearlet_max = c.get_double("shearlet_slope_max", -1.5);
  const double wavelet_min = c.get_double("wavelet_slope_min", -1.3);
  const double gap_min = c.get_double("wavelet_gap_min", 0.4);
  const double gap_max = c.get_double("shearlet_gap_max", 0.25);
  const int threads = c.get_int("threads", 1);
  if (seeds < 1) throw UsageError("cartoons must be positive");
  const std::vector<FrameSpec> specs{make_curvelet_spec(jmax), make_shearlet_spec(matched_shearlet_jmax(jmax)),
                                     make_wavelet_spec(matched_shearlet_jmax(jmax))};
  return [=](const std::string& out, std::ostream& summary) {
    bool pass = true;
    std::ostringstream table;
    table << std::setprecision(17) << "seed,curvelet,shearlet,wavelet\n";
    for (int i = 0; i < seeds; ++i) {
      const unsigned sd = seed + unsigned(i);
      const CartoonImage f = make_cartoon(sd, grid, opt);
      const Comparison cmp = compare_systems(f, specs, grid, default_n_grid(std::size_t(grid.n) * grid.n), Nmin,
                                             Nmax, threads);
      const std::string tag = "seed" + std::to_string(sd);
      write_image_binary((std::filesystem::path(out) / ("cartoon_" + tag + ".bin")).string(), f.rendered);
      write_artifact(out, "curves_" + tag + ".csv", render([&](std::ostream& os) { write_comparison_csv(os, cmp); }));
      write_artifact(out, "comparison_" + tag + ".txt",
                     render([&](std::ostream& os) { write_comparison_text(os, cmp); }));
      const double cs = cmp.rows[0].fit.slope, ss = cmp.rows[1].fit.slope, ws = cmp.rows[2].fit.slope;
      table << sd << ',' << cs << ',' << ss << ',' << ws << '\n';
      summary << tag << ": curvelet " << cs << ", shearlet " << ss << ", wavelet " << ws << '\n';
      pass = pass && cs <= curvelet_max && ss <= shearlet_max && ws >= wavelet_min && ws - cs >= gap_min &&
             std::abs(cs - ss) <= gap_max;
    }
    write_artifact(out, "slopes.csv", table.str());
    return pass;
  };
}

Job norms_command(ExperimentConfig& c) {
  const std::string mode = c.get_string("mode", "equivalence");
  if (mode == "hardy") {
    const double lambda = c.get_double("lambda", 2), alpha = c.get_double("alpha", 1);
    const double r = c.get_double("r", 1), q = c.get_double("q", 2);
    const std::string var = c.get_string("variant", "smoothing");
    if (var != "smoothing" && var != "tail") throw UsageError("variant must be smoothing or tail");
    const HardyVariant variant = var == "tail" ? HardyVariant::tail : HardyVariant::smoothing;
    const auto lengths = c.get_doubles("lengths", {16, 32, 64, 128});
    const int members = c.get_int("members", 200);
    const unsigned seed = unsigned(c.get_int("seed", 1));
    const double tol = c.get_double("tolerance", 0.05);
    const std::string expect = c.get_string("expect", "bounded");
    if (expect != "bounded" && expect != "growth") throw UsageError("expect must be bounded or growth");
    if (lengths.size() < 2) throw UsageError("lengths needs at least two entries");
    return [=](const std::string& out, std::ostream& summary) {
      std::vector<HardyEnsemble> ens;
      for (double len : lengths) ens.push_back(hardy_ensemble(int(len), members, lambda, alpha, r, q, variant, seed));
      write_artifact(out, "hardy.csv", render([&](std::ostream& os) {
        os << "length,members,max_ratio,max_ratio_half,change\n";
        for (const auto& e : ens)
          os << e.length << ',' << e.members << ',' << e.max_ratio << ',' << e.max_ratio_half << ',' << e.change << '\n';
      }));
      const double length_change = rel_change(ens.back().max_ratio, ens[ens.size() - 2].max_ratio);
      summary << "in_hypothesis: " << (ens.back().in_hypothesis ? "true" : "false")
              << "\nmax_ratio: " << ens.back().max_ratio << "\nensemble_change: " << ens.back().change
              << "\nlength_change: " << length_change << '\n';
      if (expect == "bounded") return ens.back().change < tol && length_change < tol;
      for (std::size_t i = 1; i < ens.size(); ++i)
        if (!(ens[i].max_ratio > ens[i - 1].max_ratio * (1 + tol))) return false;
      return true;
    };
  }
  if (mode != "equivalence") throw UsageError("mode must be equivalence or hardy");
  const FrequencyGrid grid = read_grid(c, 512, 128);
  const int jmax = c.get_int("jmax", 6);
  const FramePair frames = read_pair(c, "curvelet", "shearlet", jmax);
  NormParams np;
  np.alpha = c.get_double("alpha", 1);
  np.p = c.get_double("p", 2);
  np.q = c.get_double("q", 2);
  const int functions = c.get_int("functions", 40);
  const int cartoon_every = c.get_int("cartoon_every", 4);
  const unsigned seed = unsigned(c.get_int("seed", 1));
  const int threads = c.get_int("threads", 1);
  return [=](const std::string& out, std::ostream& summary) {
    const Frame a(frames.a, grid), b(frames.b, grid);
    const auto tests = norm_test_ensemble(a, functions, seed, cartoon_every);
    const NormEquivalence r = norm_equivalence_ratio(a, b, tests, np, threads);
    write_artifact(out, "norm_ratios.csv", render([&](std::ostream& os) { write_norm_ratios_csv(os, r); }));
    write_artifact(out, "norm_summary.json", render([&](std::ostream& os) { write_norm_summary(os, r, np); }));
    summary << "spread: " << r.spread << "\nspread_half: " << r.spread_half << "\nchange: " << r.change << '\n';
    return r.pass;
  };
}

Job oracles_command(ExperimentConfig& c) {
  const std::string lemma = c.get_string("lemma", "freqangdec");
  const double tol = c.get_double("drift_tolerance", 0.05);
  const std::string expect = c.get_string("expect", "bounded");
  if (expect != "bounded" && expect != "growth") throw UsageError("expect must be bounded or growth");
  std::function<OracleSweep(bool)> sweep;
  if (lemma == "grafakos" || lemma == "bumps") {
    const double N = c.get_double("N", 2);
    sweep = lemma == "grafakos" ? std::function<OracleSweep(bool)>([N](bool d) { return grafakos_sweep(N, d); })
                                : std::function<OracleSweep(bool)>([N](bool d) { return bumps_sweep(N, d); });
  } else if (lemma == "polar") {
    const double M = c.get_double("M", 4), N1 = c.get_double("N1", 3), N2 = c.get_double("N2", 2);
    const double L = c.get_double("L", 1);
    const int smax = c.get_int("smax", 8);
    sweep = [=](bool d) { return polar_sweep(M, N1, N2, L, smax, d); };
  } else if (lemma == "freqangdec") {
    const double A = c.get_double("A", 2), B = c.get_double("B", 2), M = c.get_double("M", 4);
    const double N1 = c.get_double("N1", 3), N2 = c.get_double("N2", 2);
    const int gap = c.get_int("max_gap", 6);
    const double dtheta = c.get_double("theta_gap", 0.1);
    sweep = [=](bool d) { return freqangdec_sweep(A, B, M, N1, N2, gap, dtheta, d); };
  } else {
    throw UsageError("lemma must be grafakos, bumps, polar or freqangdec");
  }
  return [=](const std::string& out, std::ostream& summary) {
    const OracleSweep s = sweep(false), dense = sweep(true);
    write_artifact(out, "sweep.csv", render([&](std::ostream& os) { write_sweep_csv(os, s); }));
    write_artifact(out, "sweep_dense.csv", render([&](std::ostream& os) { write_sweep_csv(os, dense); }));
    const double dense_change = rel_change(dense.max_ratio, s.max_ratio);
    summary << "rows: " << s.rows.size() << "\nin_hypothesis: " << (s.in_hypothesis ? "true" : "false")
            << "\nmax_ratio: " << s.max_ratio << "\nmax_drift: " << std::max(s.max_drift, dense.max_drift)
            << "\ndense_change: " << dense_change << '\n';
    if (lemma == "freqangdec") {
      summary << "ratio_by_gap:";
      for (double r : ratio_by_gap(s)) summary << ' ' << r;
      summary << '\n';
    }
    if (expect == "bounded")
      return s.in_hypothesis && std::max(s.max_drift, dense.max_drift) < tol && std::abs(dense_change) < tol;
    if (lemma != "freqangdec") throw UsageError("growth is only defined for the freqangdec sweep");
    const auto g = ratio_by_gap(s);
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) return false;
    return true;
  };
}

const std::vector<std::pair<std::string, std::string>> kCommands{
    {"param", "admissibility partial sums of two parametrizations"},
    {"frame", "Parseval identity or molecule envelope check of one frame"},
    {"gramian", "sampled cross-Gramian of two frames"},
    {"decay", "cross-Gramian decay fit against the index distance"},
    {"sparsity", "truncated l^p cross-Gramian bound trajectory"},
    {"cartoon", "N-term approximation rates on cartoon images"},
    {"norms", "scale-blocked norm equivalence or the discrete Hardy harness"},
    {"oracles", "quadrature checks of the integral estimates"},
};

Job make_job(const std::string& cmd, ExperimentConfig& c) {
  if (cmd == "param") return param_command(c);
  if (cmd == "frame") return frame_command(c);
  if (cmd == "gramian") return gramian_command(c);
  if (cmd == "decay") return decay_command(c);
  if (cmd == "sparsity") return sparsity_command(c);
  if (cmd == "cartoon") return cartoon_command(c);
  if (cmd == "norms") return norms_command(c);
  return oracles_command(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic molecule experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path, out_dir;
  int seed = 0, threads = 0, grid_n = 0, jmax = 0;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "flat JSON object of parameters")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "artifact directory (default pmol-<command>)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  auto* grid_opt = app.add_option("--grid-n", grid_n, "grid size n");
  auto* jmax_opt = app.add_option("--jmax", jmax, "finest scale");
  app.add_option("--set", sets, "override one config key, key=value");
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  if (out_dir.empty()) out_dir = "pmol-" + cmd;

  ExperimentConfig cfg;
  Job job;
  try {
    if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);
    if (seed_opt->count()) cfg.set("seed", std::to_string(seed));
    if (threads_opt->count()) cfg.set("threads", std::to_string(threads));
    if (grid_opt->count()) cfg.set("grid_n", std::to_string(grid_n));
    if (jmax_opt->count()) cfg.set("jmax", std::to_string(jmax));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (cfg.empty()) throw UsageError("empty config: pass --config or at least one parameter");
    job = make_job(cmd, cfg);
    // the global run controls are meaningful for every command
    for (const char* key : {"seed", "threads"})
      if (cfg.has(key)) cfg.get_int(key, 0);
    const auto unused = cfg.unused();
    if (!unused.empty()) {
      std::string list;
      for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
      throw UsageError("unknown config keys for '" + cmd + "': " + list);
    }
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::filesystem::create_directories(out_dir);
    write_artifact(out_dir, "resolved_config.json", cfg.resolved_text());
    write_artifact(out_dir, "config.hash", cfg.hash() + "\n");
    std::cout << "command: " << cmd << "\nconfig_hash: " << cfg.hash() << '\n' << cfg.resolved_text();
    std::ostringstream summary;
    summary << std::setprecision(10);
    const bool pass = job(out_dir, summary);
    summary << "result: " << (pass ? "PASS" : "FAIL") << '\n';
    write_artifact(out_dir, "summary.txt", summary.str());
    std::cout << summary.str();
    return pass ? 0 : 1;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
