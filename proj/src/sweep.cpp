#include "tha/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tha/discrimination.hpp"
#include "tha/error.hpp"
#include "tha/quantum_core.hpp"
#include "tha/rng.hpp"

namespace tha {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BoundsRow bounds_row(double mu, const std::vector<GmVariant>& variants) {
  BoundsRow r;
  r.mu = mu;
  r.h_entropy_bits = von_neumann_entropy(mu);
  r.pg_holevo = holevo_pg_upper_bound(mu);
  r.pg_helstrom = helstrom_pg_or_nan(mu);
  r.pg_pgm = pgm_pg_or_nan(mu);
  r.pg_pnr = eve_guess_prob(mu, DetectorSpec::ideal_pnr());
  for (const auto& v : variants) r.pg_gm.push_back(eve_guess_prob(mu, v.spec()));
  return r;
}

std::vector<BoundsRow> bounds(const std::vector<double>& mu_grid, const std::vector<GmVariant>& variants,
                              bool parallel) {
  if (mu_grid.empty()) throw ConfigError("mu grid must be non-empty");
  for (double mu : mu_grid)
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu grid values must be finite and >= 0");
  std::vector<BoundsRow> rows(mu_grid.size());
  const auto n = static_cast<std::ptrdiff_t>(mu_grid.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rows[static_cast<std::size_t>(i)] = bounds_row(mu_grid[static_cast<std::size_t>(i)], variants);
  return rows;
}

std::vector<SweepPoint> sweep(const SweepConfig& cfg, bool parallel) {
  cfg.validate();
  const std::size_t n = cfg.regime == AttackRegime::weak && !cfg.mu_out_grid.empty() ? cfg.mu_out_grid.size()
                                                                                       : cfg.voa_db.size();
  std::vector<SweepPoint> points(n);
  const auto np = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < np; ++i)
    points[static_cast<std::size_t>(i)] = sweep_point(cfg, static_cast<std::size_t>(i));
  return points;
}

}  // namespace

DetectorSpec GmVariant::spec() const {
  return DetectorSpec::geiger(efficiency, extinction_ratio_from_db(extinction_db));
}

std::vector<GmVariant> default_gm_variants() {
  return {{"pg_gm_eta1_er21", 1.0, 21.0},
          {"pg_gm_eta1_er15", 1.0, 15.0},
          {"pg_gm_eta1_er10", 1.0, 10.0},
          {"pg_gm_eta0.8_er21", 0.8, 21.0}};
}

double helstrom_pg_or_nan(double mu) {
  try {
    return helstrom_pg(mu);
  } catch (const DegenerateEnsembleError&) {
    return kNaN;
  }
}

double pgm_pg_or_nan(double mu) {
  if (mu == 0.0) return 1.0 / 3.0;
  try {
    return pretty_good_measurement_pg(DiscriminationProblem::from_ensemble(StateEnsemble(mu)));
  } catch (const DegenerateEnsembleError&) {
    return kNaN;
  }
}

std::vector<BoundsRow> bounds_table(const std::vector<double>& mu_grid, const std::vector<GmVariant>& variants) {
  return bounds(mu_grid, variants, true);
}

std::vector<BoundsRow> bounds_table_serial(const std::vector<double>& mu_grid,
                                           const std::vector<GmVariant>& variants) {
  return bounds(mu_grid, variants, false);
}

io::CsvWriter bounds_csv(const std::vector<BoundsRow>& rows, const std::vector<GmVariant>& variants) {
  std::vector<std::string> header{"mu", "h_entropy_bits", "pg_holevo", "pg_helstrom", "pg_pgm", "pg_pnr"};
  for (const auto& v : variants) header.push_back(v.label);
  io::CsvWriter csv(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{io::format_double(r.mu), io::format_double(r.h_entropy_bits),
                                   io::format_double(r.pg_holevo), io::format_double(r.pg_helstrom),
                                   io::format_double(r.pg_pgm), io::format_double(r.pg_pnr)};
    for (double g : r.pg_gm) cells.push_back(io::format_double(g));
    csv.add_row(std::move(cells));
  }
  return csv;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi >= lo) || n == 0) throw ConfigError("log grid needs 0 < lo <= hi and n >= 1");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.back() = hi;
  return g;
}

void SweepConfig::validate() const {
  if (n_symbols == 0) throw ConfigError("n_symbols must be >= 1");
  if (regime == AttackRegime::weak) {
    if (mu_out_grid.empty() && voa_db.empty()) throw ConfigError("weak sweep needs mu_out_grid or voa_db");
    for (double m : mu_out_grid)
      if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("mu_out_grid values must be finite and >= 0");
    if (detector.kind == DetectorKind::photodiode)
      throw WrongRegimeError("weak sweep needs a Geiger-mode or PNR detector");
    detector.validate();
  } else {
    if (voa_db.empty()) throw ConfigError("strong sweep needs voa_db");
    const LaserRegime want = regime == AttackRegime::cw ? LaserRegime::cw : LaserRegime::pulsed;
    if (laser.regime != want) throw ConfigError("laser regime does not match the sweep regime");
  }
  for (double v : voa_db)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("voa_db values must be finite and >= 0");
  if (!(normalize_average_power_w >= 0.0)) throw ConfigError("normalize_average_power_w must be >= 0");
  laser.validate();
  chain.validate();
}

LaserSpec sweep_laser(const SweepConfig& cfg) {
  LaserSpec l = cfg.laser;
  if (cfg.normalize_average_power_w > 0.0) {
    l.power_w = l.regime == LaserRegime::pulsed
                    ? cfg.normalize_average_power_w / (l.rep_rate_hz * l.pulse_width_s)
                    : cfg.normalize_average_power_w;
  }
  return l;
}

SweepPoint sweep_point(const SweepConfig& cfg, std::size_t index) {
  SweepPoint pt;
  pt.regime = cfg.regime;
  pt.n_symbols = cfg.n_symbols;
  pt.seed = derive_seed(cfg.seed, index);
  const LaserSpec laser = sweep_laser(cfg);
  const double m_in = mu_in(laser);

  AttenuationChain chain = cfg.chain;
  if (cfg.regime == AttackRegime::weak && !cfg.mu_out_grid.empty()) {
    pt.mu_out = cfg.mu_out_grid[index];
    pt.attenuation_db = pt.mu_out > 0.0 && m_in > 0.0 ? 10.0 * std::log10(m_in / pt.mu_out) : kNaN;
  } else {
    chain.att_voa_db = cfg.voa_db[index];
    pt.attenuation_db = total_attenuation_db(chain);
    pt.mu_out = mu_out(m_in, chain);
  }

  const DetectorSpec gm = cfg.detector.kind == DetectorKind::photodiode
                              ? DetectorSpec::geiger(1.0, extinction_ratio_from_db(21.0))
                              : cfg.detector;
  pt.acc_analytic_gm = eve_guess_prob(pt.mu_out, gm);
  pt.acc_pnr = eve_guess_prob(pt.mu_out, DetectorSpec::ideal_pnr());
  pt.pg_helstrom = helstrom_pg_or_nan(pt.mu_out);
  pt.pg_holevo = holevo_pg_upper_bound(pt.mu_out);

  try {
    const auto seq = SymbolSequence::random(cfg.n_symbols, derive_seed(pt.seed, 1));
    if (cfg.regime == AttackRegime::weak) {
      pt.accuracy = run_weak_attack_serial(seq, pt.mu_out, cfg.detector, derive_seed(pt.seed, 2)).report.accuracy;
    } else {
      TraceRequest req;
      req.shape = cfg.shape;
      req.noise_sigma_w = cfg.noise_sigma_w;
      req.bandwidth_hz = cfg.bandwidth_hz;
      req.seed = derive_seed(pt.seed, 3);
      const std::size_t spp = std::max<std::size_t>(cfg.shape.samples_per_period, 1);
      req.offset_s = static_cast<double>(derive_seed(pt.seed, 4) % spp) * laser.symbol_period_s() /
                     static_cast<double>(spp);
      const auto trace = synthesize_trace_serial(seq, laser, chain, req);
      StrongAttackOptions opts = cfg.attack;
      opts.fallback_seed = derive_seed(pt.seed, 5);
      const auto res = run_strong_attack(trace, opts);
      pt.accuracy = res.report.accuracy;
      if (res.locate_failed) {
        pt.failed = true;
        pt.failure = "locate_failure";
      } else if (res.threshold_failed) {
        pt.failed = true;
        pt.failure = "degenerate_threshold";
      }
    }
  } catch (const Error& e) {
    pt.accuracy = 1.0 / 3.0;
    pt.failed = true;
    pt.failure = e.code();
  }
  return pt;
}

std::vector<SweepPoint> accuracy_sweep(const SweepConfig& cfg) { return sweep(cfg, true); }

std::vector<SweepPoint> accuracy_sweep_serial(const SweepConfig& cfg) { return sweep(cfg, false); }

io::CsvWriter sweep_csv(const std::vector<SweepPoint>& points) {
  io::CsvWriter csv({"regime", "attenuation_db", "mu_out", "accuracy", "acc_analytic_gm", "acc_pnr",
                     "pg_helstrom", "pg_holevo", "n_symbols", "seed", "failed"});
  for (const auto& p : points)
    csv.add_row({to_string(p.regime), io::format_double(p.attenuation_db), io::format_double(p.mu_out),
                 io::format_double(p.accuracy), io::format_double(p.acc_analytic_gm),
                 io::format_double(p.acc_pnr), io::format_double(p.pg_helstrom),
                 io::format_double(p.pg_holevo), std::to_string(p.n_symbols), std::to_string(p.seed),
                 p.failed ? "1" : "0"});
  return csv;
}

double crossing_db(const std::vector<SweepPoint>& points, double level) {
  std::vector<const SweepPoint*> sorted;
  for (const auto& p : points)
    if (std::isfinite(p.attenuation_db)) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const SweepPoint* a, const SweepPoint* b) { return a->attenuation_db < b->attenuation_db; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double a0 = sorted[i - 1]->accuracy, a1 = sorted[i]->accuracy;
    if (a0 >= level && a1 < level) {
      const double x0 = sorted[i - 1]->attenuation_db, x1 = sorted[i]->attenuation_db;
      return x0 + (a0 - level) / (a0 - a1) * (x1 - x0);
    }
  }
  return kNaN;
}

}  // namespace tha
