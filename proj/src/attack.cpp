#include "tha/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tha/error.hpp"
#include "tha/rng.hpp"

namespace tha {

namespace {

std::size_t commensurate_samples(const WaveformTrace& trace, double period_s) {
  if (!(period_s > 0.0)) throw DomainError("fold period must be > 0");
  if (!(trace.sample_period_s > 0.0)) throw DomainError("sample period must be > 0");
  const double ratio = period_s / trace.sample_period_s;
  const double r = std::round(ratio);
  if (r < 1.0 || std::abs(ratio - r) > 1e-6 * ratio)
    throw DomainError("fold period is not an integer multiple of the sample period");
  return static_cast<std::size_t>(r);
}

FoldedProfile fold(const WaveformTrace& trace, double period_s, std::size_t n_bins, bool parallel) {
  const std::size_t spp = commensurate_samples(trace, period_s);
  if (n_bins == 0) n_bins = spp;
  if (n_bins > spp) throw DomainError("more phase bins than samples per period");

  const std::size_t n = trace.samples.size();
  const auto n_chunks = static_cast<std::ptrdiff_t>((n + kTraceChunk - 1) / kTraceChunk);
  std::vector<double> part_sum(static_cast<std::size_t>(n_chunks) * n_bins, 0.0);
  std::vector<std::size_t> part_cnt(static_cast<std::size_t>(n_chunks) * n_bins, 0);

#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kTraceChunk;
    const std::size_t end = std::min(n, begin + kTraceChunk);
    double* sum = part_sum.data() + static_cast<std::size_t>(c) * n_bins;
    std::size_t* cnt = part_cnt.data() + static_cast<std::size_t>(c) * n_bins;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t b = (i % spp) * n_bins / spp;
      sum[b] += trace.samples[i];
      ++cnt[b];
    }
  }

  FoldedProfile prof;
  prof.period_s = period_s;
  prof.sample_period_s = trace.sample_period_s;
  prof.bin_width_s = period_s / static_cast<double>(n_bins);
  prof.bin_means.assign(n_bins, 0.0);
  prof.bin_counts.assign(n_bins, 0);
  for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      prof.bin_means[b] += part_sum[static_cast<std::size_t>(c) * n_bins + b];
      prof.bin_counts[b] += part_cnt[static_cast<std::size_t>(c) * n_bins + b];
    }
  }
  for (std::size_t b = 0; b < n_bins; ++b)
    if (prof.bin_counts[b] > 0) prof.bin_means[b] /= static_cast<double>(prof.bin_counts[b]);
  return prof;
}

struct SlotGeometry {
  double first_slot_start;
  double period;
};

SlotGeometry slots_of(const WaveformTrace& trace) {
  // CW symbols occupy [offset + kT, offset + (k+1)T); pulses are centred on
  // offset + kT.
  const double shift = trace.regime == LaserRegime::pulsed ? 0.5 * trace.symbol_period_s : 0.0;
  return {trace.true_offset_s - shift, trace.symbol_period_s};
}

double mean_and_sigma(const std::vector<double>& v, double& sigma) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  sigma = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return m;
}

double refine_peak(const WaveformTrace& trace, const FoldedProfile& coarse, double phase_s) {
  const FoldedProfile fine = fold_modulo_period(trace, coarse.period_s, 0);
  const auto n = static_cast<std::ptrdiff_t>(fine.bin_means.size());
  const auto centre = static_cast<std::ptrdiff_t>(std::llround(phase_s / fine.bin_width_s));
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(coarse.bin_width_s / fine.bin_width_s));
  std::ptrdiff_t best = ((centre % n) + n) % n;
  for (std::ptrdiff_t d = -reach; d <= reach; ++d) {
    const std::ptrdiff_t b = (((centre + d) % n) + n) % n;
    if (fine.bin_means[static_cast<std::size_t>(b)] > fine.bin_means[static_cast<std::size_t>(best)]) best = b;
  }
  return static_cast<double>(best) * fine.bin_width_s;
}

void random_guesses(AttackReport& rep, const std::vector<Symbol>& truth, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  for (Symbol s : truth) ++rep.confusion[index_of(s)][uniform3(rng)];
  rep.finalize();
}

WeakAttackResult weak_attack(const SymbolSequence& seq, double mu_out, const DetectorSpec& spec,
                             std::uint64_t seed, const WeakAttackOptions& opts, bool parallel) {
  spec.validate();
  if (spec.kind == DetectorKind::photodiode)
    throw WrongRegimeError("weak-light attack needs a Geiger-mode or PNR detector");
  if (!(mu_out >= 0.0)) throw DomainError("mu_out must be >= 0");
  if (opts.rep_rate_hz > 0.0 && spec.dead_time_s > 0.0 &&
      opts.rep_rate_hz > max_rep_rate(spec.dead_time_s) * (1.0 + 1e-12))
    throw ConfigError("repetition rate exceeds 1/dead_time of the detector");

  const std::size_t n = seq.size();
  const auto n_chunks = static_cast<std::ptrdiff_t>((n + kWeakChunk - 1) / kWeakChunk);
  struct Partial {
    std::array<std::array<std::size_t, 3>, 3> confusion{};
    std::array<std::size_t, 3> events{};
    std::array<std::size_t, 3> correct{};
  };
  std::vector<Partial> parts(static_cast<std::size_t>(n_chunks));

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(c));
    Partial& p = parts[static_cast<std::size_t>(c)];
    const std::size_t begin = static_cast<std::size_t>(c) * kWeakChunk;
    const std::size_t end = std::min(n, begin + kWeakChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const Symbol truth = seq[i];
      const ClickOutcome clicks = sample_clicks(truth, mu_out, spec, rng);
      const Symbol guess = guess_from_outcome(decide(clicks), rng);
      ++p.confusion[index_of(truth)][index_of(guess)];
      const std::size_t bucket = std::min<std::size_t>(clicks.total(), 2);
      ++p.events[bucket];
      if (guess == truth) ++p.correct[bucket];
    }
  }

  WeakAttackResult res;
  res.report.regime = AttackRegime::weak;
  res.report.mu_out = mu_out;
  for (const auto& p : parts) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) res.report.confusion[a][b] += p.confusion[a][b];
    for (int k = 0; k < 3; ++k) {
      res.events_by_photons[k] += p.events[k];
      res.correct_by_photons[k] += p.correct[k];
    }
  }
  res.report.finalize();
  return res;
}

}  // namespace

FoldedProfile fold_modulo_period(const WaveformTrace& trace, double period_s, std::size_t n_bins) {
  return fold(trace, period_s, n_bins, true);
}

FoldedProfile fold_modulo_period_serial(const WaveformTrace& trace, double period_s, std::size_t n_bins) {
  return fold(trace, period_s, n_bins, false);
}

FoldedHistogram2D fold_histogram2d(const WaveformTrace& trace, double period_s, std::size_t phase_bins,
                                   std::size_t intensity_bins) {
  const std::size_t spp = commensurate_samples(trace, period_s);
  if (phase_bins == 0 || phase_bins > spp || intensity_bins == 0)
    throw DomainError("invalid histogram dimensions");
  FoldedHistogram2D h;
  h.phase_bins = phase_bins;
  h.intensity_bins = intensity_bins;
  h.counts.assign(phase_bins * intensity_bins, 0);
  if (trace.samples.empty()) return h;
  const auto [lo, hi] = std::minmax_element(trace.samples.begin(), trace.samples.end());
  h.intensity_min = *lo;
  h.intensity_max = *hi;
  const double span = h.intensity_max - h.intensity_min;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const std::size_t pb = (i % spp) * phase_bins / spp;
    std::size_t ib = 0;
    if (span > 0.0) {
      ib = static_cast<std::size_t>((trace.samples[i] - h.intensity_min) / span * static_cast<double>(intensity_bins));
      ib = std::min(ib, intensity_bins - 1);
    }
    ++h.counts[pb * intensity_bins + ib];
  }
  return h;
}

double locate_first_symbol(const FoldedProfile& profile, LaserRegime regime) {
  const auto& m = profile.bin_means;
  if (m.empty()) throw LocateFailure("empty folded profile");
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  const double ptp = *hi - *lo;
  const double scale = std::max(std::abs(*hi), std::abs(*lo));
  if (!(ptp > 1e-12 * scale) || ptp == 0.0) throw LocateFailure("folded profile is flat");

  const std::size_t n = m.size();
  if (regime == LaserRegime::pulsed) {
    const auto b = static_cast<std::size_t>(hi - m.begin());
    return static_cast<double>(b) * profile.bin_width_s +
           0.5 * std::max(0.0, profile.bin_width_s - profile.sample_period_s);
  }
  std::size_t best = 0;
  double best_grad = -1.0;
  for (std::size_t b = 0; b < n; ++b) {
    const double g = std::abs(m[b] - m[(b + n - 1) % n]);
    if (g > best_grad) {
      best_grad = g;
      best = b;
    }
  }
  return static_cast<double>(best) * profile.bin_width_s;
}

Symbol ThresholdSet::classify(double x) const noexcept {
  const Symbol bright = orientation == ThresholdOrientation::pulsed_mapping ? Symbol::H : Symbol::V;
  const Symbol dark = orientation == ThresholdOrientation::pulsed_mapping ? Symbol::V : Symbol::H;
  if (x > t_high) return bright;
  if (x >= t_low) return Symbol::D;
  return dark;
}

double bayes_threshold(double nu_low, double sigma_low, double nu_high, double sigma_high) {
  if (!(sigma_low > 0.0 && sigma_high > 0.0)) throw DomainError("class sigmas must be > 0");
  if (!(nu_high > nu_low)) throw DegenerateThresholdError("class means must be distinct and ordered");
  if (std::abs(sigma_low - sigma_high) <= 1e-9 * std::max(sigma_low, sigma_high))
    return 0.5 * (nu_low + nu_high);

  // Log-density difference; its zero between the means is the density crossing.
  auto diff = [&](double t) {
    const double zl = (t - nu_low) / sigma_low;
    const double zh = (t - nu_high) / sigma_high;
    return (-std::log(sigma_low) - 0.5 * zl * zl) - (-std::log(sigma_high) - 0.5 * zh * zh);
  };
  double a = nu_low, b = nu_high;
  double fa = diff(a), fb = diff(b);
  if (fa > 0.0 && fb < 0.0) {
    for (int i = 0; i < 200 && b - a > 1e-15 * (std::abs(a) + std::abs(b) + 1e-300); ++i) {
      const double mid = 0.5 * (a + b);
      const double fm = diff(mid);
      if (fm > 0.0) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
      }
    }
    return 0.5 * (a + b);
  }
  // No crossing between the means: minimize the total error directly.
  auto err = [&](double t) {
    return 0.5 * std::erfc((t - nu_low) / (sigma_low * std::sqrt(2.0))) +
           0.5 * std::erfc((nu_high - t) / (sigma_high * std::sqrt(2.0)));
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  a = nu_low;
  b = nu_high;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double e1 = err(x1), e2 = err(x2);
  for (int i = 0; i < 200; ++i) {
    if (e1 < e2) {
      b = x2;
      x2 = x1;
      e2 = e1;
      x1 = b - phi * (b - a);
      e1 = err(x1);
    } else {
      a = x1;
      x1 = x2;
      e1 = e2;
      x2 = a + phi * (b - a);
      e2 = err(x2);
    }
  }
  return 0.5 * (a + b);
}

ThresholdSet bayes_thresholds(const std::array<double, 3>& means, const std::array<double, 3>& sigmas) {
  const double h = means[index_of(Symbol::H)];
  const double v = means[index_of(Symbol::V)];
  const double d = means[index_of(Symbol::D)];
  const double sh = sigmas[index_of(Symbol::H)];
  const double sv = sigmas[index_of(Symbol::V)];
  const double sd = sigmas[index_of(Symbol::D)];
  if (h == v || h == d || v == d) throw DegenerateThresholdError("coincident class means");
  ThresholdSet t;
  if (h > v) {
    if (!(v < d && d < h)) throw DegenerateThresholdError("D mean is not between H and V");
    t.orientation = ThresholdOrientation::pulsed_mapping;
    t.t_low = bayes_threshold(v, sv, d, sd);
    t.t_high = bayes_threshold(d, sd, h, sh);
  } else {
    if (!(h < d && d < v)) throw DegenerateThresholdError("D mean is not between H and V");
    t.orientation = ThresholdOrientation::cw_mapping;
    t.t_low = bayes_threshold(h, sh, d, sd);
    t.t_high = bayes_threshold(d, sd, v, sv);
  }
  if (!(t.t_low < t.t_high)) throw DegenerateThresholdError("thresholds are not ordered");
  return t;
}

const char* to_string(AttackRegime r) noexcept {
  switch (r) {
    case AttackRegime::weak: return "weak";
    case AttackRegime::cw: return "cw";
    case AttackRegime::pulsed: return "pulsed";
  }
  return "?";
}

AttackRegime attack_regime_from_string(const std::string& s) {
  if (s == "weak") return AttackRegime::weak;
  if (s == "cw") return AttackRegime::cw;
  if (s == "pulsed") return AttackRegime::pulsed;
  throw ConfigError("unknown attack regime '" + s + "'");
}

std::size_t AttackReport::total() const noexcept {
  std::size_t t = 0;
  for (const auto& row : confusion)
    for (auto c : row) t += c;
  return t;
}

std::size_t AttackReport::correct() const noexcept {
  return confusion[0][0] + confusion[1][1] + confusion[2][2];
}

void AttackReport::finalize() noexcept {
  const auto t = total();
  accuracy = t ? static_cast<double>(correct()) / static_cast<double>(t) : 0.0;
}

std::vector<double> symbol_readouts(const WaveformTrace& trace, double readout_phase_s, std::size_t window) {
  trace.validate();
  if (window == 0) throw DomainError("readout window must be >= 1 sample");
  if (trace.samples.empty()) throw DomainError("empty trace");
  const auto geo = slots_of(trace);
  const auto last = static_cast<std::ptrdiff_t>(trace.samples.size()) - 1;
  const auto half = static_cast<std::ptrdiff_t>((window - 1) / 2);
  std::vector<double> out(trace.true_symbols.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double slot_start = geo.first_slot_start + static_cast<double>(k) * geo.period;
    const double j = std::ceil((slot_start - readout_phase_s) / geo.period - 1e-9);
    const double tau = readout_phase_s + j * geo.period;
    const auto centre = static_cast<std::ptrdiff_t>(std::llround(tau / trace.sample_period_s));
    double acc = 0.0;
    for (std::size_t w = 0; w < window; ++w) {
      const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(centre - half + static_cast<std::ptrdiff_t>(w), 0, last);
      acc += trace.samples[static_cast<std::size_t>(idx)];
    }
    out[k] = acc / static_cast<double>(window);
  }
  return out;
}

AttackReport classify_strong(const WaveformTrace& trace, double readout_phase_s,
                             const ThresholdSet& thresholds, std::size_t window) {
  const auto values = symbol_readouts(trace, readout_phase_s, window);
  AttackReport rep;
  rep.regime = trace.regime == LaserRegime::cw ? AttackRegime::cw : AttackRegime::pulsed;
  for (std::size_t k = 0; k < values.size(); ++k)
    ++rep.confusion[index_of(trace.true_symbols[k])][index_of(thresholds.classify(values[k]))];
  rep.finalize();
  return rep;
}

StrongAttackResult run_strong_attack(const WaveformTrace& trace, const StrongAttackOptions& opts) {
  trace.validate();
  if (!(opts.calibration_fraction > 0.0 && opts.calibration_fraction <= 1.0))
    throw ConfigError("calibration fraction must lie in (0, 1]");
  StrongAttackResult res;
  res.report.regime = trace.regime == LaserRegime::cw ? AttackRegime::cw : AttackRegime::pulsed;
  const double period = trace.symbol_period_s;
  const std::size_t spp = trace.samples_per_period();
  res.profile = fold_modulo_period(trace, period, std::min(opts.bins_per_period, spp));

  try {
    res.located_phase_s = locate_first_symbol(res.profile, trace.regime);
  } catch (const LocateFailure&) {
    res.locate_failed = true;
    random_guesses(res.report, trace.true_symbols, opts.fallback_seed);
    return res;
  }
  if (trace.regime == LaserRegime::cw) {
    res.readout_phase_s = std::fmod(res.located_phase_s + opts.cw_readout_fraction * period, period);
  } else {
    res.readout_phase_s = res.located_phase_s;
    if (opts.refine_pulsed_peak) res.readout_phase_s = refine_peak(trace, res.profile, res.located_phase_s);
  }

  const auto values = symbol_readouts(trace, res.readout_phase_s, opts.window);
  const auto n_cal = static_cast<std::size_t>(
      std::ceil(opts.calibration_fraction * static_cast<double>(values.size())));
  std::array<std::vector<double>, 3> by_class;
  for (std::size_t k = 0; k < n_cal; ++k) by_class[index_of(trace.true_symbols[k])].push_back(values[k]);

  try {
    for (const auto& c : by_class)
      if (c.size() < 2) throw DegenerateThresholdError("calibration prefix lacks a class");
    for (int c = 0; c < 3; ++c) res.class_means[c] = mean_and_sigma(by_class[c], res.class_sigmas[c]);
    const auto [lo, hi] = std::minmax_element(res.class_means.begin(), res.class_means.end());
    const double floor = std::max(1e-6 * (*hi - *lo), std::numeric_limits<double>::min());
    std::array<double, 3> sig{};
    for (int c = 0; c < 3; ++c) sig[c] = std::max(res.class_sigmas[c], floor);
    res.thresholds = bayes_thresholds(res.class_means, sig);
  } catch (const DegenerateThresholdError&) {
    res.threshold_failed = true;
    random_guesses(res.report, trace.true_symbols, opts.fallback_seed);
    return res;
  }

  for (std::size_t k = 0; k < values.size(); ++k)
    ++res.report.confusion[index_of(trace.true_symbols[k])][index_of(res.thresholds.classify(values[k]))];
  res.report.finalize();
  return res;
}

WeakAttackResult run_weak_attack(const SymbolSequence& seq, double mu_out, const DetectorSpec& spec,
                                 std::uint64_t rng_seed, const WeakAttackOptions& opts) {
  return weak_attack(seq, mu_out, spec, rng_seed, opts, true);
}

WeakAttackResult run_weak_attack_serial(const SymbolSequence& seq, double mu_out, const DetectorSpec& spec,
                                        std::uint64_t rng_seed, const WeakAttackOptions& opts) {
  return weak_attack(seq, mu_out, spec, rng_seed, opts, false);
}

}  // namespace tha
