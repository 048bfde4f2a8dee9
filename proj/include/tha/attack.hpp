#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tha/detectors.hpp"
#include "tha/photonics.hpp"

namespace tha {

/// One symbol period's worth of phase bins, averaged over the whole trace.
struct FoldedProfile {
  double period_s = 0.0;
  double sample_period_s = 0.0;
  double bin_width_s = 0.0;
  std::vector<double> bin_means;
  std::vector<std::size_t> bin_counts;
};

/// Intensity x phase occupancy counts of a folded trace (row-major by phase).
struct FoldedHistogram2D {
  std::size_t phase_bins = 0;
  std::size_t intensity_bins = 0;
  double intensity_min = 0.0;
  double intensity_max = 0.0;
  std::vector<std::size_t> counts;

  std::size_t at(std::size_t phase, std::size_t intensity) const {
    return counts[phase * intensity_bins + intensity];
  }
};

/// Fold a trace modulo `period_s`. `n_bins` = 0 gives one bin per sample
/// phase. Partial sums are accumulated in fixed chunks and combined in
/// order, so the parallel and serial variants agree bit for bit.
FoldedProfile fold_modulo_period(const WaveformTrace& trace, double period_s, std::size_t n_bins = 0);
FoldedProfile fold_modulo_period_serial(const WaveformTrace& trace, double period_s,
                                        std::size_t n_bins = 0);

FoldedHistogram2D fold_histogram2d(const WaveformTrace& trace, double period_s,
                                   std::size_t phase_bins, std::size_t intensity_bins);

/// Phase of the first symbol within one period. Pulsed: the peak of the
/// folded mean. CW: the steepest circular transition of the folded mean,
/// which marks the symbol boundary. Throws LocateFailure on a flat profile.
double locate_first_symbol(const FoldedProfile& profile, LaserRegime regime);

enum class ThresholdOrientation {
  cw_mapping,      // above t_high -> V, between -> D, below t_low -> H
  pulsed_mapping,  // above t_high -> H, between -> D, below t_low -> V
};

struct ThresholdSet {
  double t_low = 0.0;
  double t_high = 0.0;
  ThresholdOrientation orientation = ThresholdOrientation::pulsed_mapping;

  Symbol classify(double x) const noexcept;
};

/// Minimum-error threshold between two equiprobable Gaussian classes with
/// nu_low < nu_high: the midpoint for equal sigmas, otherwise the density
/// crossing between the means.
double bayes_threshold(double nu_low, double sigma_low, double nu_high, double sigma_high);

/// Thresholds for the three classes; means and sigmas are indexed by Symbol.
/// D must sit strictly between H and V; the orientation follows from
/// whether H or V is the bright class.
ThresholdSet bayes_thresholds(const std::array<double, 3>& means, const std::array<double, 3>& sigmas);

enum class AttackRegime { weak, cw, pulsed };
const char* to_string(AttackRegime r) noexcept;
AttackRegime attack_regime_from_string(const std::string& s);

struct AttackReport {
  /// confusion[true][guess], indexed by Symbol.
  std::array<std::array<std::size_t, 3>, 3> confusion{};
  double accuracy = 0.0;
  double mu_out = 0.0;
  double attenuation_db = 0.0;
  AttackRegime regime = AttackRegime::weak;

  std::size_t total() const noexcept;
  std::size_t correct() const noexcept;
  /// Recomputes accuracy from the confusion matrix.
  void finalize() noexcept;
};

/// Mean of `window` samples around each symbol's readout instant
/// `readout_phase_s + j T`, one value per true symbol. The readout is
/// matched to the symbol whose slot it falls in, so every symbol is read
/// exactly once.
std::vector<double> symbol_readouts(const WaveformTrace& trace, double readout_phase_s,
                                    std::size_t window = 3);

AttackReport classify_strong(const WaveformTrace& trace, double readout_phase_s,
                             const ThresholdSet& thresholds, std::size_t window = 3);

struct StrongAttackOptions {
  std::size_t bins_per_period = 100;
  /// Leading fraction of symbols with known labels used to fit class means.
  double calibration_fraction = 0.1;
  std::size_t window = 3;
  /// CW readout position after the located boundary, as a fraction of T.
  double cw_readout_fraction = 0.625;
  /// Pulsed only: refine the peak to single-sample resolution within one
  /// coarse bin of the located phase.
  bool refine_pulsed_peak = true;
  /// Seed for random guessing when the attack cannot proceed.
  std::uint64_t fallback_seed = 0;
};

struct StrongAttackResult {
  AttackReport report;
  FoldedProfile profile;
  double located_phase_s = 0.0;
  double readout_phase_s = 0.0;
  ThresholdSet thresholds;
  std::array<double, 3> class_means{};
  std::array<double, 3> class_sigmas{};
  bool locate_failed = false;
  bool threshold_failed = false;
};

/// Full strong-light pipeline: fold, locate, calibrate on the labelled
/// prefix, threshold and score. If location or calibration fails, Eve
/// guesses uniformly at random and the matching flag is set.
StrongAttackResult run_strong_attack(const WaveformTrace& trace, const StrongAttackOptions& opts = {});

struct WeakAttackOptions {
  /// Repetition rate checked against the detector dead time (0 skips).
  double rep_rate_hz = 0.0;
};

struct WeakAttackResult {
  AttackReport report;
  /// Events and correct guesses bucketed by detected photons: 0, 1, >= 2.
  std::array<std::size_t, 3> events_by_photons{};
  std::array<std::size_t, 3> correct_by_photons{};
};

/// Symbols are processed in chunks of kWeakChunk, chunk i drawing from
/// derive_seed(seed, i).
inline constexpr std::size_t kWeakChunk = 4096;

WeakAttackResult run_weak_attack(const SymbolSequence& seq, double mu_out, const DetectorSpec& spec,
                                 std::uint64_t rng_seed, const WeakAttackOptions& opts = {});
WeakAttackResult run_weak_attack_serial(const SymbolSequence& seq, double mu_out,
                                        const DetectorSpec& spec, std::uint64_t rng_seed,
                                        const WeakAttackOptions& opts = {});

}  // namespace tha
