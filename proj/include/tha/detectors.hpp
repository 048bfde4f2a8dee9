#pragma once

#include <array>
#include <cstdint>

#include "tha/rng.hpp"
#include "tha/symbols.hpp"

namespace tha {

enum class DetectorKind { geiger_mode, photon_number_resolving, photodiode };

/// Linear extinction ratio from its dB value: 10^{-dB/10}.
double extinction_ratio_from_db(double db);

struct DetectorSpec {
  DetectorKind kind = DetectorKind::geiger_mode;
  double efficiency = 1.0;          // eta in [0,1], thins the mean photon number
  double extinction_ratio = 0.0;    // linear leakage into the orthogonal channel
  double dead_time_s = 0.0;
  double noise_floor_sigma_w = 0.0; // photodiode only
  double dark_counts_per_gate = 0.0;  // extra Poisson mean per channel

  static DetectorSpec geiger(double efficiency, double extinction_ratio);
  static DetectorSpec ideal_pnr();
  static DetectorSpec photodiode(double noise_floor_sigma_w);

  void validate() const;
};

/// Eve's decision outcome; `vacuum` means neither channel fired.
enum class Outcome : std::uint8_t { H = 0, V = 1, D = 2, vacuum = 3 };

/// Pr(outcome | Alice's symbol); rows indexed by Symbol, columns by Outcome.
struct DetectionTable {
  std::array<std::array<double, 4>, 3> p{};

  double operator()(Symbol alice, Outcome eve) const {
    return p[index_of(alice)][static_cast<std::size_t>(eve)];
  }
};

/// Photon counts on the two channels behind Eve's PBS (CH1 = H, CH2 = V).
struct ClickOutcome {
  std::uint32_t ch1 = 0;
  std::uint32_t ch2 = 0;

  bool ch1_clicked() const noexcept { return ch1 > 0; }
  bool ch2_clicked() const noexcept { return ch2 > 0; }
  std::uint32_t total() const noexcept { return ch1 + ch2; }
};

/// Which model to use for the ideal photon-number-resolving curve.
enum class PnrModel {
  /// Guess probability conditioned on the detected photon number n,
  /// 1 - (2/3) 2^{-n}, averaged over Poisson(mu): P(0)=1/3, P(1)=2/3.
  photon_number_conditioned,
  /// (1/3)Pr(0) + (2/3)Pr(1) + (1/3)(Pr(H|H)+Pr(V|V)+Pr(D|D))(1-Pr(0)-Pr(1))
  /// with unconditioned click probabilities.
  literal,
};

/// c(nu) = 1 - e^{-nu}.
double p_click(double nu);
/// c-bar(nu) = e^{-nu}.
double p_noclick(double nu);

DetectionTable detection_table(double mu_out, const DetectorSpec& spec);

/// Table I truth table: CH1 only -> H, CH2 only -> V, both -> D.
Outcome decide(const ClickOutcome& c) noexcept;

/// Eve's guess for an outcome; vacuum becomes a uniform random symbol.
Symbol guess_from_outcome(Outcome o, Rng& rng);

/// Correct-guess probability of the Bayes photon-counting strategy given n
/// detected photons: 1 - (2/3) 2^{-n}.
double pnr_guess_given_photons(unsigned n);

/// Eve's average probability of guessing Alice's symbol from the click
/// pattern at mean photon number `mu_out`.
double eve_guess_prob(double mu_out, const DetectorSpec& spec,
                      PnrModel model = PnrModel::photon_number_conditioned);

ClickOutcome sample_clicks(Symbol symbol, double mu_out, const DetectorSpec& spec, Rng& rng);
ClickOutcome sample_clicks(Symbol symbol, double mu_out, const DetectorSpec& spec,
                           std::uint64_t rng_seed);

/// 1 / dead_time.
double max_rep_rate(double dead_time_s);

/// Uniform draw from {0,1,2} by rejection on raw 64-bit output, so the
/// sequence is identical across standard libraries.
inline unsigned uniform3(Rng& rng) {
  constexpr std::uint64_t limit = (~std::uint64_t{0} / 3) * 3;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<unsigned>(x % 3);
}

}  // namespace tha
