#include "tha/detectors.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tha/error.hpp"

namespace tha {

namespace {

void check_nu(double nu) {
  if (!(nu >= 0.0) || std::isnan(nu))
    throw DomainError("mean photon number must be >= 0, got " + std::to_string(nu));
}

// Mean photon numbers on CH1 / CH2 for each of Alice's symbols.
std::array<double, 2> channel_means(Symbol s, double mu_out, const DetectorSpec& spec) {
  const double m = spec.efficiency * mu_out;
  const double leak = spec.kind == DetectorKind::photon_number_resolving &&
                              spec.extinction_ratio == 0.0
                          ? 0.0
                          : spec.extinction_ratio;
  const double dark = spec.dark_counts_per_gate;
  switch (s) {
    case Symbol::H: return {m + dark, m * leak + dark};
    case Symbol::V: return {m * leak + dark, m + dark};
    case Symbol::D: return {0.5 * m + dark, 0.5 * m + dark};
  }
  return {0.0, 0.0};
}

}  // namespace

double extinction_ratio_from_db(double db) { return std::pow(10.0, -db / 10.0); }

DetectorSpec DetectorSpec::geiger(double efficiency, double extinction_ratio) {
  DetectorSpec s;
  s.kind = DetectorKind::geiger_mode;
  s.efficiency = efficiency;
  s.extinction_ratio = extinction_ratio;
  s.validate();
  return s;
}

DetectorSpec DetectorSpec::ideal_pnr() {
  DetectorSpec s;
  s.kind = DetectorKind::photon_number_resolving;
  return s;
}

DetectorSpec DetectorSpec::photodiode(double noise_floor_sigma_w) {
  DetectorSpec s;
  s.kind = DetectorKind::photodiode;
  s.noise_floor_sigma_w = noise_floor_sigma_w;
  s.validate();
  return s;
}

void DetectorSpec::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("efficiency must lie in [0,1]");
  if (!(extinction_ratio >= 0.0)) throw DomainError("extinction ratio must be >= 0");
  if (!(dead_time_s >= 0.0)) throw DomainError("dead time must be >= 0");
  if (!(noise_floor_sigma_w >= 0.0)) throw DomainError("noise floor must be >= 0");
  if (!(dark_counts_per_gate >= 0.0)) throw DomainError("dark count mean must be >= 0");
}

double p_click(double nu) {
  check_nu(nu);
  return -std::expm1(-nu);
}

double p_noclick(double nu) {
  check_nu(nu);
  return std::exp(-nu);
}

DetectionTable detection_table(double mu_out, const DetectorSpec& spec) {
  check_nu(mu_out);
  spec.validate();
  DetectionTable t;
  for (Symbol s : kAllSymbols) {
    const auto [m1, m2] = channel_means(s, mu_out, spec);
    const double c1 = p_click(m1), n1 = p_noclick(m1);
    const double c2 = p_click(m2), n2 = p_noclick(m2);
    auto& row = t.p[index_of(s)];
    row[static_cast<std::size_t>(Outcome::H)] = c1 * n2;
    row[static_cast<std::size_t>(Outcome::V)] = n1 * c2;
    row[static_cast<std::size_t>(Outcome::D)] = c1 * c2;
    row[static_cast<std::size_t>(Outcome::vacuum)] = n1 * n2;
  }
  return t;
}

Outcome decide(const ClickOutcome& c) noexcept {
  if (c.ch1_clicked() && c.ch2_clicked()) return Outcome::D;
  if (c.ch1_clicked()) return Outcome::H;
  if (c.ch2_clicked()) return Outcome::V;
  return Outcome::vacuum;
}

Symbol guess_from_outcome(Outcome o, Rng& rng) {
  if (o == Outcome::vacuum) return kAllSymbols[uniform3(rng)];
  return static_cast<Symbol>(static_cast<std::uint8_t>(o));
}

double pnr_guess_given_photons(unsigned n) { return 1.0 - (2.0 / 3.0) * std::ldexp(1.0, -static_cast<int>(n)); }

double eve_guess_prob(double mu_out, const DetectorSpec& spec, PnrModel model) {
  check_nu(mu_out);
  spec.validate();
  if (spec.kind == DetectorKind::photodiode)
    throw WrongRegimeError("click-based guessing needs a Geiger-mode or PNR detector");

  const bool ideal_counts = spec.kind == DetectorKind::photon_number_resolving &&
                            spec.extinction_ratio == 0.0 && spec.dark_counts_per_gate == 0.0;
  if (ideal_counts) {
    const double m = spec.efficiency * mu_out;
    const double pr0 = std::exp(-m);
    const double pr1 = m * std::exp(-m);
    const double rest = std::max(0.0, 1.0 - pr0 - pr1);
    if (model == PnrModel::literal) {
      const double g2 = (2.0 * p_click(m) + p_click(0.5 * m) * p_click(0.5 * m)) / 3.0;
      return pr0 / 3.0 + 2.0 * pr1 / 3.0 + g2 * rest;
    }
    // sum_{n>=2} Pois(n) (1 - (2/3)2^{-n}) = rest - (2/3)(e^{-m/2} - e^{-m} - m e^{-m}/2)
    const double tail = rest - (2.0 / 3.0) * (std::exp(-0.5 * m) - pr0 - 0.5 * pr1);
    return pr0 / 3.0 + 2.0 * pr1 / 3.0 + tail;
  }

  const auto t = detection_table(mu_out, spec);
  double pg = 0.0;
  for (Symbol s : kAllSymbols) {
    pg += t(s, static_cast<Outcome>(index_of(s))) + t(s, Outcome::vacuum) / 3.0;
  }
  return pg / 3.0;
}

ClickOutcome sample_clicks(Symbol symbol, double mu_out, const DetectorSpec& spec, Rng& rng) {
  check_nu(mu_out);
  const auto [m1, m2] = channel_means(symbol, mu_out, spec);
  ClickOutcome out;
  if (m1 > 0.0) out.ch1 = static_cast<std::uint32_t>(std::poisson_distribution<std::uint64_t>(m1)(rng));
  if (m2 > 0.0) out.ch2 = static_cast<std::uint32_t>(std::poisson_distribution<std::uint64_t>(m2)(rng));
  return out;
}

ClickOutcome sample_clicks(Symbol symbol, double mu_out, const DetectorSpec& spec,
                           std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return sample_clicks(symbol, mu_out, spec, rng);
}

double max_rep_rate(double dead_time_s) {
  if (!(dead_time_s > 0.0)) throw DomainError("dead time must be > 0");
  return 1.0 / dead_time_s;
}

}  // namespace tha
