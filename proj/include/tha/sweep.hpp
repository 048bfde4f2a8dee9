#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tha/attack.hpp"
#include "tha/detectors.hpp"
#include "tha/io.hpp"
#include "tha/photonics.hpp"

namespace tha {

/// A Geiger-mode curve in the bounds table.
struct GmVariant {
  std::string label;
  double efficiency = 1.0;
  double extinction_db = 21.0;

  DetectorSpec spec() const;
};

std::vector<GmVariant> default_gm_variants();

struct BoundsRow {
  double mu = 0.0;
  double h_entropy_bits = 0.0;
  double pg_holevo = 0.0;
  double pg_helstrom = 0.0;  // NaN where the ensemble is numerically degenerate
  double pg_pgm = 0.0;
  double pg_pnr = 0.0;
  std::vector<double> pg_gm;
};

/// Every analytic guess probability at each mu, in grid order.
std::vector<BoundsRow> bounds_table(const std::vector<double>& mu_grid,
                                    const std::vector<GmVariant>& variants);
std::vector<BoundsRow> bounds_table_serial(const std::vector<double>& mu_grid,
                                           const std::vector<GmVariant>& variants);

io::CsvWriter bounds_csv(const std::vector<BoundsRow>& rows, const std::vector<GmVariant>& variants);

/// log-spaced grid of n points over [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Helstrom p_g, or NaN when the ensemble is too close to degenerate to
/// orthonormalize.
double helstrom_pg_or_nan(double mu);
double pgm_pg_or_nan(double mu);

struct SweepConfig {
  AttackRegime regime = AttackRegime::weak;
  /// VOA settings; strong regimes require it. A weak sweep uses it with
  /// `laser` and `chain` when `mu_out_grid` is empty.
  std::vector<double> voa_db;
  std::vector<double> mu_out_grid;
  LaserSpec laser{};
  AttenuationChain chain{};
  DetectorSpec detector = DetectorSpec::geiger(1.0, extinction_ratio_from_db(21.0));
  std::size_t n_symbols = 3000;
  std::uint64_t seed = 1;
  double noise_sigma_w = 5e-6;
  double bandwidth_hz = 2e9;
  WaveformShape shape{};
  StrongAttackOptions attack{};
  /// Rescale the laser so its average power equals this value (0 keeps it).
  double normalize_average_power_w = 0.0;

  void validate() const;
};

struct SweepPoint {
  AttackRegime regime = AttackRegime::weak;
  double attenuation_db = 0.0;
  double mu_out = 0.0;
  double accuracy = 0.0;
  double acc_analytic_gm = 0.0;
  double acc_pnr = 0.0;
  double pg_helstrom = 0.0;
  double pg_holevo = 0.0;
  std::size_t n_symbols = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
};

/// Laser actually used by the sweep after optional power normalization.
LaserSpec sweep_laser(const SweepConfig& cfg);

/// One report per grid point, ordered by grid index. Point i runs on
/// derive_seed(cfg.seed, i) whatever the thread count. A point that
/// cannot be attacked scores 1/3 and sets `failed`.
std::vector<SweepPoint> accuracy_sweep(const SweepConfig& cfg);
std::vector<SweepPoint> accuracy_sweep_serial(const SweepConfig& cfg);

SweepPoint sweep_point(const SweepConfig& cfg, std::size_t index);

io::CsvWriter sweep_csv(const std::vector<SweepPoint>& points);

/// Attenuation where accuracy first falls through `level`, linearly
/// interpolated between grid points; NaN if it never does.
double crossing_db(const std::vector<SweepPoint>& points, double level = 0.5);

}  // namespace tha
