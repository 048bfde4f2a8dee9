#pragma once

#include <string>
#include <vector>

#include "tha/io.hpp"
#include "tha/photonics.hpp"

namespace tha {

enum class DamageKind { thermal, ablation };
const char* to_string(DamageKind k) noexcept;
DamageKind damage_kind_from_string(const std::string& s);

/// Power above which the fiber components are damaged.
struct DamageLimit {
  DamageKind kind = DamageKind::thermal;
  double max_power_w = 10.0;

  static DamageLimit thermal() { return {DamageKind::thermal, 10.0}; }
  static DamageLimit ablation() { return {DamageKind::ablation, 1e6}; }
  void validate() const;
};

/// One-way VOA attenuation A = (10 log10(mu_in / mu_out) - delta_p) / 2,
/// clamped at zero. Throws DomainError if mu_out_target > mu_in.
double required_attenuation_db(double mu_in, double mu_out_target, double delta_p_db);

/// Total output attenuation 10 log10(mu_in / mu_out), the other convention.
double total_output_attenuation_db(double mu_in, double mu_out_target);

struct GridCell {
  double p_in_w = 0.0;
  double dt_s = 0.0;
  double mu_in = 0.0;
  double a_db = 0.0;
  bool feasible = true;  // false when the attacker would exceed the damage limit
};

struct GridSpec {
  std::vector<double> p_in_w;
  std::vector<double> dt_s;
  DamageLimit limit{};
  double mu_out_target = 0.1;
  double wavelength_m = 1550e-9;
  double delta_p_db = 6.0;
};

/// Row-major over (p_in, dt).
std::vector<GridCell> countermeasure_grid(const GridSpec& spec);
std::vector<GridCell> countermeasure_grid_serial(const GridSpec& spec);
io::CsvWriter grid_csv(const std::vector<GridCell>& cells);

struct PlanInputs {
  double attacker_power_w = 10.0;
  double attacker_pulse_width_s = 20e-9;
  double wavelength_m = 1550e-9;
  double mu_out_target = 0.1;
  double delta_p_db = 6.0;
  double margin_db = 5.0;
  DamageLimit limit{};
  /// Eve's guess probability at the target must not exceed this to be secure.
  double secure_pg = 0.37;
};

struct CountermeasurePlan {
  double mu_in = 0.0;
  double target_mu_out = 0.0;
  double required_voa_db = 0.0;
  double implied_isolation_db = 0.0;
  double total_output_attenuation_db = 0.0;
  double margin_db = 0.0;
  double planned_voa_db = 0.0;
  double planned_isolation_db = 0.0;
  double pg_pnr_at_target = 0.0;
  bool secure = false;
  bool attacker_within_limit = true;
  double attacker_power_w = 0.0;
  double attacker_pulse_width_s = 0.0;
  double wavelength_m = 0.0;
  DamageLimit limit{};
};

CountermeasurePlan plan_countermeasure(const PlanInputs& in);

/// Plan plus the countermeasure taxonomy and watchdog decision table.
io::Json security_report(const CountermeasurePlan& plan);

}  // namespace tha
