#include "tha/countermeasures.hpp"

#include <algorithm>
#include <cmath>

#include "tha/detectors.hpp"
#include "tha/error.hpp"

namespace tha {

namespace {

constexpr double kPassiveEquivalentDb = 60.0;

std::vector<GridCell> grid(const GridSpec& spec, bool parallel) {
  spec.limit.validate();
  if (spec.p_in_w.empty() || spec.dt_s.empty()) throw ConfigError("grid ranges must be non-empty");
  for (double p : spec.p_in_w)
    if (!(p > 0.0)) throw ConfigError("grid powers must be > 0");
  for (double t : spec.dt_s)
    if (!(t > 0.0)) throw ConfigError("grid pulse widths must be > 0");
  if (!(spec.mu_out_target > 0.0)) throw ConfigError("mu_out_target must be > 0");

  const std::size_t nt = spec.dt_s.size();
  std::vector<GridCell> cells(spec.p_in_w.size() * nt);
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    GridCell& c = cells[static_cast<std::size_t>(i)];
    c.p_in_w = spec.p_in_w[static_cast<std::size_t>(i) / nt];
    c.dt_s = spec.dt_s[static_cast<std::size_t>(i) % nt];
    c.mu_in = photons_per_symbol(c.p_in_w, c.dt_s, spec.wavelength_m);
    c.a_db = c.mu_in > spec.mu_out_target ? required_attenuation_db(c.mu_in, spec.mu_out_target, spec.delta_p_db)
                                          : 0.0;
    c.feasible = c.p_in_w <= spec.limit.max_power_w;
  }
  return cells;
}

}  // namespace

const char* to_string(DamageKind k) noexcept {
  return k == DamageKind::thermal ? "thermal" : "ablation";
}

DamageKind damage_kind_from_string(const std::string& s) {
  if (s == "thermal") return DamageKind::thermal;
  if (s == "ablation") return DamageKind::ablation;
  throw ConfigError("unknown damage limit '" + s + "'");
}

void DamageLimit::validate() const {
  if (!(max_power_w > 0.0)) throw DomainError("damage limit must be > 0 W");
}

double required_attenuation_db(double mu_in, double mu_out_target, double delta_p_db) {
  if (!(mu_in > 0.0) || !(mu_out_target > 0.0)) throw DomainError("photon numbers must be > 0");
  if (mu_out_target > mu_in) throw DomainError("target exceeds the injected photon number");
  return std::max(0.0, 0.5 * (10.0 * std::log10(mu_in / mu_out_target) - delta_p_db));
}

double total_output_attenuation_db(double mu_in, double mu_out_target) {
  if (!(mu_in > 0.0) || !(mu_out_target > 0.0)) throw DomainError("photon numbers must be > 0");
  return std::max(0.0, 10.0 * std::log10(mu_in / mu_out_target));
}

std::vector<GridCell> countermeasure_grid(const GridSpec& spec) { return grid(spec, true); }

std::vector<GridCell> countermeasure_grid_serial(const GridSpec& spec) { return grid(spec, false); }

io::CsvWriter grid_csv(const std::vector<GridCell>& cells) {
  io::CsvWriter csv({"p_in_w", "dt_s", "mu_in", "a_db", "feasible"});
  for (const auto& c : cells)
    csv.add_row({io::format_double(c.p_in_w), io::format_double(c.dt_s), io::format_double(c.mu_in),
                  io::format_double(c.a_db), c.feasible ? "1" : "0"});
  return csv;
}

CountermeasurePlan plan_countermeasure(const PlanInputs& in) {
  in.limit.validate();
  if (!(in.attacker_power_w >= 0.0)) throw ConfigError("attacker power must be >= 0");
  if (!(in.attacker_pulse_width_s > 0.0)) throw ConfigError("attacker pulse width must be > 0");
  if (!(in.mu_out_target > 0.0)) throw ConfigError("mu_out_target must be > 0");
  if (!(in.margin_db >= 0.0)) throw ConfigError("margin must be >= 0");

  CountermeasurePlan p;
  p.attacker_power_w = in.attacker_power_w;
  p.attacker_pulse_width_s = in.attacker_pulse_width_s;
  p.wavelength_m = in.wavelength_m;
  p.limit = in.limit;
  p.target_mu_out = in.mu_out_target;
  p.mu_in = photons_per_symbol(in.attacker_power_w, in.attacker_pulse_width_s, in.wavelength_m);
  if (p.mu_in > in.mu_out_target) {
    p.required_voa_db = required_attenuation_db(p.mu_in, in.mu_out_target, in.delta_p_db);
    p.total_output_attenuation_db = total_output_attenuation_db(p.mu_in, in.mu_out_target);
    p.margin_db = in.margin_db;
  }
  p.implied_isolation_db = 2.0 * p.required_voa_db;
  p.planned_voa_db = p.required_voa_db + p.margin_db;
  p.planned_isolation_db = 2.0 * p.planned_voa_db;
  p.pg_pnr_at_target = eve_guess_prob(in.mu_out_target, DetectorSpec::ideal_pnr());
  p.secure = p.pg_pnr_at_target <= in.secure_pg;
  p.attacker_within_limit = in.attacker_power_w <= in.limit.max_power_w;
  return p;
}

io::Json security_report(const CountermeasurePlan& p) {
  io::Json j;
  j["plan"] = {
      {"mu_in", p.mu_in},
      {"target_mu_out", p.target_mu_out},
      {"required_voa_db", p.required_voa_db},
      {"implied_isolation_db", p.implied_isolation_db},
      {"margin_db", p.margin_db},
      {"planned_voa_db", p.planned_voa_db},
      {"planned_isolation_db", p.planned_isolation_db},
      {"pg_pnr_at_target", p.pg_pnr_at_target},
      {"secure", p.secure},
  };
  j["attacker"] = {{"power_w", p.attacker_power_w},
                   {"pulse_width_s", p.attacker_pulse_width_s},
                   {"wavelength_m", p.wavelength_m},
                   {"within_damage_limit", p.attacker_within_limit}};
  j["damage_limit"] = {{"kind", to_string(p.limit.kind)}, {"max_power_w", p.limit.max_power_w}};
  j["conventions"] = {
      {"one_way_voa_db",
       {{"value", p.required_voa_db},
        {"meaning", "VOA setting crossed twice by the reflected light, net of internal loss delta_p"}}},
      {"total_output_attenuation_db",
       {{"value", p.total_output_attenuation_db},
        {"meaning", "10 log10(mu_in / mu_out), attenuation seen end to end"}}},
      {"margin_db", {{"value", p.margin_db}, {"meaning", "safety margin added on top of the computed VOA"}}},
  };
  j["taxonomy"] = io::Json::array({
      {{"class", "passive"}, {"measure", "filtering"},
       {"description", "Wavelength Division Multiplexer filter in Alice's transmission band"},
       {"equivalent_attenuation_db", kPassiveEquivalentDb}},
      {{"class", "passive"}, {"measure", "isolation"},
       {"description", "Isolator or Circulator at Alice's output"},
       {"equivalent_attenuation_db", kPassiveEquivalentDb}},
      {{"class", "passive"}, {"measure", "attenuation"},
       {"description", "Optical Attenuators at Alice's output"},
       {"equivalent_attenuation_db", p.planned_voa_db}},
      {{"class", "active"}, {"measure", "watchdog"},
       {"description", "Circulator connected to a detector at Alice's output"},
       {"equivalent_attenuation_db", nullptr}},
  });
  j["watchdog_cases"] = io::Json::array({
      {{"case", 1}, {"condition", "The noise floor of the WD is lower than the one of the ED"},
       {"outcome", "the attacker is caught and the communication terminates"}},
      {{"case", 2}, {"condition", "The noise floor of the WD is higher than the one of the ED"},
       {"outcome", "Alice could not perceive the presence of the attacker and can be hacked"}},
      {{"case", 3}, {"condition", "The noise floors of the WD and of the ED are comparable"},
       {"outcome",
        "the attacker is surely spotted, since it needs to shoot much higher power to cope with Alice's "
        "setup internal attenuations"}},
  });
  return j;
}

}  // namespace tha
