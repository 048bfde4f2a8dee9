#include "cli_config.hpp"

#include <cmath>

#include "tha/attack.hpp"
#include "tha/countermeasures.hpp"
#include "tha/error.hpp"
#include "tha/photonics.hpp"
#include "tha/sweep.hpp"

#ifndef THA_VERSION
#define THA_VERSION "0.0.0"
#endif

namespace tha::cli {

namespace {

using io::Json;

template <class T>
T field(const Json& j, const char* name, T fallback) {
  if (!j.is_object() || !j.contains(name) || j.at(name).is_null()) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("field '") + name + "': wrong type");
  }
}

const Json& section(const Json& j, const char* name) {
  static const Json empty = Json::object();
  if (!j.contains(name)) return empty;
  if (!j.at(name).is_object()) throw ConfigError(std::string("field '") + name + "': expected an object");
  return j.at(name);
}

/// A list of numbers, or {"log": [lo, hi, n]}, or {"range": [lo, hi, step]}.
std::vector<double> grid(const Json& j, const char* name) {
  if (!j.contains(name)) return {};
  const Json& g = j.at(name);
  try {
    if (g.is_array()) return g.get<std::vector<double>>();
    if (g.is_object() && g.contains("log")) {
      const auto a = g.at("log").get<std::vector<double>>();
      if (a.size() != 3) throw ConfigError(std::string("field '") + name + "': log needs [lo, hi, n]");
      return log_grid(a[0], a[1], static_cast<std::size_t>(a[2]));
    }
    if (g.is_object() && g.contains("range")) {
      const auto a = g.at("range").get<std::vector<double>>();
      if (a.size() != 3 || !(a[2] > 0.0) || a[1] < a[0])
        throw ConfigError(std::string("field '") + name + "': range needs [lo, hi, step > 0]");
      std::vector<double> v;
      const auto n = static_cast<std::size_t>(std::floor((a[1] - a[0]) / a[2] + 1e-9));
      for (std::size_t i = 0; i <= n; ++i) v.push_back(a[0] + static_cast<double>(i) * a[2]);
      return v;
    }
  } catch (const Json::exception&) {
    throw ConfigError(std::string("field '") + name + "': expected a list of numbers");
  }
  throw ConfigError(std::string("field '") + name + "': expected a list, {log} or {range}");
}

std::uint64_t required_seed(const Json& c) {
  if (!c.contains("seed")) throw ConfigError("field 'seed': required for stochastic commands");
  return field<std::uint64_t>(c, "seed", 0);
}

LaserSpec parse_laser(const Json& j) {
  const auto regime = laser_regime_from_string(field<std::string>(j, "regime", "cw"));
  const double rep = field(j, "rep_rate_hz", 50e6);
  const double wl = field(j, "wavelength_m", 1550e-9);
  if (regime == LaserRegime::cw) return LaserSpec::cw(field(j, "power_w", 6.29e-3), rep, wl);
  const double width = field(j, "pulse_width_s", 100e-12);
  if (j.contains("average_power_w"))
    return LaserSpec::pulsed_from_average(field(j, "average_power_w", 60e-3), width, rep, wl);
  return LaserSpec::pulsed(field(j, "power_w", 12.0), width, rep, wl);
}

AttenuationChain parse_chain(const Json& j) {
  AttenuationChain c;
  c.att_voa_db = field(j, "att_voa_db", c.att_voa_db);
  c.delta_a_db = field(j, "delta_a_db", c.delta_a_db);
  c.bs_double_pass_db = field(j, "bs_double_pass_db", c.bs_double_pass_db);
  c.extra_db = field(j, "extra_db", c.extra_db);
  c.delta_p_db = field(j, "delta_p_db", c.delta_p_db);
  c.passive_db = field(j, "passive_db", c.passive_db);
  c.validate();
  return c;
}

DetectorSpec parse_detector(const Json& j) {
  const auto kind = field<std::string>(j, "kind", "geiger");
  DetectorSpec d;
  if (kind == "geiger") {
    const double er = j.contains("extinction_ratio") ? field(j, "extinction_ratio", 0.0)
                                                     : extinction_ratio_from_db(field(j, "extinction_db", 21.0));
    d = DetectorSpec::geiger(field(j, "efficiency", 1.0), er);
  } else if (kind == "pnr") {
    d = DetectorSpec::ideal_pnr();
  } else if (kind == "photodiode") {
    d = DetectorSpec::photodiode(field(j, "noise_floor_sigma_w", 5e-6));
  } else {
    throw ConfigError("field 'detector.kind': unknown '" + kind + "'");
  }
  d.dead_time_s = field(j, "dead_time_s", d.dead_time_s);
  d.dark_counts_per_gate = field(j, "dark_counts_per_gate", d.dark_counts_per_gate);
  d.validate();
  return d;
}

WaveformShape parse_shape(const Json& j) {
  WaveformShape s;
  s.samples_per_period = field<std::size_t>(j, "samples_per_period", s.samples_per_period);
  s.cw_guard_fraction = field(j, "cw_guard_fraction", s.cw_guard_fraction);
  if (j.contains("arm")) {
    const auto a = field<std::string>(j, "arm", "");
    if (a == "h") s.arm = ProjectionArm::h_arm;
    else if (a == "v") s.arm = ProjectionArm::v_arm;
    else throw ConfigError("field 'shape.arm': expected 'h' or 'v'");
  }
  return s;
}

StrongAttackOptions parse_attack_options(const Json& j) {
  StrongAttackOptions o;
  o.bins_per_period = field<std::size_t>(j, "bins_per_period", o.bins_per_period);
  o.calibration_fraction = field(j, "calibration_fraction", o.calibration_fraction);
  o.window = field<std::size_t>(j, "window", o.window);
  o.cw_readout_fraction = field(j, "cw_readout_fraction", o.cw_readout_fraction);
  o.refine_pulsed_peak = field(j, "refine_pulsed_peak", o.refine_pulsed_peak);
  return o;
}

Json report_json(const AttackReport& r) {
  Json conf = Json::array();
  for (const auto& row : r.confusion) conf.push_back(row);
  return {{"regime", to_string(r.regime)}, {"accuracy", r.accuracy},   {"mu_out", r.mu_out},
          {"attenuation_db", r.attenuation_db}, {"confusion", conf}, {"total", r.total()}};
}

io::CsvWriter confusion_csv(const AttackReport& r) {
  io::CsvWriter csv({"true_symbol", "guess_H", "guess_V", "guess_D"});
  for (Symbol s : kAllSymbols) {
    const auto& row = r.confusion[index_of(s)];
    csv.add_row({std::string(1, to_char(s)), std::to_string(row[0]), std::to_string(row[1]),
                 std::to_string(row[2])});
  }
  return csv;
}

std::vector<std::string> cmd_bounds(const Json& c, const std::filesystem::path& out) {
  auto mu = grid(c, "mu_grid");
  if (mu.empty()) mu = log_grid(1e-3, 1e2, 101);
  std::vector<GmVariant> variants = default_gm_variants();
  if (c.contains("gm_variants")) {
    variants.clear();
    for (const auto& v : c.at("gm_variants"))
      variants.push_back({field<std::string>(v, "label", "pg_gm"), field(v, "efficiency", 1.0),
                          field(v, "extinction_db", 21.0)});
  }
  bounds_csv(bounds_table(mu, variants), variants).write(out / "bounds.csv");
  return {"bounds.csv"};
}

std::vector<std::string> cmd_trace(const Json& c, const std::filesystem::path& out) {
  const auto seed = required_seed(c);
  const auto laser = parse_laser(section(c, "laser"));
  const auto chain = parse_chain(section(c, "chain"));
  const auto n = field<std::size_t>(c, "n_symbols", 3000);
  if (n == 0) throw ConfigError("field 'n_symbols': must be >= 1");
  TraceRequest req;
  req.offset_s = field(c, "offset_s", 0.0);
  req.noise_sigma_w = field(c, "noise_sigma_w", 5e-6);
  req.bandwidth_hz = field(c, "bandwidth_hz", 2e9);
  req.seed = derive_seed(seed, 3);
  req.shape = parse_shape(section(c, "shape"));
  const auto seq = SymbolSequence::random(n, derive_seed(seed, 1));
  const auto stem = field<std::string>(c, "stem", "trace");
  write_trace(synthesize_trace(seq, laser, chain, req), laser, chain, req, out / stem);
  return {stem + ".csv", stem + ".json"};
}

std::vector<std::string> cmd_attack(const Json& c, const std::filesystem::path& out) {
  const auto mode = field<std::string>(c, "mode", "strong");
  const auto seed = required_seed(c);
  Json result;
  AttackReport report;
  if (mode == "strong") {
    if (!c.contains("trace")) throw ConfigError("field 'trace': path stem of the trace to attack");
    const auto trace = read_trace(field<std::string>(c, "trace", ""));
    auto opts = parse_attack_options(section(c, "attack"));
    opts.fallback_seed = derive_seed(seed, 5);
    const auto res = run_strong_attack(trace, opts);
    report = res.report;
    result["located_phase_s"] = res.located_phase_s;
    result["readout_phase_s"] = res.readout_phase_s;
    result["true_offset_s"] = trace.true_offset_s;
    result["thresholds"] = {{"t_low", res.thresholds.t_low},
                            {"t_high", res.thresholds.t_high},
                            {"orientation", res.thresholds.orientation == ThresholdOrientation::cw_mapping
                                                ? "cw_mapping"
                                                : "pulsed_mapping"}};
    result["class_means"] = res.class_means;
    result["class_sigmas"] = res.class_sigmas;
    result["locate_failed"] = res.locate_failed;
    result["threshold_failed"] = res.threshold_failed;
  } else if (mode == "weak") {
    const auto n = field<std::size_t>(c, "n_symbols", 100000);
    if (n == 0) throw ConfigError("field 'n_symbols': must be >= 1");
    const double mu = field(c, "mu_out", 1.0);
    const auto det = parse_detector(section(c, "detector"));
    WeakAttackOptions wo;
    wo.rep_rate_hz = field(c, "rep_rate_hz", 0.0);
    const auto seq = SymbolSequence::random(n, derive_seed(seed, 1));
    const auto res = run_weak_attack(seq, mu, det, derive_seed(seed, 2), wo);
    report = res.report;
    result["analytic_pg"] = eve_guess_prob(mu, det);
    result["events_by_photons"] = res.events_by_photons;
    result["correct_by_photons"] = res.correct_by_photons;
  } else {
    throw ConfigError("field 'mode': expected 'strong' or 'weak'");
  }
  result["report"] = report_json(report);
  io::write_json(out / "attack.json", result);
  confusion_csv(report).write(out / "confusion.csv");
  return {"attack.json", "confusion.csv"};
}

std::vector<std::string> cmd_sweep(const Json& c, const std::filesystem::path& out) {
  SweepConfig s;
  s.seed = required_seed(c);
  s.regime = attack_regime_from_string(field<std::string>(c, "regime", "weak"));
  s.voa_db = grid(c, "voa_db");
  s.mu_out_grid = grid(c, "mu_out_grid");
  Json laser = section(c, "laser");
  if (!laser.contains("regime") && s.regime != AttackRegime::weak) laser["regime"] = to_string(s.regime);
  s.laser = parse_laser(laser);
  s.chain = parse_chain(section(c, "chain"));
  if (c.contains("detector")) s.detector = parse_detector(section(c, "detector"));
  s.n_symbols = field<std::size_t>(c, "n_symbols", s.n_symbols);
  s.noise_sigma_w = field(c, "noise_sigma_w", s.noise_sigma_w);
  s.bandwidth_hz = field(c, "bandwidth_hz", s.bandwidth_hz);
  s.shape = parse_shape(section(c, "shape"));
  s.attack = parse_attack_options(section(c, "attack"));
  s.normalize_average_power_w = field(c, "normalize_average_power_w", 0.0);
  sweep_csv(accuracy_sweep(s)).write(out / "sweep.csv");
  return {"sweep.csv"};
}

std::vector<std::string> cmd_plan(const Json& c, const std::filesystem::path& out) {
  PlanInputs in;
  const Json& a = section(c, "attacker");
  in.attacker_power_w = field(a, "power_w", in.attacker_power_w);
  in.attacker_pulse_width_s = field(a, "pulse_width_s", in.attacker_pulse_width_s);
  in.wavelength_m = field(a, "wavelength_m", in.wavelength_m);
  in.mu_out_target = field(c, "mu_out_target", in.mu_out_target);
  in.delta_p_db = field(c, "delta_p_db", in.delta_p_db);
  in.margin_db = field(c, "margin_db", in.margin_db);
  const auto kind = damage_kind_from_string(field<std::string>(c, "limit", "thermal"));
  in.limit = kind == DamageKind::thermal ? DamageLimit::thermal() : DamageLimit::ablation();
  io::write_json(out / "plan.json", security_report(plan_countermeasure(in)));
  std::vector<std::string> files{"plan.json"};

  const Json& g = section(c, "grid");
  GridSpec spec;
  spec.p_in_w = grid(g, "p_in_w");
  if (spec.p_in_w.empty()) spec.p_in_w = log_grid(1e-3, 1e6, 37);
  spec.dt_s = grid(g, "dt_s");
  if (spec.dt_s.empty()) spec.dt_s = log_grid(1e-12, 20e-9, 14);
  spec.mu_out_target = in.mu_out_target;
  spec.wavelength_m = in.wavelength_m;
  spec.delta_p_db = in.delta_p_db;
  const auto limits = g.contains("limits") ? g.at("limits").get<std::vector<std::string>>()
                                           : std::vector<std::string>{"thermal", "ablation"};
  for (const auto& l : limits) {
    spec.limit = damage_kind_from_string(l) == DamageKind::thermal ? DamageLimit::thermal() : DamageLimit::ablation();
    const std::string name = "grid_" + l + ".csv";
    grid_csv(countermeasure_grid(spec)).write(out / name);
    files.push_back(name);
  }
  return files;
}

}  // namespace

Json load_config(const CommonOptions& opts) {
  Json c = Json::object();
  if (opts.config) {
    c = io::read_json(*opts.config);
    if (c.is_object() && c.contains("manifest_version") && c.contains("config")) c = c.at("config");
    if (!c.is_object()) throw ConfigError("config root must be a JSON object");
  }
  if (opts.seed) c["seed"] = *opts.seed;
  return c;
}

std::vector<std::string> run_command(const std::string& command, const Json& config,
                                     const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  std::vector<std::string> files;
  if (command == "bounds") files = cmd_bounds(config, out);
  else if (command == "trace") files = cmd_trace(config, out);
  else if (command == "attack") files = cmd_attack(config, out);
  else if (command == "sweep") files = cmd_sweep(config, out);
  else if (command == "plan") files = cmd_plan(config, out);
  else throw ConfigError("unknown command '" + command + "'");
  io::write_json(out / "manifest.json", manifest(command, config, files));
  files.push_back("manifest.json");
  return files;
}

Json manifest(const std::string& command, const Json& config, const std::vector<std::string>& outputs) {
  return {{"manifest_version", 1},
          {"software", "tha_lab"},
          {"version", THA_VERSION},
          {"command", command},
          {"seed", config.contains("seed") ? config.at("seed") : Json(nullptr)},
          {"config", config},
          {"outputs", outputs}};
}

}  // namespace tha::cli
