#include "tha/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tha/error.hpp"
#include "tha/io.hpp"
#include "tha/rng.hpp"

namespace tha {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

double db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }

// Standard deviation (seconds) of a Gaussian impulse response whose
// amplitude response is -3 dB at `bandwidth_hz`.
double bandwidth_sigma_s(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
  if (std::isinf(bandwidth_hz)) return 0.0;
  return std::sqrt(std::numbers::ln2) / (2.0 * std::numbers::pi * bandwidth_hz);
}

std::vector<double> gaussian_kernel(double sigma_samples) {
  if (sigma_samples < 1e-3) return {1.0};
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma_samples));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double x = static_cast<double>(i) / sigma_samples;
    k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * x * x);
    total += k[static_cast<std::size_t>(i + radius)];
  }
  for (double& v : k) v /= total;
  return k;
}

WaveformTrace synthesize(const SymbolSequence& seq, const LaserSpec& laser,
                         const AttenuationChain& chain, const TraceRequest& req, bool parallel) {
  laser.validate();
  chain.validate();
  const double period = laser.symbol_period_s();
  if (!(req.offset_s >= 0.0 && req.offset_s < period))
    throw DomainError("offset must lie in [0, symbol_period)");
  if (!(req.noise_sigma_w >= 0.0)) throw DomainError("noise sigma must be >= 0");
  if (req.shape.samples_per_period < 2) throw DomainError("need at least 2 samples per period");
  const double guard = req.shape.cw_guard_fraction;
  if (!(guard >= 0.0 && guard < 1.0)) throw DomainError("CW guard fraction must lie in [0,1)");

  const auto spp = req.shape.samples_per_period;
  const double dt = period / static_cast<double>(spp);
  const std::size_t n_sym = seq.size();
  const auto n_samples =
      static_cast<std::size_t>(std::ceil((req.offset_s + static_cast<double>(n_sym) * period) / dt - 1e-9));
  const ProjectionArm arm = req.shape.arm.value_or(default_arm(laser.regime));
  const double p_level = received_power_w(laser, chain);
  const double sigma_bw = bandwidth_sigma_s(req.bandwidth_hz);

  std::vector<double> level(n_sym);
  for (std::size_t k = 0; k < n_sym; ++k) level[k] = p_level * projection_level(seq[k], arm);
  // Light before the first boundary belongs to an unscored idle D symbol.
  const double lead_level = p_level * projection_level(Symbol::D, arm);

  WaveformTrace tr;
  tr.regime = laser.regime;
  tr.sample_period_s = dt;
  tr.symbol_period_s = period;
  tr.true_offset_s = req.offset_s;
  tr.true_symbols = seq.symbols();
  tr.samples.assign(n_samples, 0.0);
  const auto ns = static_cast<std::ptrdiff_t>(n_samples);

  if (laser.regime == LaserRegime::cw) {
    std::vector<double> ideal(n_samples);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < ns; ++i) {
      const double rel = (static_cast<double>(i) + 0.5) * dt - req.offset_s;
      const auto k = static_cast<std::ptrdiff_t>(std::floor(rel / period));
      const double u = rel - static_cast<double>(k) * period;
      const double lv = k < 0 ? lead_level : level[static_cast<std::size_t>(std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(n_sym) - 1))];
      ideal[static_cast<std::size_t>(i)] = lv * cw_envelope(u, period, guard);
    }
    const auto kernel = gaussian_kernel(sigma_bw / dt);
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < ns; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t j = -radius; j <= radius; ++j) {
        const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(i + j, 0, ns - 1);
        acc += kernel[static_cast<std::size_t>(j + radius)] * ideal[static_cast<std::size_t>(idx)];
      }
      tr.samples[static_cast<std::size_t>(i)] = acc;
    }
  } else {
    const double sigma_p = laser.pulse_width_s / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double sigma_tot = std::hypot(sigma_p, sigma_bw);
    const double peak_scale = sigma_p / sigma_tot;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < ns; ++i) {
      const double rel = static_cast<double>(i) * dt - req.offset_s;
      const auto nearest = static_cast<std::ptrdiff_t>(std::llround(rel / period));
      double acc = 0.0;
      for (std::ptrdiff_t k = nearest - 1; k <= nearest + 1; ++k) {
        if (k < 0 || k >= static_cast<std::ptrdiff_t>(n_sym)) continue;
        const double x = (rel - static_cast<double>(k) * period) / sigma_tot;
        acc += level[static_cast<std::size_t>(k)] * peak_scale * std::exp(-0.5 * x * x);
      }
      tr.samples[static_cast<std::size_t>(i)] = acc;
    }
  }

  if (req.noise_sigma_w > 0.0) {
    const auto n_chunks = static_cast<std::ptrdiff_t>((n_samples + kTraceChunk - 1) / kTraceChunk);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
      Rng rng = make_rng(req.seed, static_cast<std::uint64_t>(c));
      std::normal_distribution<double> noise(0.0, req.noise_sigma_w);
      const std::size_t begin = static_cast<std::size_t>(c) * kTraceChunk;
      const std::size_t end = std::min(n_samples, begin + kTraceChunk);
      for (std::size_t i = begin; i < end; ++i) tr.samples[i] += noise(rng);
    }
  }
  return tr;
}

}  // namespace

LaserSpec LaserSpec::cw(double power_w, double rep_rate_hz, double wavelength_m) {
  LaserSpec l;
  l.regime = LaserRegime::cw;
  l.power_w = power_w;
  l.rep_rate_hz = rep_rate_hz;
  l.wavelength_m = wavelength_m;
  l.pulse_width_s = 1.0 / rep_rate_hz;
  return l;
}

LaserSpec LaserSpec::pulsed(double peak_power_w, double pulse_width_s, double rep_rate_hz,
                            double wavelength_m) {
  LaserSpec l;
  l.regime = LaserRegime::pulsed;
  l.power_w = peak_power_w;
  l.pulse_width_s = pulse_width_s;
  l.rep_rate_hz = rep_rate_hz;
  l.wavelength_m = wavelength_m;
  return l;
}

LaserSpec LaserSpec::pulsed_from_average(double avg_power_w, double pulse_width_s,
                                         double rep_rate_hz, double wavelength_m) {
  return pulsed(avg_power_w / (rep_rate_hz * pulse_width_s), pulse_width_s, rep_rate_hz, wavelength_m);
}

void LaserSpec::validate() const {
  require_positive(wavelength_m, "wavelength");
  if (!(power_w >= 0.0) || !std::isfinite(power_w)) throw DomainError("laser power must be >= 0");
  require_positive(rep_rate_hz, "repetition rate");
  if (regime == LaserRegime::pulsed) {
    require_positive(pulse_width_s, "pulse width");
    if (pulse_width_s > 1.0 / rep_rate_hz) throw DomainError("pulse width exceeds the repetition period");
  }
}

void AttenuationChain::validate() const {
  for (double v : {att_voa_db, delta_a_db, bs_double_pass_db, extra_db, delta_p_db, passive_db})
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("attenuation terms must be finite and >= 0");
}

double total_attenuation_db(const AttenuationChain& chain) {
  chain.validate();
  return 2.0 * (chain.att_voa_db + chain.delta_a_db) + chain.bs_double_pass_db + chain.extra_db +
         chain.passive_db;
}

double photons_per_symbol(double power_w, double window_s, double wavelength_m) {
  return wavelength_m * power_w * window_s / (kPlanck * kSpeedOfLight);
}

double mu_in(const LaserSpec& laser) {
  laser.validate();
  return photons_per_symbol(laser.power_w, laser.window_s(), laser.wavelength_m);
}

double mu_out(double mu_in_photons, const AttenuationChain& chain) {
  if (!(mu_in_photons >= 0.0)) throw DomainError("mu_in must be >= 0");
  return mu_in_photons * db_to_linear(total_attenuation_db(chain));
}

double received_power_w(const LaserSpec& laser, const AttenuationChain& chain) {
  laser.validate();
  return laser.power_w * db_to_linear(total_attenuation_db(chain));
}

double noise_floor_rss(double sigma_osc_w, double sigma_pd_w) {
  if (!(sigma_osc_w >= 0.0 && sigma_pd_w >= 0.0)) throw DomainError("noise floors must be >= 0");
  return std::hypot(sigma_osc_w, sigma_pd_w);
}

double projection_level(Symbol s, ProjectionArm arm) noexcept {
  switch (s) {
    case Symbol::H: return arm == ProjectionArm::h_arm ? 1.0 : 0.0;
    case Symbol::V: return arm == ProjectionArm::h_arm ? 0.0 : 1.0;
    case Symbol::D: return 0.5;
  }
  return 0.0;
}

ProjectionArm default_arm(LaserRegime regime) noexcept {
  return regime == LaserRegime::cw ? ProjectionArm::v_arm : ProjectionArm::h_arm;
}

double cw_envelope(double u, double period_s, double guard_fraction) noexcept {
  const double guard = guard_fraction * period_s;
  if (guard <= 0.0 || u >= guard) return 1.0;
  return std::max(u, 0.0) / guard;
}

std::size_t WaveformTrace::samples_per_period() const {
  return static_cast<std::size_t>(std::llround(symbol_period_s / sample_period_s));
}

void WaveformTrace::validate() const {
  if (!(sample_period_s > 0.0)) throw DomainError("sample period must be > 0");
  const double ratio = symbol_period_s / sample_period_s;
  if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-6 * ratio)
    throw DomainError("symbol period must be an integer multiple of the sample period");
  for (double s : samples)
    if (!std::isfinite(s)) throw DomainError("trace contains non-finite samples");
}

WaveformTrace synthesize_trace(const SymbolSequence& seq, const LaserSpec& laser,
                               const AttenuationChain& chain, const TraceRequest& req) {
  return synthesize(seq, laser, chain, req, true);
}

WaveformTrace synthesize_trace_serial(const SymbolSequence& seq, const LaserSpec& laser,
                                      const AttenuationChain& chain, const TraceRequest& req) {
  return synthesize(seq, laser, chain, req, false);
}

const char* to_string(LaserRegime r) noexcept { return r == LaserRegime::cw ? "cw" : "pulsed"; }

LaserRegime laser_regime_from_string(const std::string& s) {
  if (s == "cw") return LaserRegime::cw;
  if (s == "pulsed") return LaserRegime::pulsed;
  throw ConfigError("unknown laser regime '" + s + "'");
}

TraceFiles trace_files_for(const std::filesystem::path& stem) {
  auto csv = stem;
  auto js = stem;
  csv += ".csv";
  js += ".json";
  return {csv, js};
}

void write_trace(const WaveformTrace& trace, const LaserSpec& laser, const AttenuationChain& chain,
                 const TraceRequest& req, const std::filesystem::path& stem) {
  const auto files = trace_files_for(stem);
  std::string csv = "time_s,intensity_w\n";
  csv.reserve(trace.samples.size() * 32);
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    csv += io::format_double(static_cast<double>(i) * trace.sample_period_s);
    csv += ',';
    csv += io::format_double(trace.samples[i]);
    csv += '\n';
  }
  io::write_text(files.csv, csv);

  io::Json symbols = io::Json::array();
  for (Symbol s : trace.true_symbols) symbols.push_back(std::string(1, to_char(s)));
  io::Json j = {
      {"regime", to_string(trace.regime)},
      {"sample_period_s", trace.sample_period_s},
      {"symbol_period_s", trace.symbol_period_s},
      {"offset_s", trace.true_offset_s},
      {"symbols", symbols},
      {"laser",
       {{"regime", to_string(laser.regime)},
        {"wavelength_m", laser.wavelength_m},
        {"power_w", laser.power_w},
        {"pulse_width_s", laser.pulse_width_s},
        {"rep_rate_hz", laser.rep_rate_hz}}},
      {"chain",
       {{"att_voa_db", chain.att_voa_db},
        {"delta_a_db", chain.delta_a_db},
        {"bs_double_pass_db", chain.bs_double_pass_db},
        {"extra_db", chain.extra_db},
        {"delta_p_db", chain.delta_p_db},
        {"passive_db", chain.passive_db}}},
      {"noise_sigma_w", req.noise_sigma_w},
      {"bandwidth_hz", std::isinf(req.bandwidth_hz) ? io::Json(nullptr) : io::Json(req.bandwidth_hz)},
      {"samples_per_period", req.shape.samples_per_period},
      {"cw_guard_fraction", req.shape.cw_guard_fraction},
      {"seed", req.seed},
  };
  io::write_json(files.sidecar, j);
}

WaveformTrace read_trace(const std::filesystem::path& stem) {
  const auto files = trace_files_for(stem);
  const auto j = io::read_json(files.sidecar);
  WaveformTrace tr;
  try {
    tr.regime = laser_regime_from_string(j.at("regime").get<std::string>());
    tr.sample_period_s = j.at("sample_period_s").get<double>();
    tr.symbol_period_s = j.at("symbol_period_s").get<double>();
    tr.true_offset_s = j.at("offset_s").get<double>();
    for (const auto& s : j.at("symbols")) {
      const auto str = s.get<std::string>();
      if (str.size() != 1) throw ConfigError("bad symbol entry in sidecar");
      tr.true_symbols.push_back(symbol_from_char(str[0]));
    }
  } catch (const io::Json::exception& e) {
    throw ConfigError(files.sidecar.string() + ": " + e.what());
  }

  const std::string text = io::read_text(files.csv);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "time_s,intensity_w")
    throw IoError(files.csv.string() + ": missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(files.csv.string() + ": malformed row");
    tr.samples.push_back(io::parse_double(std::string_view(line).substr(comma + 1)));
  }
  tr.validate();
  return tr;
}

}  // namespace tha
