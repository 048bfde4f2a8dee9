#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "tha/symbols.hpp"

namespace tha {

inline constexpr double kPlanck = 6.6261e-34;       // J s
inline constexpr double kSpeedOfLight = 2.9979e8;   // m/s

enum class LaserRegime { cw, pulsed };

/// Eve's laser. `power_w` is the CW power or, for pulsed lasers, the peak
/// power. CW lasers integrate over one symbol period (1 / rep_rate_hz).
struct LaserSpec {
  LaserRegime regime = LaserRegime::cw;
  double wavelength_m = 1550e-9;
  double power_w = 1e-3;
  double pulse_width_s = 1e-9;
  double rep_rate_hz = 50e6;

  static LaserSpec cw(double power_w, double rep_rate_hz = 50e6, double wavelength_m = 1550e-9);
  /// Pulsed laser from its peak power.
  static LaserSpec pulsed(double peak_power_w, double pulse_width_s, double rep_rate_hz = 50e6,
                          double wavelength_m = 1550e-9);
  /// Pulsed laser from its average power: peak = avg / (rep_rate * width).
  static LaserSpec pulsed_from_average(double avg_power_w, double pulse_width_s,
                                       double rep_rate_hz = 50e6, double wavelength_m = 1550e-9);

  double symbol_period_s() const { return 1.0 / rep_rate_hz; }
  /// Integration window of one symbol: the pulse width, or the symbol period for CW.
  double window_s() const { return regime == LaserRegime::pulsed ? pulse_width_s : symbol_period_s(); }

  void validate() const;
};

/// Alice's side of the link as seen by back-reflected light.
struct AttenuationChain {
  double att_voa_db = 0.0;
  double delta_a_db = 4.0;          // VOA inefficiency
  double bs_double_pass_db = 6.0;   // 50:50 beam splitter crossed twice
  double extra_db = 1.0;            // coupling and component losses
  double delta_p_db = 6.0;          // internal one-way loss for the countermeasure budget
  double passive_db = 0.0;          // filter/isolator equivalent, added once

  void validate() const;
};

/// 2 (Att_VOA + DeltaA) + 6 + E (+ passive isolation).
double total_attenuation_db(const AttenuationChain& chain);

/// Photons per symbol injected by the attacker: lambda P dT / (h c).
double mu_in(const LaserSpec& laser);

double mu_out(double mu_in, const AttenuationChain& chain);

/// Power reaching Eve's detector.
double received_power_w(const LaserSpec& laser, const AttenuationChain& chain);

/// Photons per symbol carried by `power_w` over `window_s`.
double photons_per_symbol(double power_w, double window_s, double wavelength_m);

/// Root-sum-square of independent noise floors.
double noise_floor_rss(double sigma_osc_w, double sigma_pd_w);

/// Which PBS arm Eve's photodiode sits on. The H arm sees H at 100 %,
/// D at 50 %, V at 0 %; the V arm swaps H and V.
enum class ProjectionArm { h_arm, v_arm };

struct WaveformShape {
  std::size_t samples_per_period = 500;
  /// Defaults to v_arm for CW and h_arm for pulsed when unset.
  std::optional<ProjectionArm> arm;
  /// CW only: fraction of the period spent in the reset dip, which drops to
  /// zero at the symbol boundary and recovers linearly to the symbol level.
  double cw_guard_fraction = 0.25;
};

/// Uniformly sampled intensity trace with its hidden ground truth.
struct WaveformTrace {
  LaserRegime regime = LaserRegime::cw;
  double sample_period_s = 0.0;
  double symbol_period_s = 0.0;
  double true_offset_s = 0.0;
  std::vector<double> samples;
  std::vector<Symbol> true_symbols;

  std::size_t samples_per_period() const;
  void validate() const;
};

/// Relative level of a symbol on the given arm (1, 0 or 0.5).
double projection_level(Symbol s, ProjectionArm arm) noexcept;

ProjectionArm default_arm(LaserRegime regime) noexcept;

/// Noiseless, unfiltered intensity of symbol `k`'s contribution at phase
/// `u` seconds after its boundary (CW) or its pulse centre (pulsed). Scaled
/// to a unit level.
double cw_envelope(double u, double period_s, double guard_fraction) noexcept;

struct TraceRequest {
  double offset_s = 0.0;
  double noise_sigma_w = 0.0;
  double bandwidth_hz = 2e9;   // Gaussian response, -3 dB point; infinity disables
  std::uint64_t seed = 0;
  WaveformShape shape{};
};

/// Synthesizes what Eve's photodiode records for `seq`. CW traces hold one
/// piecewise level per symbol period (with the reset dip); pulsed traces
/// hold one Gaussian pulse of FWHM pulse_width per period centred at
/// offset + k T. Edges are smoothed by the detector bandwidth and white
/// Gaussian noise of `noise_sigma_w` is added per sample.
WaveformTrace synthesize_trace(const SymbolSequence& seq, const LaserSpec& laser,
                               const AttenuationChain& chain, const TraceRequest& req);

/// Noise generation is chunked (kTraceChunk samples per derived seed); the
/// serial and OpenMP variants produce identical traces.
inline constexpr std::size_t kTraceChunk = 1 << 14;
WaveformTrace synthesize_trace_serial(const SymbolSequence& seq, const LaserSpec& laser,
                                      const AttenuationChain& chain, const TraceRequest& req);

/// Trace files: `<stem>.csv` with `time_s,intensity_w` rows and a
/// `<stem>.json` sidecar with ground truth and parameters.
struct TraceFiles {
  std::filesystem::path csv;
  std::filesystem::path sidecar;
};
TraceFiles trace_files_for(const std::filesystem::path& stem);

void write_trace(const WaveformTrace& trace, const LaserSpec& laser, const AttenuationChain& chain,
                 const TraceRequest& req, const std::filesystem::path& stem);
WaveformTrace read_trace(const std::filesystem::path& stem);

const char* to_string(LaserRegime r) noexcept;
LaserRegime laser_regime_from_string(const std::string& s);

}  // namespace tha
