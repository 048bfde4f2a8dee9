// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tha/attack.hpp"
#include "tha/countermeasures.hpp"
#include "tha/discrimination.hpp"
#include "tha/io.hpp"
#include "tha/quantum_core.hpp"
#include "tha/sweep.hpp"

using namespace tha;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kExact = 1e-15;
constexpr double kEigTol = 1e-9;
constexpr double kEigSumTol = 1e-10;
constexpr double kHolevoSlack = 1e-6;
constexpr double kTwoStateTol = 1e-6;
constexpr double kGapTol = 1e-7;
constexpr double kThresholdTol = 1e-3;
constexpr double kMcSigmas = 5.0;
constexpr double kPlateauSigmas = 3.0;
constexpr double kCwCrossTarget = 8.0, kCwCrossTol = 3.0;
constexpr double kPulsedGapTarget = 16.5, kPulsedGapTol = 3.0;

int failures = 0;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [violated: " << what << "]";
    }
  }
};

void run(const char* id, const char* name, double time_limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail << " [exception: " << e.what() << "]";
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0.0) {
    c.detail << "; runtime " << dt << " s (limit " << time_limit_s << " s)";
    c.require(dt < time_limit_s, "runtime");
  }
  std::printf("[%s] %s %s:%s\n", c.ok ? "PASS" : "FAIL", id, name, c.detail.str().c_str());
  std::fflush(stdout);
  failures += !c.ok;
}

double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

/// Crossing of `level` on the VOA axis.
double voa_crossing(const std::vector<double>& voa, const std::vector<SweepPoint>& pts, double level = 0.5) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i - 1].accuracy >= level && pts[i].accuracy < level)
      return voa[i - 1] + (pts[i - 1].accuracy - level) / (pts[i - 1].accuracy - pts[i].accuracy) * (voa[i] - voa[i - 1]);
  return std::nan("");
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) v.push_back(lo + i * step);
  return v;
}

SweepConfig strong_config(AttackRegime r, const std::vector<double>& voa) {
  SweepConfig c;
  c.regime = r;
  c.laser = r == AttackRegime::cw ? LaserSpec::cw(6.29e-3) : LaserSpec::pulsed_from_average(60e-3, 100e-12);
  c.voa_db = voa;
  c.n_symbols = 3000;
  c.noise_sigma_w = 5e-6;
  c.seed = 20240601;
  return c;
}

double cw_crossing_voa = std::nan("");

int shell(const std::string& args) {
  const std::string cmd = std::string(THA_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

int main() {
  run("C1", "zero-photon baseline", 1.0, [](Check& c) {
    const double third = 1.0 / 3.0;
    const double hol = holevo_pg_upper_bound(0.0);
    const double hel = helstrom_pg(0.0);
    const double pnr = eve_guess_prob(0.0, DetectorSpec::ideal_pnr());
    const double gm = eve_guess_prob(0.0, DetectorSpec::geiger(0.9, extinction_ratio_from_db(21.0)));
    const auto seq = SymbolSequence::random(10000, 1);
    const double mc = run_weak_attack(seq, 0.0, DetectorSpec::geiger(1.0, 0.01), 2).report.accuracy;
    const double tol = kMcSigmas * binomial_sigma(third, 1e4);
    c.detail << " holevo=" << hol << " helstrom=" << hel << " pnr=" << pnr << " gm=" << gm << " mc=" << mc
             << " (mc tol " << tol << ")";
    for (double v : {hol, hel, pnr, gm}) c.require(std::abs(v - third) <= kExact, "analytic p_g = 1/3");
    c.require(std::abs(mc - third) <= tol, "Monte Carlo within 5 sigma");
  });

  run("C2", "closed-form vs numeric eigenvalues", 1.0, [](Check& c) {
    double worst = 0.0, worst_sum = 0.0;
    const auto grid = log_grid(1e-4, 50.0, 200);
    for (double mu : grid) {
      const auto a = closed_form_eigenvalues(mu);
      const auto b = numeric_eigenvalues(gram_matrix(StateEnsemble(mu)));
      for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
      worst_sum = std::max({worst_sum, std::abs(a.sum() - 1.0), std::abs(b.sum() - 1.0)});
    }
    c.detail << " 200 mu in [1e-4, 50]; max |diff|=" << worst << " max |sum-1|=" << worst_sum;
    c.require(worst <= kEigTol, "eigenvalue agreement 1e-9");
    c.require(worst_sum <= kEigSumTol, "eigenvalue sum 1e-10");
  });

  run("C3", "bound stack ordering", 10.0, [](Check& c) {
    const auto grid = log_grid(1e-3, 1e2, 61);
    const std::vector<DetectorSpec> gms{DetectorSpec::geiger(1.0, extinction_ratio_from_db(21.0)),
                                        DetectorSpec::geiger(1.0, extinction_ratio_from_db(10.0)),
                                        DetectorSpec::geiger(0.8, 0.0), DetectorSpec::geiger(0.5, 0.05)};
    int bad = 0;
    double max_gap = 0.0;
    for (double mu : grid) {
      const auto prob = DiscriminationProblem::from_ensemble(StateEnsemble(mu));
      const auto h = helstrom_solve(prob);
      const double pgm = pretty_good_measurement_pg(prob);
      const double hol = holevo_pg_upper_bound(mu);
      const double pnr = eve_guess_prob(mu, DetectorSpec::ideal_pnr());
      max_gap = std::max(max_gap, h.report.duality_gap);
      const bool stack = 1.0 / 3.0 <= pgm + 1e-12 && pgm <= h.report.pg_primal + 1e-12 &&
                         h.report.pg_primal <= h.report.pg_dual && h.report.pg_dual <= hol + kHolevoSlack;
      bool gm_ok = true;
      for (const auto& g : gms) gm_ok = gm_ok && eve_guess_prob(mu, g) <= pnr + 1e-15;
      bad += !(stack && gm_ok && h.report.converged);
    }
    c.detail << " " << grid.size() << " mu in [1e-3, 1e2], violations=" << bad << ", max duality gap=" << max_gap;
    c.require(bad == 0, "1/3 <= PGM <= primal <= dual <= Holevo + 1e-6 and GM <= PNR");
  });

  run("C4", "SDP oracle", 0.0, [](Check& c) {
    double worst = 0.0;
    for (double cc : {0.0, 0.5, 0.9}) {
      DiscriminationProblem p;
      p.states[0] = Vector3c(1.0, 0.0, 0.0);
      p.states[1] = Vector3c(cc, std::sqrt(1.0 - cc * cc), 0.0);
      p.states[2] = Vector3c(0.0, 0.0, 1.0);
      p.priors = {0.5, 0.5, 0.0};
      worst = std::max(worst, std::abs(helstrom_solve(p).report.pg_primal - oracle::two_state_helstrom(cc)));
    }
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double max_gap = 0.0;
    int unconverged = 0;
    for (int i = 0; i < 50; ++i) {
      DiscriminationProblem p;
      for (auto& v : p.states) {
        v = Vector3c(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
        v.normalize();
      }
      double s = 0.0;
      for (auto& q : p.priors) s += (q = u(rng));
      for (auto& q : p.priors) q /= s;
      const auto r = helstrom_solve(p);
      unconverged += !r.report.converged;
      max_gap = std::max(max_gap, r.report.duality_gap);
    }
    c.detail << " two-state max err=" << worst << "; 50 random problems max gap=" << max_gap
             << " unconverged=" << unconverged;
    c.require(worst <= kTwoStateTol, "two-state closed form 1e-6");
    c.require(max_gap <= kGapTol && unconverged == 0, "duality gap 1e-7");
  });

  run("C5", "single-photon guess probability", 0.0, [](Check& c) {
    const auto seq = SymbolSequence::random(300000, 5);
    const auto r = run_weak_attack(seq, 1.0, DetectorSpec::ideal_pnr(), 6);
    const double n1 = double(r.events_by_photons[1]);
    const double acc = r.correct_by_photons[1] / n1;
    const double tol = kMcSigmas * binomial_sigma(2.0 / 3.0, n1);
    c.detail << " events=" << n1 << " accuracy=" << acc << " (2/3 +- " << tol << ")";
    c.require(n1 >= 1e5, ">= 1e5 conditioned events");
    c.require(std::abs(acc - 2.0 / 3.0) <= tol, "within 5 sigma of 2/3");
  });

  run("C6", "weak-light plateau", 0.0, [](Check& c) {
    const auto gm = DetectorSpec::geiger(1.0, extinction_ratio_from_db(21.0));
    double best = 0.0, arg = 0.0;
    for (double mu : log_grid(0.1, 100.0, 3001)) {
      const double p = eve_guess_prob(mu, gm);
      if (p > best) best = p, arg = mu;
    }
    const double n = 200000;
    const auto seq = SymbolSequence::random(std::size_t(n), 7);
    const double mc = run_weak_attack(seq, arg, gm, 8).report.accuracy;
    const double tol = kPlateauSigmas * binomial_sigma(best, n);
    c.detail << " max analytic=" << best << " at mu=" << arg << "; Monte Carlo=" << mc << " (+- " << tol << ")";
    c.require(best >= 0.90 && best <= 0.99, "maximum in [0.90, 0.99]");
    c.require(std::abs(mc - best) <= tol, "Monte Carlo within 3 sigma");
  });

  run("C7", "strong-light CW collapse", 60.0, [](Check& c) {
    const auto voa = range(0.0, 16.0, 0.5);
    const auto pts = accuracy_sweep(strong_config(AttackRegime::cw, voa));
    double worst_tail = 0.0;
    for (std::size_t i = 0; i < voa.size(); ++i)
      if (voa[i] >= 12.0) worst_tail = std::max(worst_tail, pts[i].accuracy);
    cw_crossing_voa = voa_crossing(voa, pts);
    c.detail << " acc(0 dB)=" << pts.front().accuracy << " max acc(>=12 dB)=" << worst_tail
             << " 50% crossing=" << cw_crossing_voa << " dB VOA";
    c.require(pts.front().accuracy >= 0.95, "accuracy >= 0.95 at 0 dB");
    c.require(worst_tail <= 0.40, "accuracy <= 0.40 at >= 12 dB");
    c.require(std::abs(cw_crossing_voa - kCwCrossTarget) <= kCwCrossTol, "crossing within 8 +- 3 dB");
  });

  run("C8", "pulsed advantage", 0.0, [](Check& c) {
    const auto voa = range(10.0, 30.0, 0.5);
    const auto pts = accuracy_sweep(strong_config(AttackRegime::pulsed, voa));
    const double cross = voa_crossing(voa, pts);
    const double gap = cross - cw_crossing_voa;
    c.detail << " pulsed crossing=" << cross << " dB VOA, CW crossing=" << cw_crossing_voa << ", gap=" << gap << " dB";
    c.require(std::abs(gap - kPulsedGapTarget) <= kPulsedGapTol, "gap 16.5 +- 3 dB");
  });

  run("C9", "countermeasure budget", 0.0, [](Check& c) {
    const auto plan = plan_countermeasure({});
    c.detail << " required=" << plan.required_voa_db << " dB, isolation=" << plan.implied_isolation_db
             << " dB, with margin=" << plan.planned_voa_db << " dB";
    c.require(plan.required_voa_db >= 60.0 && plan.required_voa_db <= 70.0, "required in [60, 70]");
    c.require(plan.implied_isolation_db == 2.0 * plan.required_voa_db, "isolation = 2x exactly");
    c.require(plan.planned_voa_db >= 65.0 && plan.planned_voa_db <= 75.0, "planned in [65, 75]");
  });

  run("C10", "threshold optimality", 0.0, [](Check& c) {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> mid(0.35, 0.65), sd(0.05, 0.3);
    double worst = -1.0;
    for (int trial = 0; trial < 20; ++trial) {
      const bool h_bright = trial % 2 == 0;
      const double d = mid(rng);
      std::array<double, 3> means{}, sig{};
      means[index_of(Symbol::H)] = h_bright ? 1.0 : 0.0;
      means[index_of(Symbol::V)] = h_bright ? 0.0 : 1.0;
      means[index_of(Symbol::D)] = d;
      for (auto& s : sig) s = sd(rng);
      std::vector<double> x;
      std::vector<int> y;
      for (Symbol s : kAllSymbols) {
        std::normal_distribution<double> g(means[index_of(s)], sig[index_of(s)]);
        const int rank = s == Symbol::D ? 1 : (means[index_of(s)] > 0.5 ? 2 : 0);
        for (int i = 0; i < 100000; ++i) x.push_back(g(rng)), y.push_back(rank);
      }
      const auto t = bayes_thresholds(means, sig);
      const double excess = oracle::threshold_error(x, y, t.t_low, t.t_high) - oracle::grid_search_min_error(x, y);
      worst = std::max(worst, excess);
    }
    c.detail << " 20 datasets x 3e5 samples; worst excess over grid-search minimum=" << worst;
    c.require(worst <= kThresholdTol, "excess <= 1e-3");
  });

  run("C11", "determinism", 0.0, [](Check& c) {
    const fs::path root = fs::temp_directory_path() / "tha_acceptance_c11";
    fs::remove_all(root);
    fs::create_directories(root);
    io::write_json(root / "weak.json", {{"regime", "weak"}, {"mu_out_grid", {0.2, 2.0, 20.0}}, {"n_symbols", 30000}});
    io::write_json(root / "cw.json", {{"regime", "cw"}, {"voa_db", {0.0, 8.0, 12.0}}, {"n_symbols", 600}});
    io::write_json(root / "pulsed.json",
                   {{"regime", "pulsed"},
                    {"laser", {{"average_power_w", 0.06}, {"pulse_width_s", 1e-10}}},
                    {"voa_db", {15.0, 25.0}},
                    {"n_symbols", 600}});
    io::write_json(root / "weak_attack.json", {{"mode", "weak"}, {"mu_out", 1.5}, {"n_symbols", 50000}});
    int rc = 0;
    const std::vector<std::string> runs{"a", "b"};
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto out = root / runs[k];
      const std::string threads = k == 0 ? " --threads 1" : "";
      for (const char* cfg : {"weak", "cw", "pulsed"})
        rc |= shell("sweep --seed 99" + threads + " --config " + (root / (std::string(cfg) + ".json")).string() +
                    " --out " + (out / cfg).string());
      rc |= shell("trace --seed 5" + threads + " --out " + (out / "trace").string());
      io::write_json(out / "strong.json", {{"mode", "strong"}, {"trace", (out / "trace" / "trace").string()}});
      rc |= shell("attack --seed 5" + threads + " --config " + (out / "strong.json").string() + " --out " +
                  (out / "strong").string());
      rc |= shell("attack --seed 5" + threads + " --config " + (root / "weak_attack.json").string() + " --out " +
                  (out / "weak_attack").string());
    }
    int compared = 0, differ = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
      if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
      const auto rel = fs::relative(entry.path(), root / "a");
      ++compared;
      differ += io::read_text(entry.path()) != io::read_text(root / "b" / rel);
    }
    c.detail << " " << compared << " CSV files compared across reruns (1 thread vs default), " << differ
             << " differ";
    c.require(rc == 0, "all commands succeed");
    c.require(compared >= 6 && differ == 0, "byte-identical CSV outputs");
    fs::remove_all(root);
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
