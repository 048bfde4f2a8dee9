#include <gtest/gtest.h>

#include <cmath>

#include "tha/error.hpp"
#include "tha/sweep.hpp"

using namespace tha;

TEST(Grid, LogGrid) {
  const auto g = log_grid(1e-3, 1e2, 6);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.back(), 1e2);
  EXPECT_NEAR(g[3], 1.0, 1e-12);
  EXPECT_THROW(log_grid(0.0, 1.0, 3), ConfigError);
}

TEST(Bounds, ZeroAndLarge) {
  const auto v = default_gm_variants();
  const auto rows = bounds_table({0.0, 50.0}, v);
  for (double p : {rows[0].pg_holevo, rows[0].pg_helstrom, rows[0].pg_pgm, rows[0].pg_pnr}) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  for (double p : rows[0].pg_gm) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  EXPECT_NEAR(rows[1].pg_holevo, 1.0, 1e-6);
  EXPECT_NEAR(rows[1].pg_helstrom, 1.0, 1e-9);
  EXPECT_NEAR(rows[1].pg_pnr, 1.0, 1e-9);
}

TEST(Bounds, OrderingRowWise) {
  const auto v = default_gm_variants();
  for (const auto& r : bounds_table(log_grid(1e-3, 1e2, 41), v)) {
    EXPECT_GE(r.pg_pgm, 1.0 / 3.0 - 1e-12);
    EXPECT_LE(r.pg_pgm, r.pg_helstrom + 1e-9);
    EXPECT_LE(r.pg_helstrom, r.pg_holevo + 1e-6);
    EXPECT_LE(r.pg_pnr, r.pg_helstrom + 1e-9);
    for (double g : r.pg_gm) EXPECT_LE(g, r.pg_pnr + 1e-12);
  }
}

TEST(Bounds, AnalyticColumnsMonotone) {
  const auto v = default_gm_variants();
  const auto rows = bounds_table(log_grid(1e-3, 1e2, 41), v);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].pg_holevo, rows[i - 1].pg_holevo - 1e-9);
    EXPECT_GE(rows[i].pg_helstrom, rows[i - 1].pg_helstrom - 1e-9);
    EXPECT_GE(rows[i].pg_pnr, rows[i - 1].pg_pnr);
    EXPECT_GE(rows[i].h_entropy_bits, rows[i - 1].h_entropy_bits - 1e-12);
  }
}

TEST(Bounds, DegenerateHelstromIsNan) { EXPECT_TRUE(std::isnan(helstrom_pg_or_nan(1e-12))); }

TEST(Bounds, SerialAndParallelIdentical) {
  const auto v = default_gm_variants();
  const auto g = log_grid(1e-2, 10.0, 13);
  EXPECT_EQ(bounds_csv(bounds_table(g, v), v).str(), bounds_csv(bounds_table_serial(g, v), v).str());
}

TEST(Bounds, EmptyGridRejected) { EXPECT_THROW(bounds_table({}, default_gm_variants()), ConfigError); }

TEST(Sweep, WeakAgreesWithAnalytic) {
  SweepConfig c;
  c.mu_out_grid = {0.1, 1.0, 10.0};
  c.n_symbols = 100000;
  c.seed = 3;
  for (const auto& p : accuracy_sweep(c)) {
    const double s = std::sqrt(p.acc_analytic_gm * (1.0 - p.acc_analytic_gm) / 1e5);
    EXPECT_NEAR(p.accuracy, p.acc_analytic_gm, 5.0 * s);
    EXPECT_LE(p.acc_analytic_gm, p.acc_pnr + 1e-12);
    EXPECT_LE(p.acc_pnr, p.pg_helstrom + 1e-9);
    EXPECT_LE(p.pg_helstrom, p.pg_holevo + 1e-6);
  }
}

TEST(Sweep, CwCollapses) {
  SweepConfig c;
  c.regime = AttackRegime::cw;
  c.laser = LaserSpec::cw(6.29e-3);
  c.voa_db = {0.0, 4.0, 8.0, 12.0, 16.0};
  c.seed = 5;
  const auto pts = accuracy_sweep(c);
  EXPECT_GE(pts.front().accuracy, 0.95);
  EXPECT_LE(pts.back().accuracy, 0.40);
  EXPECT_DOUBLE_EQ(pts[2].attenuation_db, 31.0);
  const double x = crossing_db(pts);
  EXPECT_GT(x, 15.0);
}

TEST(Sweep, ConfigErrors) {
  SweepConfig c;
  c.n_symbols = 0;
  c.mu_out_grid = {1.0};
  EXPECT_THROW(accuracy_sweep(c), ConfigError);
  c.n_symbols = 10;
  c.mu_out_grid.clear();
  EXPECT_THROW(accuracy_sweep(c), ConfigError);
  c.regime = AttackRegime::pulsed;
  c.voa_db = {1.0};
  EXPECT_THROW(accuracy_sweep(c), ConfigError);  // CW laser for a pulsed sweep
  c.regime = AttackRegime::weak;
  c.mu_out_grid = {1.0};
  c.detector = DetectorSpec::photodiode(1e-6);
  EXPECT_THROW(accuracy_sweep(c), WrongRegimeError);
}

TEST(Sweep, FailedPointScoresChance) {
  SweepConfig c;
  c.regime = AttackRegime::cw;
  c.laser = LaserSpec::cw(0.0);
  c.noise_sigma_w = 0.0;
  c.voa_db = {0.0};
  c.n_symbols = 300;
  const auto p = accuracy_sweep(c).front();
  EXPECT_TRUE(p.failed);
  EXPECT_EQ(p.failure, "locate_failure");
  EXPECT_NEAR(p.accuracy, 1.0 / 3.0, 0.15);
}

TEST(Sweep, Normalization) {
  SweepConfig c;
  c.regime = AttackRegime::pulsed;
  c.laser = LaserSpec::pulsed(1.0, 100e-12);
  c.normalize_average_power_w = 10.0;
  EXPECT_NEAR(sweep_laser(c).power_w, 10.0 / (50e6 * 100e-12), 1e-6);
}

TEST(Sweep, SerialAndParallelIdentical) {
  SweepConfig c;
  c.regime = AttackRegime::pulsed;
  c.laser = LaserSpec::pulsed_from_average(60e-3, 100e-12);
  c.voa_db = {18.0, 22.0, 26.0};
  c.n_symbols = 600;
  c.seed = 8;
  EXPECT_EQ(sweep_csv(accuracy_sweep(c)).str(), sweep_csv(accuracy_sweep_serial(c)).str());
  SweepConfig w;
  w.mu_out_grid = {0.5, 5.0};
  w.n_symbols = 9000;
  EXPECT_EQ(sweep_csv(accuracy_sweep(w)).str(), sweep_csv(accuracy_sweep_serial(w)).str());
}

TEST(Sweep, CsvHeader) {
  const auto s = sweep_csv({}).str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "regime,attenuation_db,mu_out,accuracy,acc_analytic_gm,acc_pnr,pg_helstrom,pg_holevo,n_symbols,seed,failed");
}

TEST(Crossing, Interpolates) {
  std::vector<SweepPoint> p(3);
  p[0].attenuation_db = 10, p[0].accuracy = 0.9;
  p[1].attenuation_db = 20, p[1].accuracy = 0.6;
  p[2].attenuation_db = 30, p[2].accuracy = 0.4;
  EXPECT_DOUBLE_EQ(crossing_db(p), 25.0);
  EXPECT_TRUE(std::isnan(crossing_db(p, 0.2)));
}
