#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Eigenvalues of a real symmetric 3x3 matrix from the trigonometric
/// solution of its characteristic cubic, descending.
inline std::array<double, 3> symmetric3_eigenvalues(const std::array<std::array<double, 3>, 3>& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return {q, q, q};
  std::array<std::array<double, 3>, 3> b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                     b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                     b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> e{e1, e2, e3};
  std::sort(e.begin(), e.end(), std::greater<>());
  return e;
}

/// G/3 for the H, V, D coherent states at mean photon number mu.
inline std::array<std::array<double, 3>, 3> ensemble_state(double mu) {
  // <a|b> = exp(-|a-b|^2/2) for real coherent amplitudes on two modes.
  const double s = std::sqrt(mu), h = std::sqrt(mu / 2.0);
  const std::array<std::array<double, 2>, 3> amp{{{s, 0.0}, {0.0, s}, {h, h}}};
  std::array<std::array<double, 3>, 3> rho{};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const double dx = amp[j][0] - amp[k][0], dy = amp[j][1] - amp[k][1];
      rho[j][k] = std::exp(-0.5 * (dx * dx + dy * dy)) / 3.0;
    }
  return rho;
}

inline double entropy_bits(const std::array<double, 3>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

/// Mutual information of the symmetric channel that is right with
/// probability pg and otherwise uniformly wrong, for uniform inputs.
inline double symmetric_channel_info(double pg) {
  const double w = (1.0 - pg) / 2.0;
  double h = 0.0;
  for (double x : {pg, w, w})
    if (x > 0.0) h -= x * std::log2(x);
  return std::log2(3.0) - h;
}

/// Equal-prior two-state minimum error, |<a|b>| = c.
inline double two_state_helstrom(double c) { return 0.5 * (1.0 + std::sqrt(1.0 - c * c)); }

inline double poisson_pmf(unsigned n, double m) {
  return std::exp(-m + n * std::log(m) - std::lgamma(n + 1.0));
}

/// Correct-guess probability of the two-channel click strategy, summed
/// over photon counts on each channel. Channel means per symbol follow the
/// PBS projection with leakage `er` into the orthogonal channel.
inline double click_strategy_enumerated(double mu, double eta, double er, unsigned cutoff = 400) {
  const double m = eta * mu;
  const std::array<std::array<double, 2>, 3> means{{{m, m * er}, {m * er, m}, {m / 2, m / 2}}};
  double total = 0.0;
  for (int s = 0; s < 3; ++s) {
    auto pmf = [&](unsigned n, double mean) { return mean == 0.0 ? (n == 0 ? 1.0 : 0.0) : poisson_pmf(n, mean); };
    double p00 = pmf(0, means[s][0]) * pmf(0, means[s][1]);
    double p_only1 = 0.0, p_only2 = 0.0, p_both = 0.0;
    for (unsigned a = 1; a < cutoff; ++a) {
      p_only1 += pmf(a, means[s][0]) * pmf(0, means[s][1]);
      p_only2 += pmf(0, means[s][0]) * pmf(a, means[s][1]);
    }
    p_both = std::max(0.0, 1.0 - p00 - p_only1 - p_only2);
    const double right = s == 0 ? p_only1 : s == 1 ? p_only2 : p_both;
    total += right + p00 / 3.0;
  }
  return total / 3.0;
}

/// Photon-number-conditioned PNR guess probability summed over Poisson(mu).
inline double pnr_conditioned_enumerated(double mu, unsigned cutoff = 2000) {
  if (mu == 0.0) return 1.0 / 3.0;
  double pg = 0.0;
  for (unsigned n = 0; n < cutoff; ++n) pg += poisson_pmf(n, mu) * (1.0 - (2.0 / 3.0) * std::pow(2.0, -double(n)));
  return pg;
}

/// Empirical error of three-way thresholding with labels 0 (low), 1 (mid), 2 (high).
inline double threshold_error(const std::vector<double>& x, const std::vector<int>& y, double lo, double hi) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int g = x[i] > hi ? 2 : (x[i] >= lo ? 1 : 0);
    wrong += g != y[i];
  }
  return double(wrong) / double(x.size());
}

/// Best empirical error over all threshold pairs taken from data midpoints.
/// The error splits as A(lo) + B(hi) when lo < hi, so each threshold is
/// optimized on its own pair of adjacent classes.
inline double grid_search_min_error(const std::vector<double>& x, const std::vector<int>& y) {
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  const std::size_t n = x.size();
  // Cut c puts sorted samples [0, c) below the threshold.
  auto best_cut = [&](int below, int above, std::vector<double>& err_at) {
    std::size_t above_below = 0, below_total = 0;
    for (std::size_t i = 0; i < n; ++i) below_total += y[i] == below;
    err_at.assign(n + 1, 0.0);
    std::size_t below_seen = 0;
    for (std::size_t c = 0; c <= n; ++c) {
      err_at[c] = double(above_below + (below_total - below_seen)) / double(n);
      if (c < n) {
        if (y[idx[c]] == above) ++above_below;
        if (y[idx[c]] == below) ++below_seen;
      }
    }
  };
  std::vector<double> a, b;
  best_cut(0, 1, a);  // low vs mid: mislabels are mid below lo and low above lo
  best_cut(1, 2, b);
  double best = 1.0;
  std::vector<double> suffix_min(n + 2, 1e9);
  for (std::size_t c = n + 1; c-- > 0;) suffix_min[c] = std::min(suffix_min[c + 1], b[c]);
  for (std::size_t c = 0; c <= n; ++c) best = std::min(best, a[c] + suffix_min[c]);
  return best;
}

}  // namespace oracle
