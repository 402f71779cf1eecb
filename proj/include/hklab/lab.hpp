#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "hklab/generator.hpp"

namespace hklab::lab {

/// Disjoint-block partition of {1..N} used by the projection experiments.
struct Grouping {
  std::vector<std::vector<std::size_t>> blocks; // 1-based indices

  /// Consecutive blocks of a fixed size (last block may be short).
  static Grouping uniform(std::size_t block_size, std::size_t n);
  /// One index per block.
  static Grouping singletons(std::size_t n);
  /// One comma-separated block per line.
  static Grouping from_file(const std::string& path);

  /// Throws InvalidPartition unless the blocks are disjoint, nonempty and
  /// cover exactly {1..n}.
  void validate(std::size_t n) const;

  std::size_t max_block() const;
};

/// Least-squares fit of log(values) against log(grid).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

LogLogFit fit_loglog(std::span<const double> grid, std::span<const double> values);

/// Common result shape of every experiment: a grid of abscissae, the
/// measured values, the fitted log-log slope with residual, and named
/// auxiliary columns for reporting.
struct ScanResult {
  RealVec grid;
  RealVec values;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = std::numeric_limits<double>::quiet_NaN();
  bool monotone_flag = false;
  std::vector<std::pair<std::string, RealVec>> extras;

  const RealVec* extra(const std::string& name) const;
};

struct ScanOptions {
  gen::NormOptions norm;
  int threads = 1; // grid points are independent; results do not depend on this
};

/// Run fn(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to disjoint slots; the first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Per-block projection norms ||sum_{j in A_i} e_j||_k together with the
/// operator norms of the prefix partial sums S_i (coordinate projection
/// onto the union of the first i blocks, conjugated into isometric
/// coordinates). Every block norm is >= 1/sqrt(M); unbounded prefix norms
/// are the quantitative failure of the would-be Schauder decomposition.
/// grid/values: prefix index and ||S_i||; extras: block_norm, block_size.
/// max_prefixes > 0 evaluates only the first so many prefixes.
ScanResult partial_sum_projection_norms(const SpaceConfig& cfg, const Grouping& grouping,
                                        std::size_t n, const ScanOptions& options = {},
                                        std::size_t max_prefixes = 0);

/// ||R(a + i f(anchor))|| over a decreasing grid of a > 0, with the
/// distance lower bound and (k = 1) the closed-form upper bound per row.
/// fitted_slope is the slope of log||R|| against log(1/a); the expected
/// window is [1, k+1] up to fitting slack.
ScanResult resolvent_blowup_scan(const gen::GeneratorConfig& g, std::size_t anchor_n,
                                 const RealVec& a_grid, std::size_t n,
                                 const ScanOptions& options = {});

/// g(t) = ||e^{A t}|| over an increasing t-grid. extras: log_g_over_t.
/// fitted_slope is the log-log slope over the positive-t points (expected
/// <= k up to slack; the growth bound log g(t) / t decays to zero).
ScanResult group_growth_scan(const gen::GeneratorConfig& g, const RealVec& t_grid,
                             std::size_t n, const ScanOptions& options = {});

/// Norms of one operator kind over a grid of truncations; the values are
/// nondecreasing because each truncation is the restriction of the next.
ScanResult truncation_norm_scan(const gen::GeneratorConfig& g, const gen::OperatorKind& kind,
                                const std::vector<std::size_t>& n_grid,
                                const ScanOptions& options = {});

/// ||e^{A t}|| restricted to spans of growing truncations for the
/// square-root symbol (k = 1): the values diverge with N, which is the
/// finite-dimensional witness that no bounded group exists there.
ScanResult nongeneration_witness(const std::vector<std::size_t>& n_grid, double t,
                                 const ScanOptions& options = {});

struct IntegralOptions {
  double panel_tolerance = 1e-8; // absolute Simpson tolerance per panel
  double tail_fraction = 1e-6;   // stop extending S once tail < this fraction
  int max_depth = 40;
};

/// Vertical-line integrals of the exact coefficientwise resolvent over
/// s in [-S, S] (S auto-extended until the tail estimate is negligible):
///   values  = I1(a) = int ||R(a+is) x||^2 ds
///   extras  : I2(a) = int |<R(a+is)^2 x, y>| ds, the adjoint variant
///             I1_adj(a) = int ||R*(a+is) y||^2 ds, the normalised
///             Q1/Q2 = I * a / (1 + a^{-2k}), and S_used.
/// Orthonormal basis model only.
ScanResult vertical_integral_scan(const gen::GeneratorConfig& g, const RealVec& a_grid,
                                  const CoeffVec& x, const CoeffVec& y, double s_halfwidth,
                                  std::size_t n, const IntegralOptions& options = {},
                                  int threads = 1);

/// Eigenvalues of the assembled truncated group matrix against the
/// multiplier set {e^{i t f(n)}}: grid = n, values = matching error of the
/// n-th expected value; extras carry both sets. The summary quantity is
/// the two-sided worst matching error.
ScanResult spectrum_map_check(const gen::GeneratorConfig& g, double t, std::size_t n);

/// Minimality distances over an index grid with the 1/sqrt(n) reference
/// column; fitted_slope estimates the decay exponent of the distances.
ScanResult minimality_scan(const SpaceConfig& cfg, const std::vector<std::size_t>& n_grid,
                           std::size_t n);

} // namespace hklab::lab
