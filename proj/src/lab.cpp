#include "hklab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hklab/dense.hpp"

namespace hklab::lab {

using diffseq::difference_inplace;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

gen::NormOptions seeded(const gen::NormOptions& base, std::size_t index) {
  gen::NormOptions o = base;
  o.seed = base.seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1);
  return o;
}

bool nondecreasing(std::span<const double> v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - slack * std::max(1.0, std::abs(v[i - 1]))) return false;
  }
  return true;
}

// slope fit where it makes sense; short or nonpositive grids keep the NaNs
void attach_fit(ScanResult& result, std::span<const double> grid,
                std::span<const double> values) {
  std::size_t usable = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > 0.0 && values[i] > 0.0) ++usable;
  }
  if (usable < 2) return;
  const LogLogFit fit = fit_loglog(grid, values);
  result.fitted_slope = fit.slope;
  result.fit_residual = fit.residual_rms;
}

} // namespace

Grouping Grouping::uniform(std::size_t block_size, std::size_t n) {
  if (block_size < 1) throw InvalidPartition("uniform grouping: block size must be >= 1");
  Grouping g;
  for (std::size_t start = 1; start <= n; start += block_size) {
    std::vector<std::size_t> block;
    for (std::size_t j = start; j <= std::min(n, start + block_size - 1); ++j) block.push_back(j);
    g.blocks.push_back(std::move(block));
  }
  return g;
}

Grouping Grouping::singletons(std::size_t n) { return uniform(1, n); }

Grouping Grouping::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open grouping file: " + path);
  Grouping g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::size_t> block;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t idx = 0;
      try {
        idx = std::stoull(cell);
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": bad index '" + cell + "'");
      }
      block.push_back(idx);
    }
    if (block.empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty block");
    }
    g.blocks.push_back(std::move(block));
  }
  if (g.blocks.empty()) throw ParseError(path + ": no blocks");
  return g;
}

void Grouping::validate(std::size_t n) const {
  std::vector<char> seen(n + 1, 0);
  std::size_t covered = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw InvalidPartition("grouping contains an empty block");
    for (std::size_t j : block) {
      if (j < 1 || j > n) {
        throw InvalidPartition("grouping index " + std::to_string(j) + " outside 1.." +
                               std::to_string(n));
      }
      if (seen[j]) throw InvalidPartition("grouping index " + std::to_string(j) + " repeated");
      seen[j] = 1;
      ++covered;
    }
  }
  if (covered != n) {
    throw InvalidPartition("grouping covers " + std::to_string(covered) + " of " +
                           std::to_string(n) + " indices");
  }
}

std::size_t Grouping::max_block() const {
  std::size_t k = 0;
  for (const auto& b : blocks) k = std::max(k, b.size());
  return k;
}

LogLogFit fit_loglog(std::span<const double> grid, std::span<const double> values) {
  if (grid.size() != values.size()) throw DimensionMismatch("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > 0.0 && values[i] > 0.0) {
      lx.push_back(std::log(grid[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  if (lx.size() < 2) throw OutOfRange("fit_loglog: need at least two positive points");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  LogLogFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

const RealVec* ScanResult::extra(const std::string& name) const {
  for (const auto& [key, column] : extras) {
    if (key == name) return &column;
  }
  return nullptr;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(count, threads > 0 ? static_cast<std::size_t>(threads) : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex mutex;
  std::exception_ptr first_error;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::scoped_lock lock(mutex);
        if (next >= count || first_error) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ScanResult partial_sum_projection_norms(const SpaceConfig& cfg, const Grouping& grouping,
                                        std::size_t n, const ScanOptions& options,
                                        std::size_t max_prefixes) {
  cfg.validate();
  if (cfg.p != 2.0) throw Unsupported("partial_sum_projection_norms: requires p = 2");
  grouping.validate(n);

  const std::size_t prefixes = max_prefixes > 0
                                   ? std::min(max_prefixes, grouping.blocks.size())
                                   : grouping.blocks.size();
  ScanResult result;
  result.grid.resize(prefixes);
  result.values.resize(prefixes);
  RealVec block_norms(prefixes), block_sizes(prefixes);

  // per-block norms of the indicator vectors
  for (std::size_t b = 0; b < prefixes; ++b) {
    CoeffVec indicator(n, Complex(0.0, 0.0));
    for (std::size_t j : grouping.blocks[b]) indicator[j - 1] = 1.0;
    block_norms[b] = space_norm(cfg, indicator);
    block_sizes[b] = static_cast<double>(grouping.blocks[b].size());
  }

  if (cfg.basis.transform) {
    throw Unsupported("partial_sum_projection_norms: prefix operator norms require the "
                      "orthonormal model");
  }

  // prefix partial-sum operator norms: 0/1 multipliers conjugated by L^k
  std::vector<std::vector<Complex>> masks(prefixes);
  std::vector<Complex> mask(n, Complex(0.0, 0.0));
  for (std::size_t b = 0; b < prefixes; ++b) {
    for (std::size_t j : grouping.blocks[b]) mask[j - 1] = 1.0;
    masks[b] = mask;
  }
  parallel_for(prefixes, options.threads, [&](std::size_t b) {
    result.values[b] = gen::conjugated_norm(masks[b], cfg.k, seeded(options.norm, b)).value;
  });

  for (std::size_t b = 0; b < prefixes; ++b) result.grid[b] = static_cast<double>(b + 1);
  result.extras.emplace_back("block_norm", std::move(block_norms));
  result.extras.emplace_back("block_size", std::move(block_sizes));
  attach_fit(result, result.grid, result.values);
  result.monotone_flag = nondecreasing(result.values, 1e-9);
  return result;
}

ScanResult resolvent_blowup_scan(const gen::GeneratorConfig& g, std::size_t anchor_n,
                                 const RealVec& a_grid, std::size_t n,
                                 const ScanOptions& options) {
  g.validate();
  g.require_window(n);
  if (anchor_n < 1 || anchor_n > n) throw OutOfRange("blowup: anchor outside 1..N");
  if (a_grid.size() < 2) throw OutOfRange("blowup: need at least two grid points");
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > 0.0)) throw OutOfRange("blowup: grid values must be positive");
    if (i > 0 && !(a_grid[i] < a_grid[i - 1])) {
      throw OutOfRange("blowup: grid must be strictly decreasing");
    }
  }

  const double anchor_height = g.symbol(anchor_n);
  const diffseq::SkReport sk = diffseq::sk_diagnostics(g.symbol, g.space.k, n);
  const double c1 = sk.per_j_sup[0];

  ScanResult result;
  result.grid = a_grid;
  result.values.assign(a_grid.size(), 0.0);
  RealVec lower(a_grid.size()), closed(a_grid.size()), violated(a_grid.size(), 0.0);

  parallel_for(a_grid.size(), options.threads, [&](std::size_t i) {
    const Complex lambda(a_grid[i], anchor_height);
    const double dist = gen::spectrum_distance(g, lambda, n);
    const double nrm =
        gen::operator_norm(g, gen::ResolventOp{lambda}, n, gen::NormMethod::MatrixFree,
                           seeded(options.norm, i))
            .value;
    result.values[i] = nrm;
    lower[i] = 1.0 / dist;
    bool bad = nrm < lower[i] - 1e-8;
    if (g.space.k == 1 && !g.space.basis.transform) {
      closed[i] = gen::resolvent_bound_k1(dist, c1);
      bad = bad || nrm > closed[i] * (1.0 + 1e-10);
    } else {
      closed[i] = std::numeric_limits<double>::quiet_NaN();
    }
    violated[i] = bad ? 1.0 : 0.0;
  });

  RealVec inv_a(a_grid.size());
  for (std::size_t i = 0; i < a_grid.size(); ++i) inv_a[i] = 1.0 / a_grid[i];
  attach_fit(result, inv_a, result.values);
  result.monotone_flag = nondecreasing(result.values, 1e-9); // norms grow as a decreases
  result.extras.emplace_back("lower_bound", std::move(lower));
  result.extras.emplace_back("remark_bound", std::move(closed));
  result.extras.emplace_back("violated", std::move(violated));
  return result;
}

ScanResult group_growth_scan(const gen::GeneratorConfig& g, const RealVec& t_grid,
                             std::size_t n, const ScanOptions& options) {
  g.validate();
  g.require_window(n);
  if (t_grid.empty()) throw OutOfRange("group scan: empty grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw OutOfRange("group scan: grid must increase");
  }

  ScanResult result;
  result.grid = t_grid;
  result.values.assign(t_grid.size(), 0.0);
  parallel_for(t_grid.size(), options.threads, [&](std::size_t i) {
    result.values[i] =
        gen::operator_norm(g, gen::GroupOp{t_grid[i]}, n, gen::NormMethod::MatrixFree,
                           seeded(options.norm, i))
            .value;
  });

  RealVec rate(t_grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] > 0.0) rate[i] = std::log(result.values[i]) / t_grid[i];
  }
  attach_fit(result, result.grid, result.values);
  result.monotone_flag = nondecreasing(result.values, 1e-9);
  result.extras.emplace_back("log_g_over_t", std::move(rate));
  return result;
}

ScanResult truncation_norm_scan(const gen::GeneratorConfig& g, const gen::OperatorKind& kind,
                                const std::vector<std::size_t>& n_grid,
                                const ScanOptions& options) {
  g.validate();
  if (n_grid.empty()) throw OutOfRange("truncation scan: empty grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > n_grid[i - 1])) throw OutOfRange("truncation scan: grid must increase");
  }
  g.require_window(n_grid.back());

  ScanResult result;
  result.grid.resize(n_grid.size());
  result.values.assign(n_grid.size(), 0.0);
  for (std::size_t i = 0; i < n_grid.size(); ++i) result.grid[i] = static_cast<double>(n_grid[i]);
  parallel_for(n_grid.size(), options.threads, [&](std::size_t i) {
    result.values[i] =
        gen::operator_norm(g, kind, n_grid[i], gen::NormMethod::MatrixFree,
                           seeded(options.norm, i))
            .value;
  });
  attach_fit(result, result.grid, result.values);
  result.monotone_flag = nondecreasing(result.values, 1e-8);
  return result;
}

ScanResult nongeneration_witness(const std::vector<std::size_t>& n_grid, double t,
                                 const ScanOptions& options) {
  if (n_grid.empty()) throw OutOfRange("nongeneration witness: empty grid");
  gen::GeneratorConfig g{SpaceConfig{1, 2.0, BasisModel{}},
                         diffseq::Symbol::sqrt_witness(n_grid.back())};
  return truncation_norm_scan(g, gen::GroupOp{t}, n_grid, options);
}

namespace {

// Adaptive Simpson on [lo, hi] with an absolute per-panel tolerance.
// Iterative with an explicit stack; panels are split until the classic
// 1/15 Richardson error estimate clears the tolerance or the depth cap.
double adaptive_simpson(const std::function<double(double)>& h, double lo, double hi,
                        const IntegralOptions& opt) {
  struct Panel {
    double a, b, fa, fm, fb;
    int depth;
  };
  auto simpson = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };
  double total = 0.0;
  std::vector<Panel> stack;
  stack.push_back({lo, hi, h(lo), h(0.5 * (lo + hi)), h(hi), 0});
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = h(lm), frm = h(rm);
    const double whole = simpson(p.a, p.b, p.fa, p.fm, p.fb);
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * opt.panel_tolerance || p.depth >= opt.max_depth) {
      total += left + right + err / 15.0;
    } else {
      stack.push_back({p.a, m, p.fa, flm, p.fm, p.depth + 1});
      stack.push_back({m, p.b, p.fm, frm, p.fb, p.depth + 1});
    }
  }
  return total;
}

// Integral over the real line of a sharply peaked integrand: the band
// holding the spectrum is pre-split at the peak scale, the outside is
// covered by geometrically growing panels, and the half-width S doubles
// until the tail estimate |h(S)| * S drops below the requested fraction.
struct LineIntegral {
  double value = 0.0;
  double s_used = 0.0;
};

LineIntegral integrate_line(const std::function<double(double)>& h, double band_lo,
                            double band_hi, double peak_scale, double s_start,
                            const IntegralOptions& opt) {
  const double pad = 2.0;
  const double lo = band_lo - pad, hi = band_hi + pad;
  // uniform initial panels through the band, at the peak width scale
  const double step = std::max(std::min(0.5 * peak_scale, 0.05), 1e-3);

  double total = 0.0;
  for (double s = lo; s < hi;) {
    const double e = std::min(hi, s + step);
    total += adaptive_simpson(h, s, e, opt);
    s = e;
  }

  double s_half = std::max({s_start, std::abs(lo) + 1.0, std::abs(hi) + 1.0});
  // outside the band: panels with doubling widths out to +-s_half
  {
    double w = 1.0;
    for (double s = hi; s < s_half;) {
      const double e = std::min(s_half, s + w);
      total += adaptive_simpson(h, s, e, opt);
      s = e;
      w *= 2.0;
    }
    w = 1.0;
    for (double s = lo; s > -s_half;) {
      const double e = std::max(-s_half, s - w);
      total += adaptive_simpson(h, e, s, opt);
      s = e;
      w *= 2.0;
    }
  }
  // extend until the tail is negligible relative to the running integral
  for (;;) {
    const double tail = (std::abs(h(s_half)) + std::abs(h(-s_half))) * s_half;
    if (tail < opt.tail_fraction * std::abs(total) || s_half > 1e12) break;
    const double next = 2.0 * s_half;
    total += adaptive_simpson(h, s_half, next, opt);
    total += adaptive_simpson(h, -next, -s_half, opt);
    s_half = next;
  }
  return {total, s_half};
}

} // namespace

ScanResult vertical_integral_scan(const gen::GeneratorConfig& g, const RealVec& a_grid,
                                  const CoeffVec& x, const CoeffVec& y, double s_halfwidth,
                                  std::size_t n, const IntegralOptions& options,
                                  int threads) {
  g.validate();
  g.require_window(n);
  if (g.space.p != 2.0 || g.space.basis.transform) {
    throw Unsupported("vertical_integral_scan: requires p = 2 with the orthonormal model");
  }
  if (x.size() != n || y.size() != n) {
    throw DimensionMismatch("vertical_integral_scan: x and y must have length N");
  }
  for (double a : a_grid) {
    if (!(a > 0.0)) throw OutOfRange("vertical_integral_scan: grid must be positive");
  }

  const int k = g.space.k;
  RealVec fvals(n);
  for (std::size_t i = 1; i <= n; ++i) fvals[i - 1] = g.symbol(i);
  const double fmin = *std::min_element(fvals.begin(), fvals.end());
  const double fmax = *std::max_element(fvals.begin(), fvals.end());

  // isometric coordinates of y, for the pairing and the adjoint variant
  CoeffVec dy = diffseq::diff_apply(k, y);

  ScanResult result;
  result.grid = a_grid;
  result.values.assign(a_grid.size(), 0.0);
  RealVec i2(a_grid.size()), i1_adj(a_grid.size()), q1(a_grid.size()), q2(a_grid.size()),
      s_used(a_grid.size());

  parallel_for(a_grid.size(), threads, [&](std::size_t idx) {
    const double a = a_grid[idx];
    std::vector<Complex> work(n);

    auto resolvent_coeffs = [&](double s, int power) {
      const Complex lambda(a, s);
      for (std::size_t i = 0; i < n; ++i) {
        const Complex denom = Complex(0.0, fvals[i]) - lambda;
        Complex r = x[i] / denom;
        if (power == 2) r /= denom;
        work[i] = r;
      }
    };

    auto h1 = [&](double s) {
      resolvent_coeffs(s, 1);
      for (int pass = 0; pass < k; ++pass) difference_inplace(work);
      double acc = 0.0;
      for (const Complex& z : work) acc += std::norm(z);
      return acc;
    };
    auto h2 = [&](double s) {
      resolvent_coeffs(s, 2);
      for (int pass = 0; pass < k; ++pass) difference_inplace(work);
      Complex acc(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) acc += std::conj(dy[i]) * work[i];
      return std::abs(acc);
    };
    // adjoint model: the coefficientwise resolvent with conjugated symbol
    auto h1_adjoint = [&](double s) {
      const Complex lambda(a, s);
      for (std::size_t i = 0; i < n; ++i) {
        work[i] = y[i] / (Complex(0.0, -fvals[i]) - lambda);
      }
      for (int pass = 0; pass < k; ++pass) difference_inplace(work);
      double acc = 0.0;
      for (const Complex& z : work) acc += std::norm(z);
      return acc;
    };

    const LineIntegral v1 = integrate_line(h1, fmin, fmax, a, s_halfwidth, options);
    const LineIntegral v2 = integrate_line(h2, fmin, fmax, a, s_halfwidth, options);
    const LineIntegral v1a = integrate_line(h1_adjoint, fmin, fmax, a, s_halfwidth, options);

    const double shape = 1.0 + std::pow(a, -2.0 * k);
    result.values[idx] = v1.value;
    i2[idx] = v2.value;
    i1_adj[idx] = v1a.value;
    q1[idx] = v1.value * a / shape;
    q2[idx] = v2.value * a / shape;
    s_used[idx] = std::max({v1.s_used, v2.s_used, v1a.s_used});
  });

  attach_fit(result, result.grid, result.values);
  result.monotone_flag = nondecreasing(result.values, 1e-9);
  result.extras.emplace_back("I2", std::move(i2));
  result.extras.emplace_back("I1_adjoint", std::move(i1_adj));
  result.extras.emplace_back("Q1", std::move(q1));
  result.extras.emplace_back("Q2", std::move(q2));
  result.extras.emplace_back("S_used", std::move(s_used));
  return result;
}

ScanResult spectrum_map_check(const gen::GeneratorConfig& g, double t, std::size_t n) {
  g.validate();
  g.require_window(n);
  if (n > 2048) throw OutOfRange("spectrum_map_check: dense eigensolver limited to N <= 2048");

  const std::vector<Complex> expected = gen::multipliers(g, gen::GroupOp{t}, n);
  const DenseMatrix m = gen::truncated_matrix(g, gen::GroupOp{t}, n);
  const std::vector<Complex> computed = dense::eigenvalues(m);

  ScanResult result;
  result.grid.resize(n);
  result.values.resize(n);
  RealVec exp_re(n), exp_im(n), got_re(n), got_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.grid[i] = static_cast<double>(i + 1);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(computed[j] - expected[i]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    result.values[i] = best;
    exp_re[i] = expected[i].real();
    exp_im[i] = expected[i].imag();
    got_re[i] = computed[best_j].real();
    got_im[i] = computed[best_j].imag();
  }
  result.extras.emplace_back("expected_re", std::move(exp_re));
  result.extras.emplace_back("expected_im", std::move(exp_im));
  result.extras.emplace_back("matched_re", std::move(got_re));
  result.extras.emplace_back("matched_im", std::move(got_im));

  // reverse direction: every computed eigenvalue must sit near the set
  RealVec reverse(n);
  for (std::size_t j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, std::abs(computed[j] - expected[i]));
    reverse[j] = best;
  }
  result.extras.emplace_back("reverse_err", std::move(reverse));
  result.monotone_flag = false;
  return result;
}

ScanResult minimality_scan(const SpaceConfig& cfg, const std::vector<std::size_t>& n_grid,
                           std::size_t n) {
  cfg.validate();
  if (n_grid.empty()) throw OutOfRange("minimality scan: empty grid");
  ScanResult result;
  result.grid.resize(n_grid.size());
  result.values.resize(n_grid.size());
  RealVec reference(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    result.grid[i] = static_cast<double>(n_grid[i]);
    result.values[i] = minimality_distance(cfg, n_grid[i], n);
    reference[i] = 1.0 / std::sqrt(static_cast<double>(n_grid[i]));
  }
  result.extras.emplace_back("inv_sqrt_n", std::move(reference));
  attach_fit(result, result.grid, result.values);
  result.monotone_flag = false;
  return result;
}

} // namespace hklab::lab
