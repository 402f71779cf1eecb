// Acceptance suite: one pass/fail line per criterion, each criterion run at
// its stated tolerance. Exit code = number of failed criteria.
//
//   acceptance            runs everything
//   acceptance 4          runs a single criterion
//   acceptance --list     lists the criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hklab/dense.hpp"
#include "hklab/lab.hpp"

using namespace hklab;
namespace gen = hklab::gen;
namespace lab = hklab::lab;
using diffseq::Symbol;

namespace {

constexpr int kThreads = 2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& out;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      out.detail += " !" + what;
    }
  }
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

gen::GeneratorConfig log_config(int k, std::size_t window, double p = 2.0) {
  return gen::GeneratorConfig{SpaceConfig{k, p, BasisModel{}}, Symbol::log_symbol(window)};
}

lab::ScanOptions scan_opts(std::uint64_t seed = 12345) {
  lab::ScanOptions o;
  o.norm.seed = seed;
  o.threads = kThreads;
  return o;
}

CoeffVec random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CoeffVec c(n);
  for (auto& z : c) z = Complex(gauss(rng), gauss(rng));
  return c;
}

double pnorm_residual(const SpaceConfig& cfg, const CoeffVec& u, const CoeffVec& ref) {
  return space_norm(cfg, u) / space_norm(cfg, ref);
}

// ---------------------------------------------------------------- 1
Outcome criterion_hardy() {
  Outcome out;
  Check ck{out};
  const auto t0 = std::chrono::steady_clock::now();

  std::mt19937_64 rng(20240);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double max_ratio = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    RealVec a(10000);
    for (auto& x : a) x = uni(rng);
    max_ratio = std::max(max_ratio, diffseq::hardy_ratio(2.0, a));
  }
  ck.require(max_ratio < 4.0, "random ratio reached " + num(max_ratio));

  RealVec power(1000000);
  for (std::size_t i = 0; i < power.size(); ++i) {
    power[i] = std::pow(static_cast<double>(i + 1), -0.51);
  }
  const double ratio = diffseq::hardy_ratio(2.0, power);
  ck.require(ratio >= 3.4 && ratio < 4.0,
             "power-law ratio " + num(ratio) + " outside [3.4, 4)");

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.require(secs < 10.0, "runtime " + num(secs) + "s exceeds 10s");
  out.detail = "max_random_ratio=" + num(max_ratio) + " power_ratio=" + num(ratio) +
               " time=" + num(secs) + "s" + out.detail;
  return out;
}

// ---------------------------------------------------------------- 2
Outcome criterion_resolvent_identity() {
  Outcome out;
  Check ck{out};
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 4096;

  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> re(0.1, 3.0);
  std::uniform_real_distribution<double> im(0.0, std::log(4096.0) + 1.0);
  double worst = 0.0;
  for (int k : {1, 2, 3}) {
    for (double p : {2.0, 3.0}) {
      auto g = log_config(k, n, p);
      for (int trial = 0; trial < 100; ++trial) {
        const Complex lambda((trial % 2 == 0 ? 1.0 : -1.0) * re(rng), im(rng));
        const CoeffVec c = random_vec(n, rng);
        const CoeffVec rc = gen::resolvent_apply(g, lambda, c);
        const CoeffVec arc = gen::apply_generator(g, rc);
        CoeffVec resid(n);
        for (std::size_t i = 0; i < n; ++i) resid[i] = arc[i] - lambda * rc[i] - c[i];
        worst = std::max(worst, pnorm_residual(g.space, resid, c));
      }
    }
  }
  ck.require(worst <= 1e-12, "residual " + num(worst) + " above 1e-12");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.require(secs < 5.0, "runtime " + num(secs) + "s exceeds 5s");
  out.detail = "max_rel_residual=" + num(worst) + " time=" + num(secs) + "s" + out.detail;
  return out;
}

// ---------------------------------------------------------------- 3
Outcome criterion_spectral_lower_bound() {
  Outcome out;
  Check ck{out};
  const std::size_t n = 4096;
  const std::vector<std::size_t> anchors{1, 2, 5, 10, 50, 100, 500, 1000, 2000, 4000};
  int violations = 0;
  double worst_margin = 1e300;
  for (int k : {1, 2}) {
    auto g = log_config(k, n);
    std::size_t idx = 0;
    for (std::size_t anchor : anchors) {
      for (int j = 0; j < 5; ++j) {
        const double a = std::pow(10.0, -3.0 + 4.0 * j / 4.0);
        const Complex lambda(a, g.symbol(anchor));
        const double dist = gen::spectrum_distance(g, lambda, n);
        gen::NormOptions opt;
        opt.seed = 1000 + idx++;
        const double nrm =
            gen::operator_norm(g, gen::ResolventOp{lambda}, n, gen::NormMethod::MatrixFree, opt)
                .value;
        if (nrm < 1.0 / dist - 1e-8) ++violations;
        worst_margin = std::min(worst_margin, nrm * dist);
      }
    }
  }
  ck.require(violations == 0, std::to_string(violations) + " violations");
  out.detail = "points=100 min(norm*dist)=" + num(worst_margin) + out.detail;
  return out;
}

// ---------------------------------------------------------------- 4
Outcome criterion_closed_form_bound() {
  Outcome out;
  Check ck{out};
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 8192;
  auto g = log_config(1, n);
  const auto sk = diffseq::sk_diagnostics(g.symbol, 1, n);
  const double c1 = sk.per_j_sup[0]; // 2 ln 2 for the logarithm

  const std::vector<std::size_t> anchors{1, 2, 5, 10, 50, 100, 500, 1000, 4000, 8000};
  int violations = 0;
  double worst_ratio = 0.0;
  std::size_t idx = 0;
  for (std::size_t anchor : anchors) {
    for (int j = 0; j < 10; ++j) {
      const double a = std::pow(10.0, -3.0 + 4.0 * j / 9.0);
      const Complex lambda(a, g.symbol(anchor));
      const double dist = gen::spectrum_distance(g, lambda, n);
      gen::NormOptions opt;
      opt.seed = 2000 + idx++;
      const double nrm =
          gen::operator_norm(g, gen::ResolventOp{lambda}, n, gen::NormMethod::MatrixFree, opt)
              .value;
      const double bound = gen::resolvent_bound_k1(dist, c1);
      if (nrm > bound) ++violations;
      worst_ratio = std::max(worst_ratio, nrm / bound);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.require(violations == 0, std::to_string(violations) + " violations");
  ck.require(secs < 120.0, "runtime " + num(secs) + "s exceeds 2min");
  out.detail = "C=" + num(c1) + " max(norm/bound)=" + num(worst_ratio) + " time=" + num(secs) +
               "s" + out.detail;
  return out;
}

// ---------------------------------------------------------------- 5
Outcome criterion_blowup_exponent() {
  Outcome out;
  Check ck{out};
  const std::size_t n = 8192;
  RealVec a_grid; // decreasing toward the spectrum
  for (int i = 19; i >= 0; --i) a_grid.push_back(std::pow(10.0, -3.0 + 3.0 * i / 19.0));
  for (int k : {1, 2}) {
    auto g = log_config(k, n);
    const auto scan = lab::resolvent_blowup_scan(g, 1000, a_grid, n, scan_opts());
    const double s = scan.fitted_slope;
    ck.require(s >= 0.95 && s <= k + 1.1,
               "k=" + std::to_string(k) + " slope " + num(s) + " outside [0.95, " +
                   num(k + 1.1) + "]");
    out.detail += " slope_k" + std::to_string(k) + "=" + num(s);
  }
  return out;
}

// ---------------------------------------------------------------- 6
Outcome criterion_group_growth() {
  Outcome out;
  Check ck{out};
  const std::size_t n = 4096;
  RealVec t_grid;
  for (int t = 1; t <= 100; ++t) t_grid.push_back(t);
  for (int k : {1, 2}) {
    auto g = log_config(k, n);
    const double g0 =
        gen::operator_norm(g, gen::GroupOp{0.0}, n, gen::NormMethod::MatrixFree).value;
    ck.require(g0 == 1.0, "k=" + std::to_string(k) + " g(0)=" + num(g0) + " not exactly 1");

    const auto scan = lab::group_growth_scan(g, t_grid, n, scan_opts());
    const double g1 = scan.values[0], g10 = scan.values[9], g100 = scan.values[99];
    ck.require(g1 < g10 && g10 < g100, "k=" + std::to_string(k) + " not strictly increasing " +
                                           num(g1) + "," + num(g10) + "," + num(g100));
    ck.require(scan.fitted_slope <= k + 0.1, "k=" + std::to_string(k) + " slope " +
                                                 num(scan.fitted_slope) + " above " +
                                                 num(k + 0.1));
    const double omega = std::abs(std::log(g100)) / 100.0;
    ck.require(omega <= 0.05,
               "k=" + std::to_string(k) + " |log g(100)|/100 = " + num(omega) + " above 0.05");
    out.detail += " k" + std::to_string(k) + ": slope=" + num(scan.fitted_slope) +
                  " g(100)=" + num(g100) + " omega_hat=" + num(omega);
  }
  return out;
}

// ---------------------------------------------------------------- 7
Outcome criterion_non_basis() {
  Outcome out;
  Check ck{out};

  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::size_t> pick(2, 400);
  double min_block_norm = 1e300;
  for (int k : {1, 2}) {
    SpaceConfig cfg{k, 2.0, BasisModel{}};
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t a = pick(rng), b = pick(rng);
      if (a > b) std::swap(a, b);
      const std::size_t n = 512;
      if (b + static_cast<std::size_t>(k) >= n) continue;
      min_block_norm = std::min(min_block_norm, space_norm(cfg, block_vector(a, b, n)));
    }
  }
  ck.require(min_block_norm >= 1.0 - 1e-12, "block norm " + num(min_block_norm) + " below 1");

  SpaceConfig cfg{1, 2.0, BasisModel{}};
  double worst_oracle = 0.0, worst_law = 0.0;
  for (std::size_t m = 1; m <= 64; ++m) {
    const std::size_t n = 2 * m;
    const auto scan =
        lab::partial_sum_projection_norms(cfg, lab::Grouping::singletons(n), n, scan_opts(), m);
    const double iterated = scan.values[m - 1];
    std::vector<Complex> mask(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < m; ++j) mask[j] = 1.0;
    const double oracle = dense::largest_singular_value(gen::conjugated_matrix(mask, 1));
    const double law = std::sqrt(static_cast<double>(m + 1));
    worst_oracle = std::max(worst_oracle, std::abs(iterated - oracle));
    worst_law = std::max(worst_law, std::abs(oracle - law));
  }
  ck.require(worst_oracle <= 1e-9, "matrix-free vs dense SVD gap " + num(worst_oracle));
  ck.require(worst_law <= 1e-9, "dense SVD vs sqrt(M+1) gap " + num(worst_law));
  out.detail = "min_block_norm=" + num(min_block_norm) + " max_svd_gap=" + num(worst_oracle) +
               " max_law_gap=" + num(worst_law) + out.detail;
  return out;
}

// ---------------------------------------------------------------- 8
Outcome criterion_minimality() {
  Outcome out;
  Check ck{out};
  SpaceConfig cfg{1, 2.0, BasisModel{}};

  double worst_dev = 0.0;
  for (std::size_t n = 4; n <= 100; ++n) {
    const double d = minimality_distance(cfg, n, 2000);
    worst_dev = std::max(worst_dev, std::abs(d * std::sqrt(static_cast<double>(n)) - 1.0));
  }
  ck.require(worst_dev <= 0.2, "deviation from 1/sqrt(n) " + num(worst_dev));

  double min_dist = 1e300;
  for (std::size_t n = 1; n <= 1000; ++n) {
    min_dist = std::min(min_dist, minimality_distance(cfg, n, 2000));
  }
  ck.require(min_dist <= 0.05, "min distance " + num(min_dist) + " above 0.05");

  // dense least-squares oracle at a moderate truncation
  double worst_ls = 0.0;
  const std::size_t n_oracle = 256;
  for (std::size_t n : {4, 16, 64}) {
    DenseMatrix a(n_oracle, n_oracle - 1);
    std::vector<Complex> target;
    std::size_t col = 0;
    for (std::size_t j = 1; j <= n_oracle; ++j) {
      CoeffVec e(n_oracle, Complex(0.0, 0.0));
      e[j - 1] = 1.0;
      const CoeffVec d = diffseq::diff_apply(1, e);
      if (j == n) {
        target.assign(d.begin(), d.end());
      } else {
        for (std::size_t i = 0; i < n_oracle; ++i) a.at(i, col) = d[i];
        ++col;
      }
    }
    const double ls = dense::least_squares_residual(a, target);
    worst_ls = std::max(worst_ls, std::abs(ls - minimality_distance(cfg, n, n_oracle)));
  }
  ck.require(worst_ls <= 1e-9, "least-squares oracle gap " + num(worst_ls));
  out.detail = "max_dev=" + num(worst_dev) + " min_dist=" + num(min_dist) +
               " ls_gap=" + num(worst_ls) + out.detail;
  return out;
}

// ---------------------------------------------------------------- 9
Outcome criterion_spectral_mapping() {
  Outcome out;
  Check ck{out};
  double worst = 0.0;
  for (int k : {1, 2}) {
    auto g = log_config(k, 128);
    for (double t : {1.0, std::numbers::pi, 10.0}) {
      const auto scan = lab::spectrum_map_check(g, t, 128);
      for (double e : scan.values) worst = std::max(worst, e);
      for (double e : *scan.extra("reverse_err")) worst = std::max(worst, e);
    }
  }
  ck.require(worst <= 1e-8, "eigenvalue matching error " + num(worst));
  out.detail = "max_match_error=" + num(worst) + out.detail;
  return out;
}

// ---------------------------------------------------------------- 10
Outcome criterion_laplace() {
  Outcome out;
  Check ck{out};
  const std::size_t n = 8;
  auto g = log_config(1, n);
  const Complex lambda(1.0, 0.0);
  CoeffVec c(n, Complex(0.0, 0.0));
  c[0] = 1.0;
  const double horizon = 40.0;

  const CoeffVec quad = gen::laplace_resolvent(g, lambda, c, horizon, 200000);
  const CoeffVec res = gen::resolvent_apply(g, lambda, c);
  CoeffVec sum(n);
  for (std::size_t i = 0; i < n; ++i) sum[i] = quad[i] + res[i];
  const double residual = space_norm(g.space, sum);
  const double bound = 10.0 * std::exp(-horizon) * std::pow(1.0 + horizon, 1.0);
  ck.require(residual <= bound,
             "residual " + num(residual) + " above tail bound " + num(bound));

  const double comp1 = std::abs(quad[0] - 1.0 / (lambda - Complex(0.0, g.symbol(1))));
  ck.require(comp1 <= 1e-6, "component-1 quadrature error " + num(comp1));
  out.detail = "residual=" + num(residual) + " tail_bound=" + num(bound) +
               " comp1_err=" + num(comp1) + out.detail;
  return out;
}

// ---------------------------------------------------------------- 11
Outcome criterion_nongeneration() {
  Outcome out;
  Check ck{out};
  const std::vector<std::size_t> grid{64, 256, 1024, 4096};

  const auto witness = lab::nongeneration_witness(grid, 1.0, scan_opts());
  bool increasing = true;
  for (std::size_t i = 1; i < witness.values.size(); ++i) {
    increasing = increasing && witness.values[i] > witness.values[i - 1];
  }
  ck.require(increasing, "witness values not strictly increasing");
  ck.require(witness.fitted_slope > 0.0, "witness slope " + num(witness.fitted_slope));

  auto control = log_config(1, 4096);
  const auto stable = lab::truncation_norm_scan(control, gen::GroupOp{1.0}, grid, scan_opts());
  const auto& v = stable.values;
  const double control_dev = std::abs(v[3] - v[2]) / v[3];
  ck.require(control_dev <= 0.05, "control deviation " + num(control_dev) + " above 5%");
  out.detail = "witness_slope=" + num(witness.fitted_slope) + " g4096=" + num(witness.values[3]) +
               " control_dev=" + num(control_dev) + out.detail;
  return out;
}

// ---------------------------------------------------------------- 12
Outcome criterion_vertical_integrals() {
  Outcome out;
  Check ck{out};
  const std::size_t n = 2048;
  auto g = log_config(1, n);
  CoeffVec e1(n, Complex(0.0, 0.0));
  e1[0] = 1.0;
  const RealVec a_grid{0.1, 0.2, 0.4, 0.8};
  const auto scan = lab::vertical_integral_scan(g, a_grid, e1, e1, 0.0, n, {}, kThreads);

  for (const char* name : {"Q1", "Q2"}) {
    const RealVec& q = *scan.extra(name);
    const double spread = *std::max_element(q.begin(), q.end()) /
                          *std::min_element(q.begin(), q.end());
    ck.require(spread < 10.0, std::string(name) + " spread " + num(spread) + " not below 10x");
    out.detail += std::string(" ") + name + "_spread=" + num(spread) +
                  " max_" + name + "=" + num(*std::max_element(q.begin(), q.end()));
  }
  return out;
}

// ---------------------------------------------------------------- 13
Outcome criterion_monotone_truncations() {
  Outcome out;
  Check ck{out};
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> tpick(0.5, 20.0);
  std::uniform_real_distribution<double> apick(0.05, 2.0);
  std::uniform_int_distribution<int> kpick(1, 3);
  const std::vector<std::size_t> grid{64, 128, 256, 512};
  int bad = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = kpick(rng);
    const bool ilog = trial % 3 == 0;
    gen::GeneratorConfig g{SpaceConfig{k, 2.0, BasisModel{}},
                           ilog ? Symbol::iterated_log(512) : Symbol::log_symbol(512)};
    gen::OperatorKind kind;
    if (trial % 2 == 0) {
      kind = gen::GroupOp{tpick(rng)};
    } else {
      kind = gen::ResolventOp{Complex(apick(rng), g.symbol(1 + trial * 20))};
    }
    const auto scan = lab::truncation_norm_scan(g, kind, grid, scan_opts(900 + trial));
    if (!scan.monotone_flag) ++bad;
  }
  ck.require(bad == 0, std::to_string(bad) + " configurations broke monotonicity");
  out.detail = "configs=20 violations=" + std::to_string(bad) + out.detail;
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> fn;
};

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "hardy-inequality", criterion_hardy},
      {2, "resolvent-identity", criterion_resolvent_identity},
      {3, "spectral-lower-bound", criterion_spectral_lower_bound},
      {4, "closed-form-resolvent-bound", criterion_closed_form_bound},
      {5, "blowup-exponent", criterion_blowup_exponent},
      {6, "polynomial-group-growth", criterion_group_growth},
      {7, "non-basis-quantification", criterion_non_basis},
      {8, "uniform-minimality-failure", criterion_minimality},
      {9, "weak-spectral-mapping", criterion_spectral_mapping},
      {10, "laplace-reconstruction", criterion_laplace},
      {11, "non-generation-witness", criterion_nongeneration},
      {12, "vertical-integral-scaling", criterion_vertical_integrals},
      {13, "monotone-truncation-meta", criterion_monotone_truncations},
  };

  int only = 0;
  if (argc > 1) {
    const std::string arg = argv[1];
    if (arg == "--list") {
      for (const auto& c : criteria) std::printf("%02d %s\n", c.id, c.name);
      return 0;
    }
    only = std::atoi(arg.c_str());
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %02d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
