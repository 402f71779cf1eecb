#include "hklab/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hklab/dense.hpp"

namespace hklab::gen {

using diffseq::adjoint_difference_inplace;
using diffseq::cumsum_inplace;
using diffseq::difference_inplace;
using diffseq::suffix_sum_inplace;

namespace {
constexpr double kSpectrumEps = 1e-14;
} // namespace

void GeneratorConfig::validate() const {
  space.validate();
}

void GeneratorConfig::require_window(std::size_t n) const {
  if (n < 1) throw OutOfRange("truncation must be >= 1");
  if (symbol.size() < n) {
    throw OutOfRange("symbol window " + std::to_string(symbol.size()) +
                     " does not cover truncation " + std::to_string(n));
  }
}

SpectrumView spectrum(const GeneratorConfig& g, std::size_t n) {
  g.validate();
  g.require_window(n);
  SpectrumView view;
  view.truncation = n;
  view.eigenvalues.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) view.eigenvalues.emplace_back(0.0, g.symbol(i));
  return view;
}

std::string kind_name(const OperatorKind& kind) {
  if (std::holds_alternative<GeneratorOp>(kind)) return "generator";
  if (const auto* grp = std::get_if<GroupOp>(&kind)) return "group(t=" + std::to_string(grp->t) + ")";
  const auto& res = std::get<ResolventOp>(kind);
  return "resolvent(lambda=" + std::to_string(res.lambda.real()) + "+" +
         std::to_string(res.lambda.imag()) + "i)";
}

std::vector<Complex> multipliers(const GeneratorConfig& g, const OperatorKind& kind,
                                 std::size_t n) {
  g.validate();
  g.require_window(n);
  std::vector<Complex> sigma(n);
  if (std::holds_alternative<GeneratorOp>(kind)) {
    for (std::size_t i = 1; i <= n; ++i) sigma[i - 1] = Complex(0.0, g.symbol(i));
  } else if (const auto* grp = std::get_if<GroupOp>(&kind)) {
    for (std::size_t i = 1; i <= n; ++i) sigma[i - 1] = std::polar(1.0, grp->t * g.symbol(i));
  } else {
    const Complex lambda = std::get<ResolventOp>(kind).lambda;
    for (std::size_t i = 1; i <= n; ++i) {
      const Complex denom = Complex(0.0, g.symbol(i)) - lambda;
      if (std::abs(denom) <= kSpectrumEps) {
        throw SpectrumPoint("lambda coincides with eigenvalue i f(" + std::to_string(i) + ")");
      }
      sigma[i - 1] = 1.0 / denom;
    }
  }
  return sigma;
}

CoeffVec apply_generator(const GeneratorConfig& g, const CoeffVec& c) {
  g.validate();
  if (c.empty()) throw DimensionMismatch("apply_generator: empty vector");
  if (g.symbol.size() < c.size()) {
    throw DimensionMismatch("apply_generator: symbol window shorter than the vector");
  }
  CoeffVec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = Complex(0.0, g.symbol(i + 1)) * c[i];
  return out;
}

CoeffVec group_apply(const GeneratorConfig& g, double t, const CoeffVec& c) {
  g.validate();
  if (c.empty()) throw DimensionMismatch("group_apply: empty vector");
  if (g.symbol.size() < c.size()) {
    throw DimensionMismatch("group_apply: symbol window shorter than the vector");
  }
  CoeffVec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = std::polar(1.0, t * g.symbol(i + 1)) * c[i];
  return out;
}

CoeffVec resolvent_apply(const GeneratorConfig& g, Complex lambda, const CoeffVec& c) {
  g.validate();
  if (c.empty()) throw DimensionMismatch("resolvent_apply: empty vector");
  if (g.symbol.size() < c.size()) {
    throw DimensionMismatch("resolvent_apply: symbol window shorter than the vector");
  }
  CoeffVec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Complex denom = Complex(0.0, g.symbol(i + 1)) - lambda;
    if (std::abs(denom) <= kSpectrumEps) {
      throw SpectrumPoint("lambda coincides with eigenvalue i f(" + std::to_string(i + 1) + ")");
    }
    out[i] = c[i] / denom;
  }
  return out;
}

double spectrum_distance(const GeneratorConfig& g, Complex lambda, std::size_t n) {
  g.validate();
  g.require_window(n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i) {
    best = std::min(best, std::abs(Complex(0.0, g.symbol(i)) - lambda));
  }
  return best;
}

double resolvent_bound_k1(double dist, double c1) {
  if (!(dist > 0.0)) throw OutOfRange("resolvent_bound_k1: need dist > 0");
  return std::sqrt(2.0) * std::sqrt(dist * dist + 4.0 * c1 * c1) / (dist * dist);
}

DenseMatrix conjugated_matrix(std::span<const Complex> sigma, int k) {
  if (k < 1) throw OutOfRange("conjugated_matrix: order k must be >= 1");
  const std::size_t n = sigma.size();
  if (n == 0) throw OutOfRange("conjugated_matrix: empty multiplier vector");

  // diag(sigma) * L^{-k}: entry (i, j) = sigma_i * C(k-1+i-j, k-1), i >= j.
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double entry = 1.0; // C(k-1, k-1) at j = i, then walk left
    for (std::size_t off = 0; off <= i; ++off) {
      m.at(i, i - off) = sigma[i] * entry;
      entry = entry * static_cast<double>(k + static_cast<long long>(off)) /
              static_cast<double>(off + 1);
    }
  }
  // apply L^k to the rows: k passes of row_i <- row_i - row_{i-1}.
  for (int pass = 0; pass < k; ++pass) {
    for (std::size_t i = n; i-- > 1;) {
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) -= m.at(i - 1, j);
    }
  }
  return m;
}

DenseMatrix truncated_matrix(const GeneratorConfig& g, const OperatorKind& kind,
                             std::size_t n) {
  g.validate();
  if (g.space.p != 2.0) throw Unsupported("truncated_matrix: requires p = 2");
  g.require_window(n);
  const std::vector<Complex> sigma = multipliers(g, kind, n);
  DenseMatrix m = conjugated_matrix(sigma, g.space.k);

  if (g.space.basis.transform) {
    const DenseMatrix& t = *g.space.basis.transform;
    if (t.rows() != n) throw DimensionMismatch("truncated_matrix: transform size != N");
    // conjugate: T * M * T^{-1}, column by column
    DenseMatrix out(n, n);
    std::vector<Complex> col(n), tmp(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Complex> unit(n, Complex(0.0, 0.0));
      unit[j] = 1.0;
      col = dense::solve(t, unit); // T^{-1} e_j
      for (std::size_t i = 0; i < n; ++i) {
        Complex acc(0.0, 0.0);
        for (std::size_t l = 0; l < n; ++l) acc += m.at(i, l) * col[l];
        tmp[i] = acc;
      }
      for (std::size_t i = 0; i < n; ++i) {
        Complex acc(0.0, 0.0);
        for (std::size_t l = 0; l < n; ++l) acc += t.at(i, l) * tmp[l];
        out.at(i, j) = acc;
      }
    }
    return out;
  }
  return m;
}

namespace {

// One application of B = L^k diag(sigma) L^{-k} (workspace reused).
void conjugated_matvec(const std::vector<Complex>& sigma, int k,
                       const std::vector<Complex>& x, std::vector<Complex>& out) {
  out = x;
  for (int pass = 0; pass < k; ++pass) cumsum_inplace(out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= sigma[i];
  for (int pass = 0; pass < k; ++pass) difference_inplace(out);
}

// One application of the adjoint B^* = L^{-k*} conj(sigma) L^{k*}.
void conjugated_matvec_adjoint(const std::vector<Complex>& sigma, int k,
                               const std::vector<Complex>& x, std::vector<Complex>& out) {
  out = x;
  for (int pass = 0; pass < k; ++pass) adjoint_difference_inplace(out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::conj(sigma[i]);
  for (int pass = 0; pass < k; ++pass) suffix_sum_inplace(out);
}

double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<Complex> random_unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = Complex(gauss(rng), gauss(rng));
  const double nrm = norm2(v);
  for (auto& z : v) z /= nrm;
  return v;
}

} // namespace

// Power iteration on the normal-equations map B*B. The running estimate
// ||B v_j|| is a Rayleigh quotient of B*B at a unit vector, hence always a
// valid lower bound on the norm, and it is nondecreasing in j.
NormResult conjugated_norm(std::span<const Complex> sigma, int k,
                           const NormOptions& options) {
  if (k < 1) throw OutOfRange("conjugated_norm: order k must be >= 1");
  const std::size_t n = sigma.size();
  if (n == 0) throw OutOfRange("conjugated_norm: empty multiplier vector");

  NormResult result;
  result.method = NormMethod::MatrixFree;

  // Uniform multipliers make the conjugation collapse to a scalar multiple
  // of the identity; return the exact norm.
  const bool uniform = std::all_of(sigma.begin(), sigma.end(),
                                   [&](const Complex& z) { return z == sigma[0]; });
  if (uniform) {
    result.value = std::abs(sigma[0]);
    result.iterations = 0;
    return result;
  }

  const std::vector<Complex> sig(sigma.begin(), sigma.end());
  std::vector<Complex> v = random_unit_vector(n, options.seed);
  std::vector<Complex> w, u;
  double est_prev = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    conjugated_matvec(sig, k, v, w);
    const double est = norm2(w);
    if (est == 0.0) {
      result.value = 0.0;
      result.iterations = it;
      return result;
    }
    conjugated_matvec_adjoint(sig, k, w, u);
    const double nu = norm2(u);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / nu;
    if (it > 1 && std::abs(est - est_prev) <= options.tolerance * est) {
      result.value = est;
      result.iterations = it;
      return result;
    }
    est_prev = est;
  }
  throw NoConvergence("operator_norm: power iteration exceeded " +
                      std::to_string(options.max_iterations) +
                      " iterations (last estimate " + std::to_string(est_prev) + ")");
}

namespace {

// Random-probing lower bound for p != 2: max of ||B v||_p / ||v||_p over
// seeded random probes in coefficient coordinates.
NormResult probe_lower_bound(const GeneratorConfig& g, const OperatorKind& kind,
                             std::size_t n, const NormOptions& options) {
  NormResult result;
  result.method = NormMethod::MatrixFree;
  result.lower_bound_only = true;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::vector<Complex> sigma = multipliers(g, kind, n);
  double best = 0.0;
  for (int probe = 0; probe < options.probes; ++probe) {
    CoeffVec c(n);
    for (auto& z : c) z = Complex(gauss(rng), gauss(rng));
    const double denom = space_norm(g.space, c);
    CoeffVec sc(n);
    for (std::size_t i = 0; i < n; ++i) sc[i] = sigma[i] * c[i];
    const double numer = space_norm(g.space, sc);
    best = std::max(best, numer / denom);
  }
  result.value = best;
  result.iterations = options.probes;
  return result;
}

} // namespace

NormResult operator_norm(const GeneratorConfig& g, const OperatorKind& kind,
                         std::size_t n, NormMethod method, const NormOptions& options) {
  g.validate();
  g.require_window(n);

  if (g.space.p != 2.0) {
    if (method == NormMethod::DenseSvd) {
      throw Unsupported("operator_norm: dense SVD requires p = 2");
    }
    return probe_lower_bound(g, kind, n, options);
  }

  if (method == NormMethod::DenseSvd) {
    if (n > 2048) throw OutOfRange("operator_norm: dense SVD limited to N <= 2048");
    NormResult result;
    result.method = NormMethod::DenseSvd;
    result.value = dense::largest_singular_value(truncated_matrix(g, kind, n));
    return result;
  }

  if (g.space.basis.transform) {
    throw Unsupported("operator_norm: matrix-free path requires the orthonormal model");
  }
  return conjugated_norm(multipliers(g, kind, n), g.space.k, options);
}

CoeffVec laplace_resolvent(const GeneratorConfig& g, Complex lambda, const CoeffVec& c,
                           double t_horizon, std::size_t steps) {
  g.validate();
  if (!(lambda.real() > 0.0)) {
    throw OutOfRange("laplace_resolvent: requires Re lambda > 0");
  }
  if (!(t_horizon > 0.0)) throw OutOfRange("laplace_resolvent: requires T > 0");
  if (steps < 2 || steps % 2 != 0) {
    throw OutOfRange("laplace_resolvent: steps must be even and >= 2");
  }
  if (c.empty()) throw DimensionMismatch("laplace_resolvent: empty vector");
  g.require_window(c.size());

  const std::size_t n = c.size();
  const double h = t_horizon / static_cast<double>(steps);

  // Kahan-compensated componentwise Simpson sum; keeps the accumulated
  // rounding near machine precision even for step counts in the millions.
  CoeffVec sum(n, Complex(0.0, 0.0));
  CoeffVec comp(n, Complex(0.0, 0.0));
  auto accumulate = [&](const CoeffVec& term, double weight) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex y = weight * term[i] - comp[i];
      const Complex t = sum[i] + y;
      comp[i] = (t - sum[i]) - y;
      sum[i] = t;
    }
  };

  CoeffVec term(n);
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = h * static_cast<double>(j);
    const Complex damp = std::exp(-lambda * t);
    for (std::size_t i = 0; i < n; ++i) {
      term[i] = damp * std::polar(1.0, t * g.symbol(i + 1)) * c[i];
    }
    const double weight = (j == 0 || j == steps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    accumulate(term, weight);
  }
  for (std::size_t i = 0; i < n; ++i) sum[i] *= h / 3.0;
  return sum;
}

double laplace_tail_bound(const GeneratorConfig& g, Complex lambda, double t_horizon,
                          std::size_t n, const NormOptions& options) {
  const double poly = std::pow(1.0 + t_horizon, g.space.k);
  double group_norm = poly;
  if (g.space.p == 2.0 && !g.space.basis.transform) {
    group_norm = operator_norm(g, GroupOp{t_horizon}, n, NormMethod::MatrixFree, options).value;
  }
  return std::exp(-lambda.real() * t_horizon) * std::max(poly, group_norm);
}

} // namespace hklab::gen
