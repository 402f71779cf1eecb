#pragma once

#include <cstdint>
#include <variant>

#include "hklab/diffseq.hpp"
#include "hklab/hkspace.hpp"

namespace hklab::gen {

/// The laboratory's operator family: diagonal action c_n -> sigma(f(n)) c_n
/// in coefficient coordinates, studied through the order-k difference norm.
struct GeneratorConfig {
  SpaceConfig space;
  diffseq::Symbol symbol;

  void validate() const;
  /// Window check: the symbol table must cover the working truncation.
  void require_window(std::size_t n) const;
};

/// Truncated point spectrum {i f(n) : n <= N}; every value is purely
/// imaginary by construction.
struct SpectrumView {
  std::size_t truncation = 0;
  std::vector<Complex> eigenvalues;
};

SpectrumView spectrum(const GeneratorConfig& g, std::size_t n);

// The three operator kinds evaluated by the lab. Each is diagonal in
// coefficient coordinates with the multiplier shown.
struct GeneratorOp {};                  // sigma(x) = i x
struct GroupOp { double t = 0.0; };     // sigma(x) = exp(i t x)
struct ResolventOp { Complex lambda; }; // sigma(x) = 1 / (i x - lambda)
using OperatorKind = std::variant<GeneratorOp, GroupOp, ResolventOp>;

std::string kind_name(const OperatorKind& kind);

/// Diagonal multipliers sigma(f(n)), n = 1..N, for the requested kind.
/// The resolvent kind throws SpectrumPoint when lambda lies within 1e-14
/// of a truncated eigenvalue.
std::vector<Complex> multipliers(const GeneratorConfig& g, const OperatorKind& kind,
                                 std::size_t n);

/// A x: coefficientwise multiplication by i f(n).
CoeffVec apply_generator(const GeneratorConfig& g, const CoeffVec& c);

/// e^{A t} x: coefficientwise multiplication by the unimodular e^{i t f(n)}.
CoeffVec group_apply(const GeneratorConfig& g, double t, const CoeffVec& c);

/// (A - lambda)^{-1} x: coefficientwise division by i f(n) - lambda.
CoeffVec resolvent_apply(const GeneratorConfig& g, Complex lambda, const CoeffVec& c);

/// min over n <= N of |i f(n) - lambda|.
double spectrum_distance(const GeneratorConfig& g, Complex lambda, std::size_t n);

/// Closed-form bound on the truncated resolvent norm for k = 1 with the
/// orthonormal basis model:  sqrt(2) * sqrt(a^2 + 4 C^2) / a^2,  where
/// a is the distance from lambda to the truncated spectrum and
/// C = sup_{n<=N} n |Delta f(n)|.
double resolvent_bound_k1(double dist, double c1);

/// N x N matrix of the requested operator in isometric coordinates:
/// L^k * diag(sigma(f(n))) * L^{-k}, assembled from the explicit banded
/// and prefix-sum factors (p = 2 only). Its eigenvalues are exactly the
/// multiplier values, since the assembly is a similarity transform.
DenseMatrix truncated_matrix(const GeneratorConfig& g, const OperatorKind& kind,
                             std::size_t n);

/// Assembled matrix L^k diag(sigma) L^{-k} for arbitrary multipliers.
DenseMatrix conjugated_matrix(std::span<const Complex> sigma, int k);

enum class NormMethod { MatrixFree, DenseSvd };

struct NormOptions {
  std::uint64_t seed = 12345;
  double tolerance = 1e-10;  // relative change of the running estimate
  int max_iterations = 10000;
  int probes = 200;          // random probes for the p != 2 lower bound
};

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  NormMethod method = NormMethod::MatrixFree;
  /// Set when the value is only a lower bound (random probing, p != 2).
  bool lower_bound_only = false;
};

/// Largest singular value of the truncated operator in isometric
/// coordinates. The matrix-free method runs power iteration on the
/// normal-equations map, with each matvec realised as k difference passes,
/// a diagonal multiply and k prefix-sum passes (O(kN) per application);
/// it throws NoConvergence when the relative change of the estimate stays
/// above the tolerance for max_iterations. The dense method assembles the
/// truncated matrix (N <= 2048) and takes its SVD. For p != 2 the value
/// is a random-probing lower bound and is flagged as such. The value is
/// nondecreasing in N: a truncation is the restriction of the next one.
NormResult operator_norm(const GeneratorConfig& g, const OperatorKind& kind,
                         std::size_t n, NormMethod method,
                         const NormOptions& options = {});

/// Matrix-free norm of L^k diag(sigma) L^{-k} for arbitrary multipliers;
/// the primitive behind operator_norm and the projection experiments.
/// A uniform multiplier short-circuits to its exact modulus.
NormResult conjugated_norm(std::span<const Complex> sigma, int k,
                           const NormOptions& options = {});

/// Composite-Simpson quadrature of int_0^T e^{-lambda t} e^{A t} c dt on
/// `steps` equal subintervals (steps even, >= 2). Componentwise the exact
/// integral tends to c_n / (lambda - i f(n)) as T grows, i.e. to the
/// negative of resolvent_apply(lambda, c). Requires Re lambda > 0.
CoeffVec laplace_resolvent(const GeneratorConfig& g, Complex lambda, const CoeffVec& c,
                           double t_horizon, std::size_t steps);

/// Reported tail estimate for the horizon truncation of the Laplace
/// integral: e^{-Re lambda T} * max((1+T)^k, ||e^{A T}|| restricted to N).
double laplace_tail_bound(const GeneratorConfig& g, Complex lambda, double t_horizon,
                          std::size_t n, const NormOptions& options = {});

} // namespace hklab::gen
