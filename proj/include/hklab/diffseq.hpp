#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "hklab/errors.hpp"
#include "hklab/types.hpp"

namespace hklab::diffseq {

/// Exact binomial coefficient C(k, m). Exactness in 64-bit integers is
/// guaranteed up to k = 62; larger k throws OutOfRange.
std::int64_t binom(int k, int m);

// In-place kernels for the banded difference operator and its inverse.
// All four cost O(N) per pass and are the building blocks of every
// operator evaluation in the library.

/// v_n <- v_n - v_{n-1}  (v_0 = 0): one application of the difference map.
void difference_inplace(std::span<Complex> v);

/// v_n <- v_1 + ... + v_n: inverse of difference_inplace (prefix sums).
void cumsum_inplace(std::span<Complex> v);

/// v_n <- v_n - v_{n+1} (v_{N+1} = 0): adjoint of difference_inplace.
void adjoint_difference_inplace(std::span<Complex> v);

/// v_n <- v_n + ... + v_N: adjoint of cumsum_inplace (suffix sums).
void suffix_sum_inplace(std::span<Complex> v);

/// k-th backward difference of a coefficient sequence:
///   d_n = sum_{j=0..k} (-1)^j C(k,j) c_{n-j},   c_m = 0 for m < 1,
/// returned with the same length N.
CoeffVec diff_apply(int k, const CoeffVec& c);

/// Exact inverse of diff_apply: k repeated prefix sums.
CoeffVec diff_inverse(int k, const CoeffVec& d);

/// Truncated Hardy quotient
///   [sum_{n<=N} ((1/n) sum_{j<=n} a_j)^p] / [sum_{n<=N} a_n^p]
/// for a nonnegative sequence a, p > 1. Always strictly below
/// (p/(p-1))^p. Throws ZeroSequence when every a_n = 0.
double hardy_ratio(double p, std::span<const double> a);

/// The best-possible constant (p/(p-1))^p of the Hardy inequality.
double hardy_constant(double p);

enum class SymbolKind { Log, IteratedLog, SqrtWitness, Tabulated };

/// The eigenvalue-generating sequence f(1), f(2), ... materialised on a
/// finite window 1..N_max. f(n) is real and finite on the window.
class Symbol {
public:
  /// f(n) = ln n (so f(1) = 0).
  static Symbol log_symbol(std::size_t n_max);
  /// f(n) = ln(1 + ln n): slower growth, still admissible for every order.
  static Symbol iterated_log(std::size_t n_max);
  /// f(n) = sqrt(n): grows too fast for the order-1 admissibility test;
  /// kept as the designated counterexample input.
  static Symbol sqrt_witness(std::size_t n_max);
  /// Arbitrary finite table of values, f(i) = values[i-1].
  static Symbol tabulated(RealVec values);
  /// Load a tabulated symbol: one real per line, line i holds f(i).
  /// Malformed lines raise ParseError with the line number.
  static Symbol from_file(const std::string& path);

  /// f(n), 1-based; OutOfRange outside [1, size()].
  double operator()(std::size_t n) const;

  std::size_t size() const { return values_.size(); }
  SymbolKind kind() const { return kind_; }
  std::span<const double> values() const { return values_; }
  std::string kind_name() const;

private:
  Symbol(SymbolKind kind, RealVec values);

  SymbolKind kind_;
  RealVec values_;
};

/// Window diagnostics for membership of f in the order-k admissible class:
/// per_j_sup[j-1] = sup over j+1 <= n <= N of n^j |Delta^j f(n)|, where
/// Delta^j is the j-th backward difference. per_j_sup[0] is the constant
/// C = sup n |Delta f(n)| used by the closed-form resolvent bound.
struct SkReport {
  int k = 0;
  std::size_t window = 0;
  RealVec per_j_sup;                 // indexed by j-1, 1 <= j <= k
  std::vector<std::size_t> argmax_n; // position attaining each sup (0 if none)
  /// True when some running sup still improved in the last decade of the
  /// window, i.e. the finite prefix gives no evidence of boundedness.
  bool unbounded_flag = false;
  /// Prefix heuristic for f(n) -> +infinity: the running max of f sits in
  /// the last decade and exceeds f(1).
  bool tends_to_infinity_flag = false;
};

/// Scan n^j |Delta^j f(n)| for 1 <= j <= k over the window 2..N (each j
/// starts at n = j+1 so that every argument of f is >= 1).
SkReport sk_diagnostics(const Symbol& f, int k, std::size_t window);

} // namespace hklab::diffseq
