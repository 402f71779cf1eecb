#pragma once

#include <optional>
#include <span>
#include <string>

#include "hklab/diffseq.hpp"
#include "hklab/errors.hpp"
#include "hklab/types.hpp"

namespace hklab {

/// Dense row-major complex matrix. Small utility type shared by the basis
/// transform, truncated operator assembly and the dense oracles.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static DenseMatrix identity(std::size_t n);

  /// Load a dense square matrix from a whitespace-separated text file
  /// (row-major, real entries). Non-square content is rejected.
  static DenseMatrix from_file(const std::string& path);

  Complex& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> data_;
};

/// Riesz-basis model of the underlying basis {e_n}: two-sided frame
/// constants 0 < m <= M plus an optional invertible coordinate transform.
/// Absent transform means the orthonormal model and forces m = M = 1.
struct BasisModel {
  double riesz_lower = 1.0; // m
  double riesz_upper = 1.0; // M
  std::optional<DenseMatrix> transform;

  void validate() const;
};

/// Configuration of the sequence space: difference order k >= 1 and
/// exponent p >= 1. p = 2 selects the Hilbert-space model; any other p
/// selects the Banach-space model (norm-only support).
struct SpaceConfig {
  int k = 1;
  double p = 2.0;
  BasisModel basis;

  void validate() const;
};

/// Norm of a truncated element: p-norm of transform * Delta^k c (plain
/// p-norm of the k-th differences in the orthonormal model). A truncated
/// vector of length N stands for the series with c_n = 0 beyond N, and
/// the value is the norm of that restriction; restrictions increase
/// monotonically to the full norm as N grows.
double space_norm(const SpaceConfig& cfg, const CoeffVec& c);

/// Inner product matching space_norm for p = 2; Unsupported otherwise.
Complex space_inner(const SpaceConfig& cfg, const CoeffVec& u, const CoeffVec& v);

/// Indicator coefficient vector of the index block [a, b] inside 1..n.
CoeffVec block_vector(std::size_t a, std::size_t b, std::size_t n);

/// Distance from e_n to the linear span of the remaining basis vectors
/// e_j, j <= N, j != n, measured in the order-k norm (p = 2 only).
/// Solved as a least-squares problem in the isometric difference
/// coordinates; with the orthonormal model the minimiser is obtained in
/// closed form from the dual functional, giving exactly 1/sqrt(n) for
/// k = 1. The value never increases as N grows.
double minimality_distance(const SpaceConfig& cfg, std::size_t n, std::size_t N);

} // namespace hklab
