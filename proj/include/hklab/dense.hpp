#pragma once

#include <span>

#include "hklab/hkspace.hpp"
#include "hklab/types.hpp"

// Dense linear-algebra oracles. These back the reference ("slow but
// trusted") route of every dual-route check: the matrix-free iterative
// machinery is validated against them at moderate sizes.

namespace hklab::dense {

/// Largest singular value of a dense matrix (SVD).
double largest_singular_value(const DenseMatrix& a);

/// All singular values, descending.
RealVec singular_values(const DenseMatrix& a);

/// All eigenvalues of a square dense matrix (unsymmetric solver).
std::vector<Complex> eigenvalues(const DenseMatrix& a);

/// Residual norm min_x ||A x - b|| of the dense least-squares problem.
double least_squares_residual(const DenseMatrix& a, std::span<const Complex> b);

/// Solve A x = b for a square invertible A.
std::vector<Complex> solve(const DenseMatrix& a, std::span<const Complex> b);

} // namespace hklab::dense
