#include "hklab/dense.hpp"

#include <Eigen/Dense>

namespace hklab::dense {

namespace {

Eigen::MatrixXcd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.at(i, j);
  return m;
}

Eigen::VectorXcd to_eigen(std::span<const Complex> v) {
  Eigen::VectorXcd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x;
}

} // namespace

double largest_singular_value(const DenseMatrix& a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  return svd.singularValues()(0);
}

RealVec singular_values(const DenseMatrix& a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return RealVec(s.data(), s.data() + s.size());
}

std::vector<Complex> eigenvalues(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("eigenvalues: matrix must be square");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("eigenvalues: dense eigensolver did not converge");
  }
  const auto& ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

double least_squares_residual(const DenseMatrix& a, std::span<const Complex> b) {
  if (a.rows() != b.size()) throw DimensionMismatch("least_squares_residual: size mismatch");
  Eigen::MatrixXcd m = to_eigen(a);
  Eigen::VectorXcd rhs = to_eigen(b);
  Eigen::VectorXcd x = m.colPivHouseholderQr().solve(rhs);
  return (m * x - rhs).norm();
}

std::vector<Complex> solve(const DenseMatrix& a, std::span<const Complex> b) {
  if (a.rows() != a.cols()) throw DimensionMismatch("solve: matrix must be square");
  if (a.rows() != b.size()) throw DimensionMismatch("solve: size mismatch");
  Eigen::MatrixXcd m = to_eigen(a);
  Eigen::VectorXcd x = m.partialPivLu().solve(to_eigen(b));
  return std::vector<Complex>(x.data(), x.data() + x.size());
}

} // namespace hklab::dense
