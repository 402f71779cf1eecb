#include "hklab/hkspace.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hklab/dense.hpp"

namespace hklab {

using diffseq::binom;
using diffseq::diff_apply;

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> row;
    double x;
    while (ss >> x) row.push_back(x);
    if (!ss.eof()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected real values");
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no rows");
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw ParseError(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected a square " +
                       std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
  }
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  return m;
}

void BasisModel::validate() const {
  if (!(riesz_lower > 0.0) || !(riesz_upper >= riesz_lower)) {
    throw OutOfRange("BasisModel: need 0 < m <= M");
  }
  if (!transform && (riesz_lower != 1.0 || riesz_upper != 1.0)) {
    throw OutOfRange("BasisModel: orthonormal model (no transform) fixes m = M = 1");
  }
  if (transform && transform->rows() != transform->cols()) {
    throw DimensionMismatch("BasisModel: transform must be square");
  }
}

void SpaceConfig::validate() const {
  if (k < 1) throw OutOfRange("SpaceConfig: order k must be >= 1");
  if (!(p >= 1.0)) throw OutOfRange("SpaceConfig: need p >= 1");
  basis.validate();
}

namespace {

double p_norm(std::span<const Complex> v, double p) {
  if (p == 2.0) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
  }
  double s = 0.0;
  for (const Complex& z : v) s += std::pow(std::abs(z), p);
  return std::pow(s, 1.0 / p);
}

CoeffVec apply_transform(const DenseMatrix& t, const CoeffVec& d) {
  if (t.rows() != d.size()) {
    throw DimensionMismatch("basis transform is " + std::to_string(t.rows()) + "x" +
                            std::to_string(t.cols()) + " but the vector has length " +
                            std::to_string(d.size()));
  }
  CoeffVec y(t.rows(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < t.cols(); ++j) acc += t.at(i, j) * d[j];
    y[i] = acc;
  }
  return y;
}

} // namespace

double space_norm(const SpaceConfig& cfg, const CoeffVec& c) {
  cfg.validate();
  if (c.empty()) throw OutOfRange("space_norm: empty coefficient vector");
  CoeffVec d = diff_apply(cfg.k, c);
  if (cfg.basis.transform) d = apply_transform(*cfg.basis.transform, d);
  return p_norm(d, cfg.p);
}

Complex space_inner(const SpaceConfig& cfg, const CoeffVec& u, const CoeffVec& v) {
  cfg.validate();
  if (cfg.p != 2.0) throw Unsupported("space_inner: inner product requires p = 2");
  if (u.size() != v.size()) throw DimensionMismatch("space_inner: length mismatch");
  CoeffVec du = diff_apply(cfg.k, u);
  CoeffVec dv = diff_apply(cfg.k, v);
  if (cfg.basis.transform) {
    du = apply_transform(*cfg.basis.transform, du);
    dv = apply_transform(*cfg.basis.transform, dv);
  }
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < du.size(); ++i) acc += std::conj(dv[i]) * du[i];
  return acc;
}

CoeffVec block_vector(std::size_t a, std::size_t b, std::size_t n) {
  if (a < 1 || a > b || b > n) {
    throw OutOfRange("block_vector: need 1 <= a <= b <= N");
  }
  CoeffVec c(n, Complex(0.0, 0.0));
  for (std::size_t j = a; j <= b; ++j) c[j - 1] = 1.0;
  return c;
}

double minimality_distance(const SpaceConfig& cfg, std::size_t n, std::size_t N) {
  cfg.validate();
  if (cfg.p != 2.0) throw Unsupported("minimality_distance: requires p = 2");
  if (n < 1 || n > N) throw OutOfRange("minimality_distance: need 1 <= n <= N");

  if (!cfg.basis.transform) {
    // Orthonormal model. In difference coordinates the basis vectors are
    // the columns of the banded lower-triangular power of the difference
    // matrix; the least-squares distance from column n to the span of the
    // others is 1/||g||, where g is the n-th dual row (row n of the k-fold
    // prefix-sum matrix). That row has entries C(k-1+n-j, k-1), j <= n,
    // independent of N.
    const int k = cfg.k;
    long double sumsq = 0.0L;
    // entry at column j: C(k-1 + (n-j), k-1); build iteratively from j=n down.
    long double entry = 1.0L; // j = n: C(k-1, k-1) = 1
    for (std::size_t offset = 0;; ++offset) {
      sumsq += entry * entry;
      if (offset + 1 >= n) break;
      // next offset: multiply by (k-1+offset+1)/(offset+1)
      entry = entry * static_cast<long double>(k + static_cast<long long>(offset)) /
              static_cast<long double>(offset + 1);
    }
    return static_cast<double>(1.0L / std::sqrt(sumsq));
  }

  // General transform: honest dense least-squares in the transformed
  // difference coordinates (kept to moderate sizes).
  if (N > 2048) {
    throw Unsupported("minimality_distance: transform model limited to N <= 2048");
  }
  const DenseMatrix& t = *cfg.basis.transform;
  if (t.rows() != N) {
    throw DimensionMismatch("minimality_distance: transform size does not match N");
  }
  // columns of T * L^k for j != n; target column n
  DenseMatrix a(N, N - 1);
  std::vector<Complex> target(N, Complex(0.0, 0.0));
  std::size_t col_out = 0;
  for (std::size_t j = 1; j <= N; ++j) {
    CoeffVec e(N, Complex(0.0, 0.0));
    e[j - 1] = 1.0;
    CoeffVec d = diff_apply(cfg.k, e);
    CoeffVec y = apply_transform(t, d);
    if (j == n) {
      target = y;
    } else {
      for (std::size_t i = 0; i < N; ++i) a.at(i, col_out) = y[i];
      ++col_out;
    }
  }
  return dense::least_squares_residual(a, target);
}

} // namespace hklab
