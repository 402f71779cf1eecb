#include "hklab/diffseq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace hklab::diffseq {

namespace {
constexpr int kBinomExactCap = 62;
} // namespace

std::int64_t binom(int k, int m) {
  if (k < 0 || m < 0 || m > k) {
    throw OutOfRange("binom: need 0 <= m <= k, got k=" + std::to_string(k) +
                     " m=" + std::to_string(m));
  }
  if (k > kBinomExactCap) {
    throw OutOfRange("binom: k=" + std::to_string(k) +
                     " exceeds the 64-bit exactness cap " +
                     std::to_string(kBinomExactCap));
  }
  // Pascal row: additions only, every intermediate fits in 64 bits for k<=62.
  std::vector<std::int64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= k; ++i) {
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  }
  return row[static_cast<std::size_t>(m)];
}

void difference_inplace(std::span<Complex> v) {
  for (std::size_t n = v.size(); n-- > 1;) v[n] -= v[n - 1];
}

void cumsum_inplace(std::span<Complex> v) {
  for (std::size_t n = 1; n < v.size(); ++n) v[n] += v[n - 1];
}

void adjoint_difference_inplace(std::span<Complex> v) {
  for (std::size_t n = 0; n + 1 < v.size(); ++n) v[n] -= v[n + 1];
}

void suffix_sum_inplace(std::span<Complex> v) {
  for (std::size_t n = v.size(); n-- > 1;) v[n - 1] += v[n];
}

CoeffVec diff_apply(int k, const CoeffVec& c) {
  if (k < 1) throw OutOfRange("diff_apply: order k must be >= 1");
  if (c.empty()) throw OutOfRange("diff_apply: empty coefficient vector");
  CoeffVec d = c;
  for (int pass = 0; pass < k; ++pass) difference_inplace(d);
  return d;
}

CoeffVec diff_inverse(int k, const CoeffVec& d) {
  if (k < 1) throw OutOfRange("diff_inverse: order k must be >= 1");
  if (d.empty()) throw OutOfRange("diff_inverse: empty coefficient vector");
  CoeffVec c = d;
  for (int pass = 0; pass < k; ++pass) cumsum_inplace(c);
  return c;
}

double hardy_constant(double p) {
  if (p <= 1.0) throw OutOfRange("hardy_constant: need p > 1");
  return std::pow(p / (p - 1.0), p);
}

double hardy_ratio(double p, std::span<const double> a) {
  if (p <= 1.0) throw OutOfRange("hardy_ratio: need p > 1");
  if (a.empty()) throw OutOfRange("hardy_ratio: empty sequence");
  bool any_positive = false;
  for (double x : a) {
    if (x < 0.0 || !std::isfinite(x)) {
      throw OutOfRange("hardy_ratio: entries must be finite and nonnegative");
    }
    any_positive = any_positive || x > 0.0;
  }
  if (!any_positive) throw ZeroSequence("hardy_ratio: all entries are zero");

  long double prefix = 0.0L, num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    prefix += a[i];
    const long double avg = prefix / static_cast<long double>(i + 1);
    num += std::pow(static_cast<double>(avg), p);
    den += std::pow(a[i], p);
  }
  return static_cast<double>(num / den);
}

Symbol::Symbol(SymbolKind kind, RealVec values) : kind_(kind), values_(std::move(values)) {
  if (values_.empty()) throw OutOfRange("Symbol: window must contain n = 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw OutOfRange("Symbol: f(" + std::to_string(i + 1) + ") is not finite");
    }
  }
}

Symbol Symbol::log_symbol(std::size_t n_max) {
  RealVec v(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) v[n - 1] = std::log(static_cast<double>(n));
  return Symbol(SymbolKind::Log, std::move(v));
}

Symbol Symbol::iterated_log(std::size_t n_max) {
  RealVec v(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    v[n - 1] = std::log(1.0 + std::log(static_cast<double>(n)));
  }
  return Symbol(SymbolKind::IteratedLog, std::move(v));
}

Symbol Symbol::sqrt_witness(std::size_t n_max) {
  RealVec v(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) v[n - 1] = std::sqrt(static_cast<double>(n));
  return Symbol(SymbolKind::SqrtWitness, std::move(v));
}

Symbol Symbol::tabulated(RealVec values) {
  return Symbol(SymbolKind::Tabulated, std::move(values));
}

Symbol Symbol::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open symbol table: " + path);
  RealVec values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // allow blank lines and '#' comments
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double x;
    if (!(ss >> x)) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected one real value");
    }
    std::string rest;
    if (ss >> rest) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": trailing content '" + rest + "'");
    }
    values.push_back(x);
  }
  if (values.empty()) throw ParseError(path + ": no values");
  return Symbol(SymbolKind::Tabulated, std::move(values));
}

double Symbol::operator()(std::size_t n) const {
  if (n < 1 || n > values_.size()) {
    throw OutOfRange("Symbol: n=" + std::to_string(n) + " outside window [1, " +
                     std::to_string(values_.size()) + "]");
  }
  return values_[n - 1];
}

std::string Symbol::kind_name() const {
  switch (kind_) {
    case SymbolKind::Log: return "log";
    case SymbolKind::IteratedLog: return "iterated-log";
    case SymbolKind::SqrtWitness: return "sqrt-witness";
    case SymbolKind::Tabulated: return "tabulated";
  }
  return "?";
}

SkReport sk_diagnostics(const Symbol& f, int k, std::size_t window) {
  if (k < 1) throw OutOfRange("sk_diagnostics: order k must be >= 1");
  if (window < 2) throw OutOfRange("sk_diagnostics: window must reach n = 2");
  if (window > f.size()) {
    throw OutOfRange("sk_diagnostics: window " + std::to_string(window) +
                     " exceeds symbol table size " + std::to_string(f.size()));
  }

  SkReport report;
  report.k = k;
  report.window = window;
  report.per_j_sup.assign(static_cast<std::size_t>(k), 0.0);
  report.argmax_n.assign(static_cast<std::size_t>(k), 0);

  const auto vals = f.values();
  const std::size_t decade_start = window - window / 10; // last decade of the window
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int j = 1; j <= k; ++j) {
    std::vector<double> coeff(static_cast<std::size_t>(j) + 1);
    double coeff_sum = 0.0;
    for (int i = 0; i <= j; ++i) {
      coeff[static_cast<std::size_t>(i)] =
          (i % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(binom(j, i));
      coeff_sum += static_cast<double>(binom(j, i));
    }
    double sup = 0.0;
    std::size_t arg = 0;
    for (std::size_t n = static_cast<std::size_t>(j) + 1; n <= window; ++n) {
      double dj = 0.0;
      double magnitude = 0.0;
      for (int i = 0; i <= j; ++i) {
        const double fi = vals[n - 1 - static_cast<std::size_t>(i)];
        dj += coeff[static_cast<std::size_t>(i)] * fi;
        magnitude = std::max(magnitude, std::abs(fi));
      }
      const double weight = std::pow(static_cast<double>(n), j);
      // cancellation floor of the alternating sum over tabulated doubles;
      // differences below it carry no signal and would otherwise fake a
      // rising sup at the far end of the window
      const double noise = coeff_sum * eps * magnitude;
      if (std::abs(dj) < 2.0 * noise) continue;
      const double weighted = weight * std::abs(dj);
      if (weighted > sup) {
        sup = weighted;
        arg = n;
      }
    }
    report.per_j_sup[static_cast<std::size_t>(j) - 1] = sup;
    report.argmax_n[static_cast<std::size_t>(j) - 1] = arg;
    if (arg >= decade_start && arg > 0) report.unbounded_flag = true;
  }

  double fmax = vals[0];
  std::size_t fargmax = 1;
  for (std::size_t n = 2; n <= window; ++n) {
    if (vals[n - 1] > fmax) {
      fmax = vals[n - 1];
      fargmax = n;
    }
  }
  report.tends_to_infinity_flag = fargmax >= decade_start && fmax > vals[0];
  return report;
}

} // namespace hklab::diffseq
