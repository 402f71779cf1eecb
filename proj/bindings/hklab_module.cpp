// Python bindings for the main operations: difference calculus, space
// norms, the diagonal generator family and the experiment scans.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hklab/lab.hpp"

namespace py = pybind11;
using namespace hklab;
namespace gen = hklab::gen;
namespace lab = hklab::lab;
using diffseq::SkReport;
using diffseq::Symbol;

namespace {

SpaceConfig make_space(int k, double p) {
  SpaceConfig cfg{k, p, BasisModel{}};
  cfg.validate();
  return cfg;
}

py::dict extras_dict(const lab::ScanResult& scan) {
  py::dict d;
  for (const auto& [name, column] : scan.extras) d[name.c_str()] = column;
  return d;
}

// thin wrapper pairing a symbol with a space configuration
struct Generator {
  gen::GeneratorConfig config;

  Generator(int k, double p, const Symbol& symbol)
      : config{make_space(k, p), symbol} {}

  CoeffVec apply(const CoeffVec& c) const { return gen::apply_generator(config, c); }
  CoeffVec group(double t, const CoeffVec& c) const { return gen::group_apply(config, t, c); }
  CoeffVec resolvent(Complex lambda, const CoeffVec& c) const {
    return gen::resolvent_apply(config, lambda, c);
  }
  double distance(Complex lambda, std::size_t n) const {
    return gen::spectrum_distance(config, lambda, n);
  }
  py::tuple norm_group(double t, std::size_t n, const std::string& method,
                       std::uint64_t seed) const {
    gen::NormOptions opt;
    opt.seed = seed;
    const gen::NormResult r = gen::operator_norm(
        config, gen::GroupOp{t}, n,
        method == "dense-svd" ? gen::NormMethod::DenseSvd : gen::NormMethod::MatrixFree, opt);
    return py::make_tuple(r.value, r.iterations, r.lower_bound_only);
  }
  py::tuple norm_resolvent(Complex lambda, std::size_t n, const std::string& method,
                           std::uint64_t seed) const {
    gen::NormOptions opt;
    opt.seed = seed;
    const gen::NormResult r = gen::operator_norm(
        config, gen::ResolventOp{lambda}, n,
        method == "dense-svd" ? gen::NormMethod::DenseSvd : gen::NormMethod::MatrixFree, opt);
    return py::make_tuple(r.value, r.iterations, r.lower_bound_only);
  }
  CoeffVec laplace(Complex lambda, const CoeffVec& c, double horizon, std::size_t steps) const {
    return gen::laplace_resolvent(config, lambda, c, horizon, steps);
  }
};

} // namespace

PYBIND11_MODULE(hklab, m) {
  m.doc() = "Numerical experiments with diagonal group generators on "
            "difference-weighted sequence spaces";

  py::register_exception<OutOfRange>(m, "OutOfRangeError", PyExc_ValueError);
  py::register_exception<ZeroSequence>(m, "ZeroSequenceError", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatchError", PyExc_ValueError);
  py::register_exception<SpectrumPoint>(m, "SpectrumPointError", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "UnsupportedError", PyExc_ValueError);
  py::register_exception<NoConvergence>(m, "NoConvergenceError", PyExc_RuntimeError);
  py::register_exception<InvalidPartition>(m, "InvalidPartitionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseFileError", PyExc_ValueError);

  m.def("binom", &diffseq::binom, py::arg("k"), py::arg("m"),
        "Exact binomial coefficient C(k, m) for k <= 62");
  m.def("diff_apply", &diffseq::diff_apply, py::arg("k"), py::arg("c"),
        "k-th backward difference with zero padding on the left");
  m.def("diff_inverse", &diffseq::diff_inverse, py::arg("k"), py::arg("d"),
        "inverse of diff_apply: k repeated prefix sums");
  m.def(
      "hardy_ratio",
      [](double p, const RealVec& a) { return diffseq::hardy_ratio(p, a); },
      py::arg("p"), py::arg("a"), "truncated Hardy quotient, always below (p/(p-1))^p");
  m.def("hardy_constant", &diffseq::hardy_constant, py::arg("p"));

  py::class_<Symbol>(m, "Symbol")
      .def_static("log", &Symbol::log_symbol, py::arg("n_max"))
      .def_static("iterated_log", &Symbol::iterated_log, py::arg("n_max"))
      .def_static("sqrt_witness", &Symbol::sqrt_witness, py::arg("n_max"))
      .def_static("tabulated", &Symbol::tabulated, py::arg("values"))
      .def_static("from_file", &Symbol::from_file, py::arg("path"))
      .def("__call__", &Symbol::operator(), py::arg("n"))
      .def("__len__", &Symbol::size)
      .def_property_readonly("kind", &Symbol::kind_name);

  py::class_<SkReport>(m, "SkReport")
      .def_readonly("k", &SkReport::k)
      .def_readonly("window", &SkReport::window)
      .def_readonly("per_j_sup", &SkReport::per_j_sup)
      .def_readonly("argmax_n", &SkReport::argmax_n)
      .def_readonly("unbounded", &SkReport::unbounded_flag)
      .def_readonly("tends_to_infinity", &SkReport::tends_to_infinity_flag);

  m.def("sk_diagnostics", &diffseq::sk_diagnostics, py::arg("symbol"), py::arg("k"),
        py::arg("window"),
        "sup of n^j |Delta^j f(n)| per order j on a finite window, with heuristics");

  m.def(
      "space_norm",
      [](int k, double p, const CoeffVec& c) { return space_norm(make_space(k, p), c); },
      py::arg("k"), py::arg("p"), py::arg("c"),
      "p-norm of the k-th differences of a truncated coefficient vector");
  m.def("block_vector", &block_vector, py::arg("a"), py::arg("b"), py::arg("n"));
  m.def(
      "minimality_distance",
      [](int k, std::size_t n, std::size_t N) {
        return minimality_distance(make_space(k, 2.0), n, N);
      },
      py::arg("k"), py::arg("n"), py::arg("N"),
      "distance from e_n to the span of the other basis vectors (p = 2)");

  py::class_<lab::ScanResult>(m, "ScanResult")
      .def_readonly("grid", &lab::ScanResult::grid)
      .def_readonly("values", &lab::ScanResult::values)
      .def_readonly("fitted_slope", &lab::ScanResult::fitted_slope)
      .def_readonly("fit_residual", &lab::ScanResult::fit_residual)
      .def_readonly("monotone", &lab::ScanResult::monotone_flag)
      .def_property_readonly("extras", &extras_dict);

  py::class_<Generator>(m, "Generator")
      .def(py::init<int, double, const Symbol&>(), py::arg("k"), py::arg("p"), py::arg("symbol"))
      .def("apply", &Generator::apply, py::arg("c"))
      .def("group", &Generator::group, py::arg("t"), py::arg("c"))
      .def("resolvent", &Generator::resolvent, py::arg("lam"), py::arg("c"))
      .def("spectrum_distance", &Generator::distance, py::arg("lam"), py::arg("n"))
      .def("norm_group", &Generator::norm_group, py::arg("t"), py::arg("n"),
           py::arg("method") = "matrix-free", py::arg("seed") = 12345)
      .def("norm_resolvent", &Generator::norm_resolvent, py::arg("lam"), py::arg("n"),
           py::arg("method") = "matrix-free", py::arg("seed") = 12345)
      .def("laplace", &Generator::laplace, py::arg("lam"), py::arg("c"), py::arg("T"),
           py::arg("steps"));

  m.def(
      "blowup_scan",
      [](int k, const Symbol& symbol, std::size_t anchor, const RealVec& a_grid, std::size_t n,
         std::uint64_t seed, int threads) {
        gen::GeneratorConfig g{make_space(k, 2.0), symbol};
        lab::ScanOptions o;
        o.norm.seed = seed;
        o.threads = threads;
        return lab::resolvent_blowup_scan(g, anchor, a_grid, n, o);
      },
      py::arg("k"), py::arg("symbol"), py::arg("anchor"), py::arg("a_grid"), py::arg("n"),
      py::arg("seed") = 12345, py::arg("threads") = 1);
  m.def(
      "group_growth_scan",
      [](int k, const Symbol& symbol, const RealVec& t_grid, std::size_t n, std::uint64_t seed,
         int threads) {
        gen::GeneratorConfig g{make_space(k, 2.0), symbol};
        lab::ScanOptions o;
        o.norm.seed = seed;
        o.threads = threads;
        return lab::group_growth_scan(g, t_grid, n, o);
      },
      py::arg("k"), py::arg("symbol"), py::arg("t_grid"), py::arg("n"), py::arg("seed") = 12345,
      py::arg("threads") = 1);
  m.def(
      "partial_sum_norms",
      [](int k, std::size_t block_size, std::size_t n, std::size_t max_prefixes,
         std::uint64_t seed) {
        lab::ScanOptions o;
        o.norm.seed = seed;
        return lab::partial_sum_projection_norms(make_space(k, 2.0),
                                                 lab::Grouping::uniform(block_size, n), n, o,
                                                 max_prefixes);
      },
      py::arg("k"), py::arg("block_size"), py::arg("n"), py::arg("max_prefixes") = 0,
      py::arg("seed") = 12345);
  m.def(
      "nongeneration_witness",
      [](const std::vector<std::size_t>& n_grid, double t, std::uint64_t seed) {
        lab::ScanOptions o;
        o.norm.seed = seed;
        return lab::nongeneration_witness(n_grid, t, o);
      },
      py::arg("n_grid"), py::arg("t") = 1.0, py::arg("seed") = 12345);
  m.def(
      "vertical_integral_scan",
      [](int k, const Symbol& symbol, const RealVec& a_grid, const CoeffVec& x,
         const CoeffVec& y, std::size_t n, int threads) {
        gen::GeneratorConfig g{make_space(k, 2.0), symbol};
        return lab::vertical_integral_scan(g, a_grid, x, y, 0.0, n, {}, threads);
      },
      py::arg("k"), py::arg("symbol"), py::arg("a_grid"), py::arg("x"), py::arg("y"),
      py::arg("n"), py::arg("threads") = 1);
  m.def(
      "spectrum_map_check",
      [](int k, const Symbol& symbol, double t, std::size_t n) {
        gen::GeneratorConfig g{make_space(k, 2.0), symbol};
        return lab::spectrum_map_check(g, t, n);
      },
      py::arg("k"), py::arg("symbol"), py::arg("t"), py::arg("n"));
}
