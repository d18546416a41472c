#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fei/error.hpp"
#include "fei/experiments.hpp"
#include "fei/families.hpp"
#include "fei/measures.hpp"
#include "fei/spectrum.hpp"

namespace py = pybind11;
using namespace fei;

namespace {

// Records cross the boundary as JSON text; the Python wrapper decodes them.
std::string dump(const nlohmann::ordered_json& j) { return j.dump(); }

py::array_t<double> coefficients(const Spectrum& spec) {
  const auto c = spec.coeffs();
  return py::array_t<double>(static_cast<py::ssize_t>(c.size()), c.data());
}

}  // namespace

PYBIND11_MODULE(_fei, m) {
  m.doc() = "Fourier entropy and influence of boolean functions";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "FeiError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NotBooleanError>(m, "NotBooleanError", base.ptr());
  py::register_exception<InvalidSpectrumError>(m, "InvalidSpectrumError", base.ptr());
  py::register_exception<fei::ParseError>(m, "ParseError", base.ptr());

  m.def("arity_cap", &arity_cap);
  m.def("set_arity_cap", &set_arity_cap, py::arg("cap"));

  py::class_<TruthTable>(m, "TruthTable")
      .def(py::init<unsigned>(), py::arg("n"))
      .def_static("from_hex", [](const std::string& s) { return TruthTable::from_hex(s); })
      .def_static("from_bits", &TruthTable::from_bits, py::arg("n"), py::arg("bits"))
      .def_static("from_values",
                  [](unsigned n, const std::vector<int>& values) {
                    TruthTable tt(n);
                    if (values.size() != tt.size())
                      throw DomainError("expected 2^n values");
                    for (std::size_t k = 0; k < values.size(); ++k) {
                      if (values[k] != 1 && values[k] != -1)
                        throw DomainError("values must be +1 or -1");
                      tt.set_negative(k, values[k] < 0);
                    }
                    return tt;
                  },
                  py::arg("n"), py::arg("values"))
      .def_property_readonly("arity", &TruthTable::arity)
      .def("__len__", &TruthTable::size)
      .def("value", &TruthTable::value, py::arg("k"))
      .def("values",
           [](const TruthTable& tt) {
             std::vector<int> out(tt.size());
             for (std::uint64_t k = 0; k < tt.size(); ++k) out[k] = tt.value(k);
             return out;
           })
      .def("is_constant", &TruthTable::is_constant)
      .def("to_hex", &TruthTable::to_hex)
      .def("__eq__", [](const TruthTable& a, const TruthTable& b) { return a == b; })
      .def("__repr__", [](const TruthTable& tt) { return "TruthTable('" + tt.to_hex() + "')"; });

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<unsigned, std::vector<double>>(), py::arg("n"), py::arg("coeffs"))
      .def_property_readonly("arity", &Spectrum::arity)
      .def_property_readonly("coeffs", &coefficients)
      .def("__len__", &Spectrum::size)
      .def("__getitem__", [](const Spectrum& s, Mask mask) {
        if (mask >= s.size()) throw py::index_error();
        return s[mask];
      })
      .def("squared_norm", &Spectrum::squared_norm)
      .def("to_csv", &Spectrum::to_csv);

  m.def("spectrum_of", &spectrum_of, py::arg("tt"));
  m.def("coefficient_naive", &coefficient_naive, py::arg("tt"), py::arg("mask"));
  m.def("truth_table_of", &truth_table_of, py::arg("spectrum"));

  m.def("entropy", &entropy, py::arg("spectrum"));
  m.def("influence_total", &influence_total, py::arg("spectrum"));
  m.def("influence_coord", &influence_coord, py::arg("spectrum"), py::arg("i"));
  m.def("influence_combinatorial", &influence_combinatorial, py::arg("tt"), py::arg("i"));
  m.def("_fei_report",
        [](const TruthTable& tt, double c) { return dump(to_json(fei_report(tt, c))); },
        py::arg("tt"), py::arg("c"));

  m.def("random_function", &random_function, py::arg("n"), py::arg("seed"), py::arg("trial"));
  m.def("named_function",
        [](const std::string& text) { return named_function(FamilySpec::parse(text)); },
        py::arg("spec"));
  m.def("symmetric_enumerate",
        [](unsigned n) {
          const auto fam = symmetric_enumerate(n);
          std::vector<TruthTable> out;
          out.reserve(fam.size());
          for (std::uint64_t i = 0; i < fam.size(); ++i) out.push_back(fam.at(i));
          return out;
        },
        py::arg("n"));
  m.def("cyclic_invariant_enumerate",
        [](unsigned p, std::uint64_t budget) {
          const auto fam = cyclic_invariant_enumerate(p, budget);
          std::vector<TruthTable> out;
          out.reserve(*fam.size());
          for (std::uint64_t i = 0; i < *fam.size(); ++i) out.push_back(fam.at(i));
          return out;
        },
        py::arg("p"), py::arg("budget") = kDefaultEnumerationBudget);
  m.def("cyclic_invariant_count",
        [](unsigned p) {
          const auto c = cyclic_invariant_count(p);
          py::dict d;
          d["p"] = c.p;
          d["orbit_count"] = c.orbit_count;
          d["singleton_orbits"] = c.singleton_orbits;
          d["family_size"] = py::int_(1) << py::int_(c.orbit_count);
          return d;
        },
        py::arg("p"));

  m.def("_exhaustive_stats",
        [](unsigned n, double epsilon, unsigned threads) {
          py::gil_scoped_release release;
          return dump(to_json(exhaustive_stats(n, epsilon, RunOptions{threads})));
        },
        py::arg("n"), py::arg("epsilon"), py::arg("threads"));
  m.def("_fourth_moment_table",
        [](unsigned n) { return dump(to_json(fourth_moment_table(n))); }, py::arg("n"));
  m.def("_monte_carlo",
        [](unsigned n, std::uint64_t trials, std::uint64_t seed, double epsilon,
           unsigned threads) {
          py::gil_scoped_release release;
          return dump(to_json(monte_carlo(n, trials, seed, epsilon, RunOptions{threads})));
        },
        py::arg("n"), py::arg("trials"), py::arg("seed"), py::arg("epsilon"),
        py::arg("threads"));
  m.def("_family_scan",
        [](const std::string& family, double c, unsigned threads) {
          const auto spec = FamilySpec::parse(family);
          py::gil_scoped_release release;
          return dump(to_json(family_scan(spec, c, RunOptions{threads})));
        },
        py::arg("family"), py::arg("c"), py::arg("threads"));
  m.def("chebyshev_bound", &chebyshev_bound, py::arg("n"), py::arg("epsilon"));
  m.def("fraction_bound", &fraction_bound, py::arg("n"), py::arg("delta"));
}
