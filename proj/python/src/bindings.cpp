#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slpkit/deciders.hpp"
#include "slpkit/eval.hpp"
#include "slpkit/harness.hpp"
#include "slpkit/numtheory.hpp"
#include "slpkit/reductions.hpp"

namespace py = pybind11;
using namespace slpkit;

// Python int <-> mpz_class through hexadecimal text.
namespace pybind11::detail {
template <>
struct type_caster<BigInt> {
  PYBIND11_TYPE_CASTER(BigInt, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    object text = reinterpret_steal<object>(PyNumber_ToBase(src.ptr(), 16));
    if (!text) {
      PyErr_Clear();
      return false;
    }
    return value.set_str(text.cast<std::string>(), 0) == 0;
  }

  static handle cast(const BigInt& v, return_value_policy, handle) {
    const std::string hex = v.get_str(16);
    return PyLong_FromString(hex.c_str(), nullptr, 16);
  }
};
}  // namespace pybind11::detail

namespace {

Problem problem_arg(const std::string& name) {
  const auto p = problem_from_name(name);
  if (!p) throw py::value_error("unknown problem: " + name);
  return *p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<FactorizationTimeout>(m, "FactorizationTimeout", PyExc_RuntimeError);
  py::register_exception<GapBoundExhausted>(m, "GapBoundExhausted", PyExc_RuntimeError);

  py::class_<Slp>(m, "Slp")
      .def_static("parse", [](const std::string& text) { return parse(text); })
      .def("serialize", [](const Slp& s) { return serialize(s); })
      .def_property_readonly("size", &Slp::size)
      .def_property_readonly("num_vars", &Slp::num_vars)
      .def("__len__", &Slp::size)
      .def("__str__", [](const Slp& s) { return serialize(s); })
      .def("__eq__", [](const Slp& a, const Slp& b) { return a == b; });

  m.def("int_to_slp", &int_to_slp);
  m.def("pow2_slp", &pow2_slp);
  m.def("gen_random_slp", [](std::size_t size, std::size_t vars, std::uint64_t seed) {
    return gen_random_slp(size, vars, seed);
  }, py::arg("size"), py::arg("num_vars") = 0, py::arg("seed") = 0);

  m.def("eval_exact", [](const Slp& s, const std::vector<BigInt>& vars, std::size_t max_bits) {
    return eval_exact(s, vars, EvalBudget::with_bits(max_bits));
  }, py::arg("slp"), py::arg("vars") = std::vector<BigInt>{}, py::arg("max_bits") = std::size_t{1} << 20);
  m.def("eval_mod", [](const Slp& s, const std::vector<BigInt>& vars, const BigInt& modulus) {
    return eval_mod(s, std::span<const BigInt>(vars), modulus);
  }, py::arg("slp"), py::arg("vars"), py::arg("modulus"));
  m.def("expand_poly", [](const Slp& s) { return expand_poly(s).coefficients(); },
        "Coefficients, constant term first.");
  m.def("degree_upper_bound", &degree_upper_bound);

  m.def("is_3sos", [](const BigInt& n) { return is_3sos(n); });
  m.def("is_2sos", [](const BigInt& n) { return is_2sos(n); });
  m.def("isqrt", &isqrt);
  m.def("factorize", [](const BigInt& n) { return factorize(n).factors; });
  m.def("density_scan", [](const std::string& kind, std::uint64_t limit) {
    const DensityKind k = kind == "3sos" ? DensityKind::ThreeSquares : kind == "2sos" ? DensityKind::TwoSquares
                                                                                     : throw py::value_error("kind is 3sos or 2sos");
    const DensityResult r = density_scan(k, limit);
    return py::make_tuple(r.count, r.ratio);
  });

  m.def("problems", [] {
    std::vector<std::string> out;
    for (Problem p : all_problems()) out.emplace_back(problem_name(p));
    return out;
  });
  m.def("decide", [](const std::string& problem, const Slp& s, std::optional<BigInt> l, std::optional<BigInt> d,
                     std::optional<BigInt> n, std::optional<BigInt> i, std::uint64_t seed,
                     std::optional<std::size_t> sample_exp) {
    ProblemInstance inst{problem_arg(problem), s, {l, d, n, i}};
    DeciderOptions opts;
    opts.seed = seed;
    opts.sample_exponent = sample_exp;
    const Verdict v = decide(inst, opts);
    py::dict out;
    out["answer"] = v.answer;
    out["provenance"] = v.provenance;
    out["seed"] = v.seed ? py::object(py::int_(*v.seed)) : py::object(py::none());
    return out;
  }, py::arg("problem"), py::arg("slp"), py::arg("l") = py::none(), py::arg("d") = py::none(),
        py::arg("n") = py::none(), py::arg("i") = py::none(), py::arg("seed") = 0,
        py::arg("sample_exp") = py::none());

  m.def("reduction_names", &reduction_names);
  m.def("run_reduction", [](const std::string& name, const Slp& s, std::optional<BigInt> l, std::optional<BigInt> d,
                            std::optional<std::size_t> override_exp, std::optional<BigInt> gap_bound) {
    ReductionRequest req;
    req.name = name;
    req.l = l;
    req.d = d;
    req.exponent_override = override_exp;
    req.gap_bound = gap_bound;
    return run_reduction(req, s).to_json();
  }, py::arg("name"), py::arg("slp"), py::arg("l") = py::none(), py::arg("d") = py::none(),
        py::arg("override_exp") = py::none(), py::arg("gap_bound") = py::none());

  m.def("campaign_names", &campaign_names);
  m.def("run_campaign", [](const std::string& name, std::optional<std::size_t> exhaustive,
                           std::optional<std::uint64_t> random, std::optional<std::size_t> size, std::uint64_t seed,
                           std::optional<std::uint64_t> limit) {
    CampaignConfig c;
    c.campaign = name;
    c.exhaustive = exhaustive;
    c.random_count = random;
    c.random_size = size;
    c.seed = seed;
    c.limit = limit;
    CampaignReport r;
    {
      py::gil_scoped_release release;
      r = run_campaign(c);
    }
    return py::make_tuple(r.ok(), r.to_jsonl());
  }, py::arg("name"), py::arg("exhaustive") = py::none(), py::arg("random") = py::none(),
        py::arg("size") = py::none(), py::arg("seed") = 0, py::arg("limit") = py::none());
}
