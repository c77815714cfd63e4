#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "transfix/errors.hpp"
#include "transfix/scenario.hpp"

namespace py = pybind11;
using namespace transfix;

namespace {

RunOptions options(std::optional<std::uint64_t> steps, std::optional<std::uint64_t> jumps,
                   std::optional<std::size_t> max_stages) {
  RunOptions o;
  o.budget_steps = steps;
  o.budget_jumps = jumps;
  o.max_stages = max_stages;
  return o;
}

MonotoneOp checked_op(const FiniteLattice& l, std::vector<ElementId> table) {
  if (table.size() != l.size()) throw PreconditionViolation("lattice", "operator table must have one entry per element");
  for (ElementId y : table) {
    if (y >= l.size()) throw PreconditionViolation("lattice", "operator table names an element out of range");
  }
  MonotoneOp f(std::move(table));
  if (!check_monotone(l, f)) throw PreconditionViolation("lattice", "operator is not monotone");
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "transfix core bindings";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<PreconditionViolation>(m, "PreconditionViolation", base.ptr());

  py::class_<Ordinal>(m, "Ordinal")
      .def(py::init([](std::uint64_t n) { return Ordinal::natural(n); }), py::arg("n") = 0)
      .def_static("parse", &Ordinal::parse)
      .def_static("omega", &Ordinal::omega)
      .def("__str__", &Ordinal::to_string)
      .def("__repr__", [](const Ordinal& o) { return "Ordinal('" + o.to_string() + "')"; })
      .def("__add__", [](const Ordinal& a, const Ordinal& b) { return a + b; })
      .def("__eq__", [](const Ordinal& a, const Ordinal& b) { return a == b; })
      .def("__lt__", [](const Ordinal& a, const Ordinal& b) { return a < b; })
      .def("__le__", [](const Ordinal& a, const Ordinal& b) { return a <= b; })
      .def("__hash__", [](const Ordinal& o) { return py::hash(py::str(o.to_string())); })
      .def("is_limit", [](const Ordinal& o) { return is_limit(o); })
      .def("is_zero", &Ordinal::is_zero)
      .def("succ", [](const Ordinal& o) { return succ(o); })
      .def("mul_by_omega", [](const Ordinal& o) { return mul_by_omega(o); });

  py::class_<FiniteLattice>(m, "FiniteLattice")
      .def_static("powerset", [](std::vector<std::string> u) { return make_powerset(std::move(u)); })
      .def_static("chain", &make_chain)
      .def_static("product", &make_product)
      .def_static("from_set_family", &FiniteLattice::from_set_family)
      .def("__len__", &FiniteLattice::size)
      .def_property_readonly("labels", &FiniteLattice::labels)
      .def_property_readonly("height", &FiniteLattice::height)
      .def_property_readonly("bottom", &FiniteLattice::bottom)
      .def_property_readonly("top", &FiniteLattice::top)
      .def("find", &FiniteLattice::find)
      .def("leq", &FiniteLattice::leq)
      .def("join", &FiniteLattice::join)
      .def("meet", &FiniteLattice::meet);

  m.def(
      "lfp",
      [](const FiniteLattice& l, std::vector<ElementId> table) {
        const auto r = lfp(l, checked_op(l, std::move(table)));
        return py::make_tuple(r.element, r.stage);
      },
      "Least fixed point of a monotone table and its Kleene stage.");
  m.def("gfp", [](const FiniteLattice& l, std::vector<ElementId> table) {
    const auto r = gfp(l, checked_op(l, std::move(table)));
    return py::make_tuple(r.element, r.stage);
  });
  m.def("fixed_points",
        [](const FiniteLattice& l, std::vector<ElementId> table) { return fixed_points(l, checked_op(l, std::move(table))); });
  m.def("kleene_chain",
        [](const FiniteLattice& l, std::vector<ElementId> table) { return kleene_chain(l, checked_op(l, std::move(table))); });
  m.def("correspondence_ok", [](const FiniteLattice& l, std::vector<ElementId> table) {
    return correspondence_check(l, checked_op(l, std::move(table))).ok;
  });

  // Scenario-level entry points exchange JSON text; the Python package
  // decodes it.
  m.def(
      "run_json",
      [](const std::string& text, std::optional<std::uint64_t> steps, std::optional<std::uint64_t> jumps,
         std::optional<std::size_t> max_stages) {
        return run_scenario(parse_scenario(text), options(steps, jumps, max_stages)).json.dump();
      },
      py::arg("scenario"), py::arg("budget_steps") = py::none(), py::arg("budget_jumps") = py::none(),
      py::arg("max_stages") = py::none());
  m.def("format_text", [](const std::string& report) { return format_text(Json::parse(report)); });
  m.def("verify_json", [](const std::string& text) {
    const Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("scenario", "malformed JSON");
    const auto r = verify_document(doc);
    return py::make_tuple(r.ok, r.problems);
  });
  m.def(
      "enumerate_json",
      [](const std::string& text, std::optional<std::size_t> max_stages) {
        return enumerate_scenario(parse_scenario(text), options(std::nullopt, std::nullopt, max_stages)).dump();
      },
      py::arg("scenario"), py::arg("max_stages") = py::none());
  m.def("canonical_json", [](const std::string& text) { return to_json(parse_scenario(text)).dump(); });
  m.def("suite_json", [](std::uint64_t seed) { return run_suite(seed).dump(); }, py::arg("seed") = 42);
}
