#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qha/double.hpp"
#include "qha/workbench.hpp"

namespace py = pybind11;
using namespace qha;

namespace {

std::string run_verify(const std::string& source, const std::string& suite, bool exhaustive, bool generic, int jobs) {
  QhaPresentation raw = source.rfind("catalog:", 0) == 0 ? catalog_raw(source.substr(8)) : import_file_raw(source);
  const std::string name = raw.name;
  VerificationReport rep;
  const bool all = suite == "all";
  if (all || suite == "axioms") rep.append(verify_axioms(raw));
  if (!rep.all_pass() || suite == "axioms") return report_json(name, rep).dump();
  AlgebraContext ctx(load_and_validate(std::move(raw)));
  ctx.exhaustive = exhaustive;
  if (all || suite == "canonical") {
    rep.append(canonical_properties(ctx));
    rep.append(identity_suite(ctx, "canonical", jobs));
  }
  if (all || suite == "integrals") rep.append(integrals_suite(ctx, jobs));
  if (all || suite == "double") {
    DoubleContext dc(ctx, false);
    rep.append(double_suite(dc, generic, jobs));
  }
  if (rep.rows.empty()) throw Error("UsageError", "unknown suite " + suite);
  return report_json(name, rep).dump();
}

py::dict integrals(const std::string& source) {
  AlgebraContext ctx(load_source(source));
  const auto& b = ctx.H().basis;
  const IntegralData& I = ctx.integrals();
  py::dict d;
  d["left_integral"] = I.left.str(b);
  d["right_integral"] = I.right.str(b);
  d["modular_function"] = I.mu.str(b);
  return d;
}

py::dict cointegrals(const std::string& source) {
  AlgebraContext ctx(load_source(source));
  const auto& b = ctx.H().basis;
  const CointegralData& C = ctx.cointegrals();
  py::dict d;
  d["left_cointegral"] = C.lam.str(b);
  d["right_cointegral"] = C.Lam.str(b);
  d["modular_element"] = C.g.str(b);
  return d;
}

std::string double_text(const std::string& source) {
  AlgebraContext ctx(load_source(source));
  return export_text(build_double(ctx, false).pres);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact quasi-Hopf algebra workbench";
  static py::exception<Error> qha_error(m, "QhaError");  // NOLINT
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(qha_error, (e.kind() + ": " + e.what()).c_str());
    }
  });

  m.def("catalog_names", &catalog_names, "Names accepted after catalog:");
  m.def("export_text", [](const std::string& source) { return export_text(load_source(source)); },
        py::arg("source"), "Canonical presentation document for a catalog name or file");
  m.def("import_text", [](const std::string& text) { return export_text(import_text(text)); }, py::arg("text"),
        "Validates a presentation document and returns its canonical text");
  m.def("verify", &run_verify, py::arg("source"), py::arg("suite") = "all", py::arg("exhaustive") = false,
        py::arg("generic") = false, py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>(),
        "Report document as a JSON string");
  m.def("integrals", &integrals, py::arg("source"));
  m.def("cointegrals", &cointegrals, py::arg("source"));
  m.def("double_text", &double_text, py::arg("source"), py::call_guard<py::gil_scoped_release>(),
        "Canonical document of D(H)");
}
