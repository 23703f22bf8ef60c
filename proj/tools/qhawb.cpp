// qhawb: verify quasi-Hopf presentations, print integrals and cointegrals,
// build quantum doubles and export documents.
//
// Exit codes: 0 every selected row passes, 1 some row fails, 2 usage, IO or
// schema error.
#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <string>

#include "qha/double.hpp"
#include "qha/workbench.hpp"

namespace {

using namespace qha;
using nlohmann::ordered_json;

struct Options {
  std::string format = "text";
  int jobs = 1;
  std::string source;
  std::string suite = "all";
  bool exhaustive = false;
  std::string side;
  std::string path;
  bool generic = false;
};

QhaPresentation load_raw(const std::string& source) {
  const std::string prefix = "catalog:";
  if (source.rfind(prefix, 0) == 0) return catalog_raw(source.substr(prefix.size()));
  return import_file_raw(source);
}

int finish(const Options& o, const std::string& algebra, const VerificationReport& rep,
           const ordered_json& values = ordered_json::object(), const std::string& preamble = {}) {
  if (o.format == "json") {
    ordered_json d = report_json(algebra, rep);
    if (!values.empty()) d["values"] = values;
    std::cout << d.dump(2) << "\n";
  } else {
    std::cout << preamble << report_text(algebra, rep);
  }
  return rep.all_pass() ? 0 : 1;
}

int run_verify(const Options& o) {
  QhaPresentation raw = load_raw(o.source);
  const std::string name = raw.name;
  VerificationReport rep;
  const bool all = o.suite == "all";
  if (all || o.suite == "axioms") {
    rep.append(verify_axioms(raw));
    if (!rep.all_pass()) return finish(o, name, rep);
  }
  if (o.suite == "axioms") return finish(o, name, rep);
  AlgebraContext ctx(load_and_validate(std::move(raw)));
  ctx.exhaustive = o.exhaustive;
  if (all || o.suite == "canonical") {
    rep.append(canonical_properties(ctx));
    rep.append(identity_suite(ctx, "canonical", o.jobs));
  }
  if (all || o.suite == "integrals") rep.append(integrals_suite(ctx, o.jobs));
  if (all || o.suite == "double") {
    DoubleContext dc(ctx, false);
    rep.append(double_suite(dc, o.generic, o.jobs));
  }
  return finish(o, name, rep);
}

int run_integrals(const Options& o) {
  AlgebraContext ctx(load_source(o.source));
  const auto& H = ctx.H();
  const IntegralData& I = ctx.integrals();
  VerificationReport rep = integral_rows(ctx);
  ordered_json v;
  v["left_integral"] = I.left.str(H.basis);
  v["right_integral"] = I.right.str(H.basis);
  v["modular_function"] = I.mu.str(H.basis);
  std::string pre = "left integral   t = " + I.left.str(H.basis) + "\n" + "right integral  r = " + I.right.str(H.basis) +
                    "\n" + "modular function μ = " + I.mu.str(H.basis) + "\n";
  return finish(o, H.name, rep, v, pre);
}

int run_cointegrals(const Options& o) {
  AlgebraContext ctx(load_source(o.source));
  const auto& H = ctx.H();
  const CointegralData& C = ctx.cointegrals();
  VerificationReport rep = characterization_suite(ctx);
  ordered_json v;
  std::string pre;
  if (o.side.empty() || o.side == "left") {
    v["left_cointegral"] = C.lam.str(H.basis);
    pre += "left cointegral  λ = " + C.lam.str(H.basis) + "\n";
  }
  if (o.side.empty() || o.side == "right") {
    v["right_cointegral"] = C.Lam.str(H.basis);
    pre += "right cointegral Λ = " + C.Lam.str(H.basis) + "\n";
  }
  v["modular_element"] = C.g.str(H.basis);
  pre += "modular element  g = " + C.g.str(H.basis) + "\n";
  return finish(o, H.name, rep, v, pre);
}

int run_double(const Options& o) {
  AlgebraContext ctx(load_source(o.source));
  ctx.exhaustive = o.exhaustive;
  DoubleContext dc(ctx, false);
  VerificationReport rep = double_suite(dc, o.generic, o.jobs);
  std::string pre;
  if (!o.path.empty()) {
    export_file(dc.D().pres, o.path);
    pre = "exported " + dc.D().pres.name + " (dim " + std::to_string(dc.D().pres.dim) + ") to " + o.path + "\n";
  }
  return finish(o, dc.D().pres.name, rep, ordered_json::object(), pre);
}

int run_export(const Options& o) {
  QhaPresentation H = load_source(o.source);
  export_file(H, o.path);
  if (o.format == "json")
    std::cout << ordered_json{{"exported", H.name}, {"path", o.path}}.dump(2) << "\n";
  else
    std::cout << "exported " << H.name << " to " << o.path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification workbench for finite-dimensional quasi-Hopf algebras"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", o.jobs, "Parallel identity rows")->check(CLI::Range(1, 256));

  const std::string src_help = "Presentation file or catalog:NAME";
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("source", o.source, src_help)->required();
  verify->add_option("--suite", o.suite, "Suite to run")
      ->check(CLI::IsMember({"axioms", "canonical", "integrals", "double", "all"}));
  verify->add_flag("--exhaustive", o.exhaustive, "Check pair identities on every basis pair");
  verify->add_flag("--generic", o.generic, "Rerun the canonical and integral suites on D(H)");

  auto* integrals = app.add_subcommand("integrals", "Print the integral lines and the modular function");
  integrals->add_option("source", o.source, src_help)->required();

  auto* cointegrals = app.add_subcommand("cointegrals", "Print the cointegral lines and the modular element");
  cointegrals->add_option("source", o.source, src_help)->required();
  cointegrals->add_option("--side", o.side, "left or right")->check(CLI::IsMember({"left", "right"}));

  auto* dbl = app.add_subcommand("double", "Build D(H) and run the double suite");
  dbl->add_option("source", o.source, src_help)->required();
  dbl->add_option("--export", o.path, "Write D(H) as a presentation document");
  dbl->add_flag("--exhaustive", o.exhaustive, "Check pair identities on every basis pair");
  dbl->add_flag("--generic", o.generic, "Rerun the canonical and integral suites on D(H)");

  auto* exp = app.add_subcommand("export", "Write a canonical presentation document");
  exp->add_option("source", o.source, src_help)->required();
  exp->add_option("path", o.path, "Output path")->required();

  for (auto* sub : {verify, integrals, cointegrals, dbl, exp}) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--jobs", o.jobs, "Parallel identity rows")->check(CLI::Range(1, 256));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(o);
    if (integrals->parsed()) return run_integrals(o);
    if (cointegrals->parsed()) return run_cointegrals(o);
    if (dbl->parsed()) return run_double(o);
    return run_export(o);
  } catch (const qha::Error& e) {
    std::cerr << "qhawb: " << e.kind() << ": " << e.what() << "\n";
    if (o.format == "json")
      std::cout << ordered_json{{"error", e.kind()}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qhawb: " << e.what() << "\n";
    return 2;
  }
}
