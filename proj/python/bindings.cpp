#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chor/cli.hpp"
#include "chor/dot.hpp"
#include "chor/semantics.hpp"

#include <sstream>

namespace py = pybind11;
using namespace chor;

namespace {

py::object loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::vector<Binding> to_bindings(const std::map<std::string, std::string>& binds) {
  std::vector<Binding> out;
  for (const auto& [tag, src] : binds) out.push_back({tag, parse(src)});
  return out;
}

}  // namespace

PYBIND11_MODULE(chorpy, m) {
  m.doc() = "Global choreographies: semantics, typing and refinement";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<TypeError>(m, "ChorTypeError", PyExc_ValueError);
  py::register_exception<SubstitutionError>(m, "SubstitutionError", PyExc_ValueError);

  m.def("pretty", [](const std::string& src) { return pretty(parse(src)); }, "Parse and print back in canonical form.");

  m.def(
      "wf",
      [](const std::string& src, std::size_t cap) {
        WfReport r = wf_check(parse(src), cap);
        py::dict d;
        d["well_formed"] = r.well_formed;
        d["events"] = r.events;
        d["max_configs"] = r.max_configs ? py::cast(*r.max_configs) : py::none();
        d["diagnostic"] = r.diagnostic ? py::cast(r.diagnostic->message()) : py::none();
        return d;
      },
      py::arg("src"), py::arg("cap") = kDefaultConfigCap);

  m.def(
      "type_of",
      [](const std::string& src, const std::string& ctx_json, bool use_default_ctx) {
        ContextMap ctxs = ctx_json.empty() ? ContextMap{} : cli::parse_context_map(ctx_json);
        TypeResult r = check_type(parse(src), ctxs, use_default_ctx);
        if (auto* e = std::get_if<TypeError>(&r)) throw *e;
        return loads(cli::type_json(std::get<ChorType>(r)));
      },
      py::arg("src"), py::arg("ctx_json") = "", py::arg("use_default_ctx") = true,
      "Returns {pi, first, last}; raises ChorTypeError.");

  m.def(
      "refines",
      [](const std::string& src, const std::string& action) {
        return loads(cli::refreport_json(refines(parse(src), parse_refinable_action(action))));
      },
      py::arg("src"), py::arg("action"));

  m.def(
      "refine",
      [](const std::string& src, const std::map<std::string, std::string>& binds) {
        return loads(cli::refine_json(refine_and_check(parse(src), to_bindings(binds))));
      },
      py::arg("src"), py::arg("bindings"), "bindings: tag -> ground replacement source");

  m.def("isomorphic", [](const std::string& a, const std::string& b) {
    SemResult x = interpret(parse(a)), y = interpret(parse(b));
    return x.ok() && y.ok() && es_isomorphic(x.es(), y.es());
  });

  m.def("dot", [](const std::string& src) {
    SemResult r = interpret(parse(src));
    if (!r) throw py::value_error(r.bottom().message());
    return dot_export(r.es());
  });

  m.def(
      "sweep",
      [](std::size_t leaves, std::vector<std::string> participants, std::vector<std::string> messages) {
        GenParams p;
        p.max_leaves = leaves;
        p.participants.clear();
        for (auto& s : participants) p.participants.push_back({s});
        p.messages.clear();
        for (auto& s : messages) p.messages.push_back({s});
        SweepReport r;
        {
          py::gil_scoped_release release;
          r = soundness_sweep(p);
          SweepReport meta = metatheory_sweep(p);
          meta.total = meta.typable = meta.wf = meta.skipped = 0;
          r.merge(meta);
        }
        return loads(cli::sweep_json(r));
      },
      py::arg("leaves") = 2, py::arg("participants") = std::vector<std::string>{"A", "B", "C"},
      py::arg("messages") = std::vector<std::string>{"m", "n"});

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Same as the chorc command line; returns (exit code, stdout, stderr).");
}
