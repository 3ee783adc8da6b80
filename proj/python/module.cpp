#include "pac/abstract_check.hpp"
#include "pac/abstraction.hpp"
#include "pac/bench.hpp"
#include "pac/concrete.hpp"
#include "pac/errors.hpp"
#include "pac/model_io.hpp"
#include "pac/refine.hpp"
#include "pac/smt.hpp"
#include "pac/subgraph.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pac;

namespace {

// Rationals cross the boundary as fractions.Fraction.
py::object fraction(const Rational& r)
{
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(py::int_(py::str(r.get_num().get_str())), py::int_(py::str(r.get_den().get_str())));
}

std::vector<std::string> names(const Dtmc& m, const StateSet& set)
{
    std::vector<std::string> out;
    for (StateId s : set)
        out.push_back(m.state(s).name);
    return out;
}

py::object report(const Dtmc& m, const std::optional<CauseReport>& r)
{
    if (!r)
        return py::none();
    py::dict d;
    d["cause"] = names(m, r->cause);
    d["predicate"] = r->cause_predicate.to_string();
    d["root"] = m.state(r->root).name;
    d["p_aw"] = fraction(r->p_aw);
    d["p_cw"] = fraction(r->p_cw);
    d["cf_root"] = r->cf_root >= 0 ? py::object(py::str(m.state(r->cf_root).name)) : py::none();
    d["round"] = r->round;
    d["abstract_cause"] = r->abstract_cause;
    return std::move(d);
}

PacQuery make_query(const Dtmc& m, const std::string& effect, const std::string& w, const std::string& roots)
{
    PacQuery q;
    q.model = &m;
    q.effect = parse_predicate(effect);
    q.contingencies = parse_predicate_list(w);
    if (roots == "all") {
        q.roots = RootPolicy::AllStates;
    } else if (roots != "initial") {
        q.roots = RootPolicy::Explicit;
        std::string cur;
        for (char c : roots + ",") {
            if (c == ',') {
                if (!cur.empty()) {
                    StateId s = m.find(cur);
                    if (s < 0)
                        throw QueryError("unknown state '" + cur + "'");
                    q.explicit_roots.push_back(s);
                }
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        std::sort(q.explicit_roots.begin(), q.explicit_roots.end());
    }
    return q;
}

AbstractPacQuery make_abs_query(const Dtmc& m, const std::string& effect, const std::string& w,
                                const std::string& strategy)
{
    PacQuery c = make_query(m, effect, w, "initial");
    AbstractPacQuery q;
    q.model = &m;
    q.effect = c.effect;
    q.contingencies = c.contingencies;
    if (strategy == "subgraphs")
        q.strategy = WStrategy::Subgraphs;
    else if (strategy != "preserving")
        throw QueryError("strategy must be preserving or subgraphs");
    return q;
}

StateSet lookup(const Dtmc& m, const std::vector<std::string>& cause)
{
    StateSet out;
    for (const auto& n : cause) {
        StateId s = m.find(n);
        if (s < 0)
            throw QueryError("unknown state '" + n + "'");
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

PYBIND11_MODULE(_pypac, mod)
{
    mod.doc() = "Probabilistic actual causes in Markov chains";

    py::register_exception<SyntaxError>(mod, "SyntaxError", PyExc_ValueError);
    py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
    py::register_exception<QueryError>(mod, "QueryError", PyExc_ValueError);
    py::register_exception<GuardExceeded>(mod, "GuardExceeded", PyExc_RuntimeError);
    py::register_exception<DecodeError>(mod, "DecodeError", PyExc_ValueError);

    py::class_<Dtmc>(mod, "Dtmc")
        .def_property_readonly("size", &Dtmc::size)
        .def_property_readonly("vars", &Dtmc::vars)
        .def_property_readonly("states", [](const Dtmc& m) {
            std::vector<std::string> out;
            for (const auto& s : m.states())
                out.push_back(s.name);
            return out;
        })
        .def_property_readonly("initial", [](const Dtmc& m) { return names(m, m.initial()); })
        .def("labels", [](const Dtmc& m, const std::string& name) {
            StateId s = m.find(name);
            if (s < 0)
                throw QueryError("unknown state '" + name + "'");
            return m.state(s).labels;
        })
        .def("to_text", [](const Dtmc& m) { return serialize_text(m); })
        .def("to_json", [](const Dtmc& m) { return serialize_json(m); })
        .def("__len__", &Dtmc::size);

    mod.def("load_model", [](const std::string& path) { return load_model(path); }, py::arg("path"));
    mod.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

    mod.def(
        "discover",
        [](const Dtmc& m, const std::string& effect, const std::string& w, const std::string& roots) {
            return report(m, discover(make_query(m, effect, w, roots)));
        },
        py::arg("model"), py::arg("effect"), py::arg("w") = "", py::arg("roots") = "initial",
        "First cause in search order, or None.");

    mod.def(
        "check_cause",
        [](const Dtmc& m, const std::string& effect, const std::vector<std::string>& cause, const std::string& w,
           const std::string& roots) {
            auto r = check_cause(make_query(m, effect, w, roots), lookup(m, cause));
            py::dict d;
            d["confirmed"] = r.confirmed;
            d["report"] = report(m, r.report);
            d["diagnostic"] = r.diagnostic;
            return d;
        },
        py::arg("model"), py::arg("effect"), py::arg("cause"), py::arg("w") = "", py::arg("roots") = "initial");

    mod.def(
        "oracle_discover",
        [](const Dtmc& m, const std::string& effect, const std::string& w) {
            return report(m, oracle_discover(make_query(m, effect, w, "initial")));
        },
        py::arg("model"), py::arg("effect"), py::arg("w") = "");

    mod.def(
        "refine",
        [](const Dtmc& m, const std::string& effect, const std::string& preds, const std::string& w,
           const std::string& alpha, int max_rounds, const std::string& strategy) {
            RefineOptions opt;
            opt.predicates = parse_predicate_list(preds);
            opt.alpha = parse_rational(alpha);
            opt.max_rounds = max_rounds;
            auto r = run(make_abs_query(m, effect, w, strategy), opt);
            py::list trace;
            for (const auto& t : r.trace) {
                py::dict d;
                d["round"] = t.round;
                d["subgraph"] = t.subgraph;
                d["states"] = t.states;
                d["split"] = t.selected;
                d["lo"] = fraction(t.lo);
                d["hi"] = fraction(t.hi);
                d["outcome"] = t.outcome;
                trace.append(d);
            }
            py::dict d;
            d["report"] = report(m, r.report);
            d["trace"] = trace;
            return d;
        },
        py::arg("model"), py::arg("effect"), py::arg("preds"), py::arg("w") = "", py::arg("alpha") = "3/5",
        py::arg("max_rounds") = 64, py::arg("strategy") = "preserving");

    mod.def(
        "abstraction",
        [](const Dtmc& m, const std::string& preds) { return abstract(m, parse_predicate_list(preds)).abs_map(); },
        py::arg("model"), py::arg("preds"), "Class listing of a predicate abstraction.");

    mod.def(
        "subgraphs",
        [](const Dtmc& m, const std::string& w) {
            auto W = parse_predicate_list(w);
            py::list out;
            for (const auto& g : enumerate_subgraphs(m, W)) {
                py::dict d;
                d["signature"] = signature_string(g.signature, W);
                d["paths"] = g.paths;
                std::vector<std::string> states;
                for (const auto& s : g.model.states())
                    states.push_back(s.name);
                d["states"] = states;
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("w"));

    mod.def(
        "export_smt",
        [](const Dtmc& m, const std::string& effect, const std::string& w) {
            return export_smt(make_query(m, effect, w, "initial")).text;
        },
        py::arg("model"), py::arg("effect"), py::arg("w") = "");

    mod.def(
        "decode_smt",
        [](const Dtmc& m, const std::string& effect, const std::string& output, const std::string& w) {
            return report(m, decode_smt_model(make_query(m, effect, w, "initial"), output));
        },
        py::arg("model"), py::arg("effect"), py::arg("output"), py::arg("w") = "");

    mod.def(
        "generate",
        [](std::uint64_t seed, std::size_t budget, int max_depth) {
            GenSpec g;
            g.seed = seed;
            g.budget = budget;
            g.max_depth = max_depth;
            return generate(g);
        },
        py::arg("seed"), py::arg("budget") = 50, py::arg("max_depth") = 6);
}
