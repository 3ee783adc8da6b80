#include "pac/smt.hpp"

#include "pac/errors.hpp"
#include "pac/stutter.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace pac {

namespace {

std::string sym(const std::string& family, StateId s)
{
    return family + "_s" + std::to_string(s);
}

std::string sum_of(const std::vector<std::string>& terms)
{
    if (terms.empty())
        return "0.0";
    if (terms.size() == 1)
        return terms.front();
    std::string out = "(+";
    for (const auto& t : terms)
        out += " " + t;
    return out + ")";
}

std::string and_of(const std::vector<std::string>& terms)
{
    if (terms.empty())
        return "true";
    if (terms.size() == 1)
        return terms.front();
    std::string out = "(and";
    for (const auto& t : terms)
        out += " " + t;
    return out + ")";
}

std::string or_of(const std::vector<std::string>& terms)
{
    if (terms.empty())
        return "false";
    if (terms.size() == 1)
        return terms.front();
    std::string out = "(or";
    for (const auto& t : terms)
        out += " " + t;
    return out + ")";
}

std::string weighted(const Rational& p, const std::string& var)
{
    if (p == 1)
        return var;
    return "(* " + smt_real(p) + " " + var + ")";
}

void write_manifest(std::ostringstream& out, const std::vector<std::pair<std::string, std::string>>& manifest)
{
    for (const auto& [k, v] : manifest)
        out << "; " << k << " : " << v << '\n';
}

void declare_bounded(std::ostringstream& out, const std::string& name)
{
    out << "(declare-const " << name << " Real)\n";
    out << "(assert (and (<= 0.0 " << name << ") (<= " << name << " 1.0)))\n";
}

// Cardinality constraint on the selector flags.
void write_selection(std::ostringstream& out, const std::vector<std::string>& flags, CandidatePolicy policy,
                     int max_subset)
{
    out << "(assert " << or_of(flags) << ")\n";
    if (flags.size() < 2)
        return;
    std::vector<std::string> ones;
    for (const auto& f : flags)
        ones.push_back("(ite " + f + " 1.0 0.0)");
    int k = policy == CandidatePolicy::SingleState ? 1 : std::max(1, max_subset);
    out << "(assert (<= " << sum_of(ones) << " " << smt_real(Rational(k)) << "))\n";
}

// Search-order tie-break: selecting candidate j requires every earlier
// candidate to fail. `copy(j, c)` emits the fixed-cause system of
// candidate j and returns its success condition.
void write_order(std::ostringstream& out, const std::vector<StateSet>& cands, const std::vector<std::string>& flags,
                 const std::function<std::string(std::size_t, const StateSet&)>& copy)
{
    if (cands.size() < 2)
        return;
    out << "; search order: a selection implies that no earlier candidate succeeds\n";
    std::vector<std::string> earlier;
    for (std::size_t j = 0; j < cands.size(); ++j) {
        std::vector<std::string> chosen;
        for (const auto& f : flags) {
            long idx = std::stol(f.substr(3));
            bool in = std::binary_search(cands[j].begin(), cands[j].end(), static_cast<StateId>(idx));
            chosen.push_back(in ? f : "(not " + f + ")");
        }
        if (!earlier.empty())
            out << "(assert (=> " << and_of(chosen) << " (not " << or_of(earlier) << ")))\n";
        if (j + 1 < cands.size()) {
            std::string ok = "ok_c" + std::to_string(j);
            std::string cond = copy(j, cands[j]);
            out << "(define-fun " << ok << " () Bool " << cond << ")\n";
            earlier.push_back(ok);
        }
    }
}

// ---- s-expression reading --------------------------------------------------

struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_list = false;
};

class Reader {
public:
    explicit Reader(std::string_view text) : t_(text) {}

    bool done()
    {
        skip();
        return i_ >= t_.size();
    }

    Sexp read()
    {
        skip();
        if (i_ >= t_.size())
            throw DecodeError("unexpected end of solver output");
        if (t_[i_] == '(') {
            ++i_;
            Sexp s;
            s.is_list = true;
            for (;;) {
                skip();
                if (i_ >= t_.size())
                    throw DecodeError("unbalanced parentheses in solver output");
                if (t_[i_] == ')') {
                    ++i_;
                    return s;
                }
                s.list.push_back(read());
            }
        }
        if (t_[i_] == ')')
            throw DecodeError("unexpected ')' in solver output");
        if (t_[i_] == '"') {
            std::size_t start = i_++;
            while (i_ < t_.size() && t_[i_] != '"')
                ++i_;
            ++i_;
            return Sexp{std::string(t_.substr(start, i_ - start)), {}, false};
        }
        std::size_t start = i_;
        while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != '(' && t_[i_] != ')')
            ++i_;
        return Sexp{std::string(t_.substr(start, i_ - start)), {}, false};
    }

private:
    void skip()
    {
        while (i_ < t_.size()) {
            if (std::isspace(static_cast<unsigned char>(t_[i_]))) {
                ++i_;
            } else if (t_[i_] == ';') {
                while (i_ < t_.size() && t_[i_] != '\n')
                    ++i_;
            } else {
                break;
            }
        }
    }

    std::string_view t_;
    std::size_t i_ = 0;
};

// nullopt for unsat; otherwise the indices i with f_s<i> = true.
std::optional<std::vector<long>> read_selection(std::string_view output)
{
    Reader r(output);
    if (r.done())
        throw DecodeError("empty solver output");
    Sexp status = r.read();
    if (status.is_list || (status.atom != "sat" && status.atom != "unsat" && status.atom != "unknown"))
        throw DecodeError("solver output does not start with sat/unsat");
    if (status.atom == "unsat")
        return std::nullopt;
    if (status.atom == "unknown")
        throw DecodeError("solver answered unknown");
    if (r.done())
        throw DecodeError("sat answer without a model");
    Sexp model = r.read();
    if (!model.is_list)
        throw DecodeError("malformed model");
    std::vector<Sexp> defs = model.list;
    if (!defs.empty() && !defs.front().is_list && defs.front().atom == "model")
        defs.erase(defs.begin());
    std::vector<long> out;
    for (const auto& d : defs) {
        if (!d.is_list || d.list.size() != 5 || d.list[0].atom != "define-fun")
            throw DecodeError("malformed model entry");
        const std::string& name = d.list[1].atom;
        if (name.rfind("f_s", 0) != 0)
            continue;
        const Sexp& body = d.list[4];
        if (body.is_list || (body.atom != "true" && body.atom != "false"))
            throw DecodeError("selector " + name + " has a non-boolean value");
        long idx;
        try {
            std::size_t used = 0;
            idx = std::stol(name.substr(3), &used);
            if (used != name.size() - 3)
                throw std::invalid_argument(name);
        } catch (const std::exception&) {
            throw DecodeError("malformed selector name " + name);
        }
        if (body.atom == "true")
            out.push_back(idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::string smt_real(const Rational& r)
{
    Rational c = r;
    c.canonicalize();
    auto lit = [](const mpz_class& z) {
        if (z < 0) {
            mpz_class a = -z;
            return "(- " + a.get_str() + ".0)";
        }
        return z.get_str() + ".0";
    };
    if (c.get_den() == 1)
        return lit(c.get_num());
    return "(/ " + lit(c.get_num()) + " " + c.get_den().get_str() + ".0)";
}

// ---------------------------------------------------------------------------

SmtInstance export_smt(const PacQuery& q, bool ordered)
{
    if (q.candidates == CandidatePolicy::PredicateTemplate)
        throw QueryError("predicate templates cannot be exported");
    const Dtmc& m = *q.model;
    StateSet E = effect_set(q);
    StateSet roots = resolve_roots(m, q.roots, q.explicit_roots);
    if (roots.empty())
        throw QueryError("root set is empty");
    auto inE = membership(m.size(), E);

    SmtInstance inst;
    inst.manifest = {
        {"f_s<i>", "cause selector: state i belongs to the cause"},
        {"pAW1_s<i>", "probability of reaching the cause before the effect"},
        {"pAW2_s<i>", "probability of eventually reaching the effect"},
        {"pAW_s<i>", "actual world: effect reached through the cause"},
        {"pCW_s<i>", "counterfactual world: effect reached avoiding the cause"},
        {"pEqW_s<i>_s<j>", "states i and j agree on W"},
        {"pST_s<i>", "stuttering step probability of state i"},
        {"pNEqW_s<i>_s<j>", "successors of i and j agree on W"},
        {"pStUeq_s<i>_s<j>", "j stutters until it agrees with partner i"},
    };
    for (std::size_t s = 0; s < m.size(); ++s)
        inst.manifest.push_back({"s" + std::to_string(s), m.states()[s].name});

    std::ostringstream out;
    out << "; probabilistic actual cause instance\n";
    write_manifest(out, inst.manifest);
    out << "; roots:";
    for (StateId r : roots)
        out << ' ' << m.state(r).name;
    out << "\n; effect:";
    for (StateId e : E)
        out << ' ' << m.state(e).name;
    out << "\n(set-logic QF_LRA)\n(set-option :produce-models true)\n";

    for (std::size_t s = 0; s < m.size(); ++s)
        out << "(declare-const " << sym("f", static_cast<StateId>(s)) << " Bool)\n";
    for (std::size_t s = 0; s < m.size(); ++s)
        declare_bounded(out, sym("pAW2", static_cast<StateId>(s)));
    for (std::size_t s = 0; s < m.size(); ++s) {
        auto sid = static_cast<StateId>(s);
        std::vector<std::string> terms;
        for (const auto& t : m.successors(sid))
            terms.push_back(weighted(t.prob, sym("pAW2", t.target)));
        bool stop = m.absorbing(sid);
        out << "(assert (= " << sym("pAW2", sid) << ' ' << (inE[s] ? "1.0" : stop ? "0.0" : sum_of(terms)) << "))\n";
    }

    std::vector<StateSet> cands = candidate_sets(q);
    std::vector<char> candidate(m.size(), 0);
    for (const auto& c : cands)
        for (StateId x : c)
            candidate[static_cast<std::size_t>(x)] = 1;

    const bool with_se = !q.contingencies.empty();
    std::unique_ptr<StutterSystem> sys;
    if (with_se)
        sys = std::make_unique<StutterSystem>(m, q.contingencies);

    // One copy of the cause-dependent families. `sel(s)` is the membership
    // of s as an SMT term; returns the PC1/PC2 condition over the roots.
    auto world = [&](const std::string& tag, const std::function<std::string(StateId)>& sel) {
        auto name = [&](const char* fam, StateId s) { return std::string(fam) + tag + "_s" + std::to_string(s); };
        for (const char* fam : {"pAW1", "pAW", "pCW"})
            for (std::size_t s = 0; s < m.size(); ++s)
                declare_bounded(out, name(fam, static_cast<StateId>(s)));
        for (std::size_t s = 0; s < m.size(); ++s) {
            auto sid = static_cast<StateId>(s);
            bool stop = inE[s] || m.absorbing(sid);
            auto rec = [&](const char* fam) {
                if (stop)
                    return std::string("0.0");
                std::vector<std::string> terms;
                for (const auto& t : m.successors(sid))
                    terms.push_back(weighted(t.prob, name(fam, t.target)));
                return sum_of(terms);
            };
            auto pick = [&](const std::string& yes, const std::string& no) {
                std::string f = sel(sid);
                if (f == "true")
                    return yes;
                if (f == "false")
                    return no;
                return "(ite " + f + ' ' + yes + ' ' + no + ")";
            };
            out << "(assert (= " << name("pAW1", sid) << ' ' << pick("1.0", rec("pAW1")) << "))\n";
            out << "(assert (= " << name("pAW", sid) << ' ' << pick(sym("pAW2", sid), rec("pAW")) << "))\n";
            if (inE[s])
                out << "(assert (= " << name("pCW", sid) << " 1.0))\n";
            else
                out << "(assert (= " << name("pCW", sid) << ' ' << pick("0.0", rec("pCW")) << "))\n";
        }
        std::vector<std::string> worlds;
        for (StateId a : roots) {
            std::vector<std::string> parts{"(> " + name("pAW", a) + " 0.0)"};
            for (StateId b : roots) {
                std::string cmp = "(> " + name("pAW", a) + " " + name("pCW", b) + ")";
                if (with_se) {
                    std::string ab = "_s" + std::to_string(a) + "_s" + std::to_string(b);
                    std::string ba = "_s" + std::to_string(b) + "_s" + std::to_string(a);
                    std::string se = "(and (<= pEqW" + ab + " (+ pNEqW" + ab + " pST_s" + std::to_string(a)
                                     + " pStUeq" + ab + ")) (<= pEqW" + ba + " (+ pNEqW" + ba + " pST_s"
                                     + std::to_string(b) + " pStUeq" + ba + ")))";
                    cmp = "(=> " + se + " " + cmp + ")";
                }
                parts.push_back(cmp);
            }
            worlds.push_back(and_of(parts));
        }
        return or_of(worlds);
    };

    if (with_se) {
        for (StateId a : roots) {
            out << "(define-fun pST_s" << a << " () Real " << smt_real(sys->st(a)) << ")\n";
            for (StateId b : roots) {
                std::string ab = "_s" + std::to_string(a) + "_s" + std::to_string(b);
                out << "(define-fun pEqW" << ab << " () Real " << (sys->eqw(a, b) ? "1.0" : "0.0") << ")\n";
                out << "(define-fun pNEqW" << ab << " () Real " << smt_real(sys->neqw(a, b)) << ")\n";
                out << "(define-fun pStUeq" << ab << " () Real " << smt_real(sys->stueq(a, b)) << ")\n";
            }
        }
    } else {
        out << "; W is empty: every pair of roots agrees\n";
    }

    std::string selected = world("", [](StateId s) { return sym("f", s); });

    std::vector<std::string> flags;
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (!candidate[s])
            out << "(assert (not " << sym("f", static_cast<StateId>(s)) << "))\n";
        else
            flags.push_back(sym("f", static_cast<StateId>(s)));
    }
    write_selection(out, flags, q.candidates, q.max_subset);
    out << "(assert " << selected << ")\n";
    if (ordered)
        write_order(out, cands, flags, [&](std::size_t j, const StateSet& c) {
            auto in = membership(m.size(), c);
            return world("_c" + std::to_string(j),
                         [&](StateId s) { return in[static_cast<std::size_t>(s)] ? "true" : "false"; });
        });
    out << "(check-sat)\n(get-model)\n";
    inst.text = out.str();
    return inst;
}

// ---------------------------------------------------------------------------

SmtInstance export_smt_abs(const Abstraction& a, const AbstractPacQuery& q, bool ordered)
{
    if (q.candidates == CandidatePolicy::PredicateTemplate)
        throw QueryError("predicate templates cannot be exported");
    const Mdp& mdp = a.mdp();
    const Dtmc& m = a.concrete();
    StateSet E = satisfying_set(q.effect, m);
    if (E.empty())
        throw QueryError("effect predicate '" + q.effect.to_string() + "' holds in no state");
    StateSet Ehat = a.lift(E);
    auto inE = membership(mdp.size(), Ehat);

    auto candidates = abstract_candidates(a, q);
    std::vector<char> candidate(mdp.size(), 0);
    for (const auto& c : candidates)
        for (StateId s : c)
            candidate[static_cast<std::size_t>(s)] = 1;
    StateSet roots;
    if (q.roots == RootPolicy::InitialOnly)
        roots = mdp.initial();
    else if (q.roots == RootPolicy::AllStates)
        for (std::size_t s = 0; s < mdp.size(); ++s)
            roots.push_back(static_cast<StateId>(s));
    else
        roots = a.lift(resolve_roots(m, q.roots, q.explicit_roots));

    SmtInstance inst;
    inst.manifest = {
        {"f_s<i>", "cause selector: abstract state i belongs to the cause"},
        {"pAWABS2_min_s<i>", "minimum probability of eventually reaching the effect"},
        {"pAWABS_min_s<i>", "actual world: minimum probability of the effect through the cause"},
        {"pCWABS_max_s<i>", "counterfactual world: maximum probability of the effect avoiding the cause"},
        {"<family>_s<i>_k<j>", "value at i once only actions j.. remain (ranked schedulers)"},
        {"q<family>_s<i>_k<j>", "value of the j-th action of i"},
    };
    for (std::size_t s = 0; s < mdp.size(); ++s)
        inst.manifest.push_back({"s" + std::to_string(s), a.states()[s].name});

    std::ostringstream out;
    out << "; probabilistic actual cause instance, abstract\n";
    write_manifest(out, inst.manifest);
    out << "; roots:";
    for (StateId r : roots)
        out << ' ' << a.state(r).name;
    out << "\n; effect:";
    for (StateId e : Ehat)
        out << ' ' << a.state(e).name;
    out << "\n(set-logic QF_LRA)\n(set-option :produce-models true)\n";
    for (std::size_t s = 0; s < mdp.size(); ++s)
        out << "(declare-const " << sym("f", static_cast<StateId>(s)) << " Bool)\n";

    // j-th value variable of a family at state s; j = 0 is the entry value.
    auto at = [](const std::string& fam, StateId s, std::size_t j) {
        std::string n = fam + "_s" + std::to_string(s);
        return j == 0 ? n : n + "_k" + std::to_string(j);
    };
    // first action index of t with rank above `rank`
    auto suffix = [&](StateId t, std::size_t rank) {
        auto acts = mdp.actions(t);
        std::size_t j = 0;
        while (j < acts.size() && acts[j].rank <= rank)
            ++j;
        if (j == acts.size())
            throw std::logic_error("no action left at " + a.state(t).name);
        return j;
    };

    // Bellman system of one family. `value(s, j, opt)` gives the defining
    // term of the suffix variable from its optimum `opt`, or "" to pin it.
    auto family = [&](const std::string& fam, bool minimize, const std::function<std::string(StateId)>& pinned,
                      const std::function<std::string(StateId, std::size_t, const std::string&)>& value) {
        for (std::size_t s = 0; s < mdp.size(); ++s) {
            auto sid = static_cast<StateId>(s);
            for (std::size_t j = 0; j < mdp.actions(sid).size(); ++j) {
                declare_bounded(out, at(fam, sid, j));
                if (pinned(sid).empty())
                    out << "(declare-const q" << at(fam, sid, j) << " Real)\n(declare-const o" << at(fam, sid, j)
                        << " Real)\n";
            }
        }
        for (std::size_t s = 0; s < mdp.size(); ++s) {
            auto sid = static_cast<StateId>(s);
            auto acts = mdp.actions(sid);
            for (std::size_t j = 0; j < acts.size(); ++j) {
                const std::string v = at(fam, sid, j);
                if (std::string pin = pinned(sid); !pin.empty()) {
                    out << "(assert (= " << v << ' ' << pin << "))\n";
                    continue;
                }
                const std::string qn = "q" + v;
                const std::string on = "o" + v;
                const Action& act = acts[j];
                if (act.terminal) {
                    out << "(assert (= " << qn << " 0.0))\n";
                } else {
                    std::vector<std::string> terms;
                    for (const auto& t : act.succ)
                        terms.push_back(weighted(t.prob, at(fam, t.target, suffix(t.target, act.rank))));
                    out << "(assert (= " << qn << ' ' << sum_of(terms) << "))\n";
                }
                if (j + 1 == acts.size()) {
                    out << "(assert (= " << on << ' ' << qn << "))\n";
                } else {
                    const std::string next = "o" + at(fam, sid, j + 1);
                    const char* rel = minimize ? "<=" : ">=";
                    out << "(assert (and (" << rel << ' ' << on << ' ' << qn << ") (" << rel << ' ' << on << ' '
                        << next << ") (or (= " << on << ' ' << qn << ") (= " << on << ' ' << next << "))))\n";
                }
                out << "(assert (= " << v << ' ' << value(sid, j, on) << "))\n";
            }
        }
    };
    auto none = [](StateId) { return std::string(); };
    auto pick = [](const std::string& f, const std::string& yes, const std::string& no) {
        if (f == "true")
            return yes;
        if (f == "false")
            return no;
        return "(ite " + f + ' ' + yes + ' ' + no + ")";
    };

    family("pAWABS2_min", true, [&](StateId s) { return inE[static_cast<std::size_t>(s)] ? std::string("1.0") : ""; },
           [](StateId, std::size_t, const std::string& opt) { return opt; });

    std::unique_ptr<AbstractStutterSystem> se;
    if (!q.contingencies.empty() && q.strategy == WStrategy::WPreserving && a.mode() == AbsMode::WPreserving) {
        auto w = w_valuations(m, q.contingencies);
        std::vector<WValuation> abs_w;
        for (const auto& s : a.states())
            abs_w.push_back(w[static_cast<std::size_t>(s.members.front())]);
        se = std::make_unique<AbstractStutterSystem>(mdp, std::move(abs_w));
        for (StateId x : roots) {
            out << "(define-fun pST_s" << x << " () Real " << smt_real(se->st(x)) << ")\n";
            for (StateId y : roots) {
                std::string xy = "_s" + std::to_string(x) + "_s" + std::to_string(y);
                out << "(define-fun pEqW" << xy << " () Real " << (se->eqw(x, y) ? "1.0" : "0.0") << ")\n";
                out << "(define-fun pNEqW" << xy << " () Real " << smt_real(se->neqw(x, y)) << ")\n";
                out << "(define-fun pStUeq" << xy << " () Real " << smt_real(se->stueq(x, y)) << ")\n";
            }
        }
    } else {
        out << "; worlds agree on W by construction\n";
    }

    auto world = [&](const std::string& tag, const std::function<std::string(StateId)>& sel) {
        const std::string aw = "pAWABS_min" + tag;
        const std::string cw = "pCWABS_max" + tag;
        family(aw, true, none, [&](StateId s, std::size_t j, const std::string& opt) {
            bool e = inE[static_cast<std::size_t>(s)];
            return pick(sel(s), at("pAWABS2_min", s, j), e ? std::string("0.0") : opt);
        });
        family(cw, false, [&](StateId s) { return inE[static_cast<std::size_t>(s)] ? std::string("1.0") : ""; },
               [&](StateId s, std::size_t, const std::string& opt) { return pick(sel(s), "0.0", opt); });

        std::vector<std::string> worlds;
        for (StateId x : roots) {
            std::vector<std::string> parts{"(> " + at(aw, x, 0) + " 0.0)"};
            for (StateId y : roots) {
                std::string cmp = "(> " + at(aw, x, 0) + " " + at(cw, y, 0) + ")";
                if (se) {
                    std::string xy = "_s" + std::to_string(x) + "_s" + std::to_string(y);
                    std::string yx = "_s" + std::to_string(y) + "_s" + std::to_string(x);
                    cmp = "(=> (and (<= pEqW" + xy + " (+ pNEqW" + xy + " pST_s" + std::to_string(x) + " pStUeq"
                          + xy + ")) (<= pEqW" + yx + " (+ pNEqW" + yx + " pST_s" + std::to_string(y) + " pStUeq"
                          + yx + "))) " + cmp + ")";
                }
                parts.push_back(cmp);
            }
            worlds.push_back(and_of(parts));
        }
        return or_of(worlds);
    };

    std::string selected = world("", [](StateId s) { return sym("f", s); });

    std::vector<std::string> flags;
    for (std::size_t s = 0; s < mdp.size(); ++s) {
        if (candidate[s])
            flags.push_back(sym("f", static_cast<StateId>(s)));
        else
            out << "(assert (not " << sym("f", static_cast<StateId>(s)) << "))\n";
    }
    write_selection(out, flags, q.candidates, q.max_subset);
    out << "(assert " << selected << ")\n";
    if (ordered)
        write_order(out, candidates, flags, [&](std::size_t j, const StateSet& c) {
            auto in = membership(mdp.size(), c);
            return world("_c" + std::to_string(j),
                         [&](StateId s) { return in[static_cast<std::size_t>(s)] ? "true" : "false"; });
        });
    out << "(check-sat)\n(get-model)\n";
    inst.text = out.str();
    return inst;
}

// ---------------------------------------------------------------------------

std::optional<CauseReport> decode_smt_model(const PacQuery& q, std::string_view output)
{
    auto sel = read_selection(output);
    if (!sel)
        return std::nullopt;
    const Dtmc& m = *q.model;
    StateSet cause;
    for (long i : *sel) {
        if (i < 0 || static_cast<std::size_t>(i) >= m.size())
            throw DecodeError("selector index " + std::to_string(i) + " is out of range");
        cause.push_back(static_cast<StateId>(i));
    }
    if (cause.empty())
        throw DecodeError("model selects no state");
    CheckResult r;
    try {
        r = check_cause(q, cause);
    } catch (const QueryError& e) {
        throw DecodeError(std::string("verification mismatch: ") + e.what());
    }
    if (!r.confirmed)
        throw DecodeError("verification mismatch: " + describe(m, cause) + " is not a cause"
                          + (r.diagnostic.empty() ? "" : " (" + r.diagnostic + ")"));
    return r.report;
}

std::optional<CauseReport> decode_smt_model_abs(const Abstraction& a, const AbstractPacQuery& q,
                                                std::string_view output)
{
    auto sel = read_selection(output);
    if (!sel)
        return std::nullopt;
    StateSet cause;
    for (long i : *sel) {
        if (i < 0 || static_cast<std::size_t>(i) >= a.size())
            throw DecodeError("selector index " + std::to_string(i) + " is out of range");
        cause.push_back(static_cast<StateId>(i));
    }
    if (cause.empty())
        throw DecodeError("model selects no state");
    AbsCheckResult abs;
    CheckResult con;
    try {
        abs = check_cause_abs(a, q, cause);
        if (abs.confirmed)
            con = check_cause(concrete_query(a, q), a.concretize(cause));
    } catch (const QueryError& e) {
        throw DecodeError(std::string("verification mismatch: ") + e.what());
    }
    if (!abs.confirmed || !con.confirmed)
        throw DecodeError("verification mismatch: " + describe(a, cause) + " is not a cause"
                          + (abs.diagnostic.empty() ? "" : " (" + abs.diagnostic + ")"));
    for (StateId s : cause)
        con.report->abstract_cause.push_back(a.state(s).name);
    return con.report;
}

} // namespace pac
