#include "pac/subgraph.hpp"

#include "pac/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pac {

namespace {

using Node = std::pair<StateId, std::size_t>; // concrete state, trace position

struct Group {
    std::vector<WValuation> signature;
    std::set<Node> nodes;
    std::map<std::pair<Node, Node>, Rational> edges;
    std::set<Node> roots;
    std::size_t paths = 0;
};

} // namespace

std::vector<Subgraph> enumerate_subgraphs(const Dtmc& m, const std::vector<Predicate>& W, std::size_t path_cap)
{
    auto val = w_valuations(m, W);
    std::vector<Group> groups;
    std::map<std::vector<WValuation>, std::size_t> by_sig;
    std::size_t total = 0;

    std::vector<StateId> path;
    std::vector<std::size_t> pos; // trace position of each path element
    std::vector<WValuation> sig;

    auto finish = [&] {
        if (++total > path_cap)
            throw GuardExceeded("more than " + std::to_string(path_cap) + " paths");
        auto [it, fresh] = by_sig.emplace(sig, groups.size());
        if (fresh) {
            groups.emplace_back();
            groups.back().signature = sig;
        }
        Group& g = groups[it->second];
        ++g.paths;
        g.roots.insert({path.front(), 0});
        for (std::size_t i = 0; i < path.size(); ++i) {
            Node a{path[i], pos[i]};
            g.nodes.insert(a);
            if (i + 1 < path.size()) {
                Node b{path[i + 1], pos[i + 1]};
                for (const auto& t : m.successors(path[i]))
                    if (t.target == path[i + 1])
                        g.edges[{a, b}] = t.prob;
            }
        }
        StateId last = path.back();
        if (m.absorbing(last)) {
            Node a{last, pos.back()};
            g.edges[{a, a}] = 1;
        }
    };

    auto dfs = [&](auto& self, StateId s) -> void {
        auto i = static_cast<std::size_t>(s);
        bool grew = sig.empty() || sig.back() != val[i];
        if (grew)
            sig.push_back(val[i]);
        path.push_back(s);
        pos.push_back(sig.size() - 1);

        std::vector<StateId> next;
        if (!m.absorbing(s))
            for (const auto& t : m.successors(s))
                next.push_back(t.target);
        std::sort(next.begin(), next.end());
        if (next.empty())
            finish();
        for (StateId t : next)
            self(self, t);

        path.pop_back();
        pos.pop_back();
        if (grew)
            sig.pop_back();
    };
    for (StateId r : m.initial())
        dfs(dfs, r);

    std::vector<Subgraph> out;
    for (auto& g : groups) {
        std::map<StateId, int> copies;
        for (const auto& n : g.nodes)
            ++copies[n.first];
        DtmcBuilder b(m.vars());
        std::map<Node, StateId> id;
        std::vector<StateId> origin;
        for (const auto& n : g.nodes) {
            const State& st = m.state(n.first);
            std::string name = st.name;
            if (copies[n.first] > 1)
                name += "@" + std::to_string(n.second);
            id[n] = b.add_state(name, st.values, st.labels);
            origin.push_back(n.first);
        }
        for (const auto& [e, p] : g.edges)
            b.add_edge(id[e.first], id[e.second], p);
        for (const auto& r : g.roots)
            b.add_initial(id[r]);
        out.push_back(Subgraph{g.signature, b.build(false), std::move(origin), g.paths});
    }
    return out;
}

std::string signature_string(const std::vector<WValuation>& sig, const std::vector<Predicate>& W)
{
    auto lit = [&](std::size_t k, char v) {
        std::string name = W[k].to_string();
        if (W[k].kind() != Predicate::Kind::Label && W[k].kind() != Predicate::Kind::True
            && W[k].kind() != Predicate::Kind::False)
            name = "(" + name + ")";
        return v ? name : "¬" + name;
    };
    std::string out = "(";
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i)
            out += ",";
        if (W.size() == 1) {
            out += lit(0, sig[i][0]);
        } else {
            out += "[";
            for (std::size_t k = 0; k < W.size(); ++k) {
                if (k)
                    out += " ";
                out += lit(k, sig[i][k]);
            }
            out += "]";
        }
    }
    return out + ")";
}

} // namespace pac
