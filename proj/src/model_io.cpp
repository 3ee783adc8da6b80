#include "pac/model_io.hpp"

#include "pac/errors.hpp"

#include "json.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace pac {

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> split_line(std::string_view line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i >= line.size() || line[i] == '#')
            break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return out;
}

struct PendingEdge {
    std::string from, to;
    Rational prob;
    int line, column;
};

Rational number_at(const Token& tok, int line)
{
    try {
        return parse_rational(tok.text);
    } catch (const std::invalid_argument&) {
        throw SyntaxError("malformed number '" + tok.text + "'", line, tok.column);
    }
}

Dtmc assemble(std::vector<std::string> vars, std::vector<State> states, const std::vector<PendingEdge>& edges,
              const std::vector<std::pair<std::string, std::pair<int, int>>>& inits, bool stochastic)
{
    std::map<std::string, StateId> index;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!index.emplace(states[i].name, static_cast<StateId>(i)).second)
            throw ValidationError("unique-names", "state " + states[i].name + " declared twice");
    }
    std::vector<std::vector<Transition>> succ(states.size());
    for (const auto& e : edges) {
        auto a = index.find(e.from);
        auto b = index.find(e.to);
        if (a == index.end() || b == index.end())
            throw ValidationError("unknown-state", std::to_string(e.line) + ":" + std::to_string(e.column)
                                                       + ": edge " + e.from + " -> " + e.to
                                                       + " names an undeclared state");
        succ[static_cast<std::size_t>(a->second)].push_back(Transition{b->second, e.prob});
    }
    std::vector<StateId> initial;
    for (const auto& [name, pos] : inits) {
        auto it = index.find(name);
        if (it == index.end())
            throw ValidationError("unknown-state", std::to_string(pos.first) + ":" + std::to_string(pos.second)
                                                       + ": initial state " + name + " is undeclared");
        initial.push_back(it->second);
    }
    return Dtmc(std::move(vars), std::move(states), std::move(succ), std::move(initial), stochastic);
}

Dtmc parse_text(std::string_view text)
{
    std::vector<std::string> vars;
    bool have_vars = false;
    bool stochastic = true;
    std::vector<State> states;
    std::vector<PendingEdge> edges;
    std::vector<std::pair<std::string, std::pair<int, int>>> inits;

    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos = end + 1;
        ++lineno;

        auto toks = split_line(line);
        if (toks.empty())
            continue;
        const std::string& kw = toks[0].text;
        if (kw == "vars") {
            if (have_vars)
                throw SyntaxError("duplicate vars declaration", lineno, toks[0].column);
            have_vars = true;
            for (std::size_t i = 1; i < toks.size(); ++i)
                vars.push_back(toks[i].text);
        } else if (kw == "state") {
            if (!have_vars)
                throw SyntaxError("state before vars declaration", lineno, toks[0].column);
            if (toks.size() < 2)
                throw SyntaxError("state needs an id", lineno, toks[0].column + 5);
            State st;
            st.name = toks[1].text;
            std::size_t i = 2;
            for (; i < toks.size() && toks[i].text != "labels:"; ++i)
                st.values.push_back(number_at(toks[i], lineno));
            if (i < toks.size())
                for (++i; i < toks.size(); ++i)
                    st.labels.insert(toks[i].text);
            states.push_back(std::move(st));
        } else if (kw == "trans") {
            if (toks.size() != 4) {
                int col = toks.size() > 4 ? toks[4].column : static_cast<int>(line.size()) + 1;
                throw SyntaxError("trans expects: trans <from> <to> <prob>", lineno, col);
            }
            edges.push_back({toks[1].text, toks[2].text, number_at(toks[3], lineno), lineno, toks[0].column});
        } else if (kw == "init") {
            if (toks.size() < 2)
                throw SyntaxError("init needs a state id", lineno, toks[0].column + 4);
            for (std::size_t i = 1; i < toks.size(); ++i)
                inits.push_back({toks[i].text, {lineno, toks[i].column}});
        } else if (kw == "substochastic") {
            stochastic = false;
        } else {
            throw SyntaxError("unknown directive '" + kw + "'", lineno, toks[0].column);
        }
    }
    if (!have_vars)
        throw SyntaxError("missing vars declaration", lineno, 1);
    return assemble(std::move(vars), std::move(states), edges, inits, stochastic);
}

Rational json_number(const nlohmann::json& v)
{
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number())
        return parse_rational(v.dump());
    throw std::invalid_argument("expected a number or a string");
}

Dtmc parse_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset only; report it as a column on line 1
        throw SyntaxError(e.what(), 1, static_cast<int>(e.byte));
    }
    try {
        std::vector<std::string> vars = doc.at("vars").get<std::vector<std::string>>();
        std::vector<State> states;
        for (const auto& s : doc.at("states")) {
            State st;
            st.name = s.at("id").get<std::string>();
            for (const auto& v : s.at("values"))
                st.values.push_back(json_number(v));
            if (s.contains("labels"))
                for (const auto& l : s.at("labels"))
                    st.labels.insert(l.get<std::string>());
            states.push_back(std::move(st));
        }
        std::vector<PendingEdge> edges;
        for (const auto& t : doc.at("trans")) {
            if (!t.is_array() || t.size() != 3)
                throw std::invalid_argument("trans entries are [from, to, prob]");
            edges.push_back({t[0].get<std::string>(), t[1].get<std::string>(), json_number(t[2]), 1, 1});
        }
        std::vector<std::pair<std::string, std::pair<int, int>>> inits;
        if (doc.contains("init"))
            for (const auto& i : doc.at("init"))
                inits.push_back({i.get<std::string>(), {1, 1}});
        bool stochastic = !doc.contains("substochastic") || !doc.at("substochastic").get<bool>();
        return assemble(std::move(vars), std::move(states), edges, inits, stochastic);
    } catch (const nlohmann::json::exception& e) {
        throw SyntaxError(std::string("bad model schema: ") + e.what(), 1, 1);
    } catch (const std::invalid_argument& e) {
        throw SyntaxError(std::string("bad model schema: ") + e.what(), 1, 1);
    }
}

} // namespace

Dtmc parse_model(std::string_view text)
{
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    if (i < text.size() && text[i] == '{')
        return parse_json(text);
    return parse_text(text);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Dtmc load_model(const std::filesystem::path& path)
{
    return parse_model(read_file(path));
}

std::string serialize_text(const Dtmc& m)
{
    std::ostringstream out;
    out << "vars";
    for (const auto& v : m.vars())
        out << ' ' << v;
    out << '\n';
    if (!m.stochastic())
        out << "substochastic\n";
    for (const auto& st : m.states()) {
        out << "state " << st.name;
        for (const auto& v : st.values)
            out << ' ' << to_string(v);
        out << " labels:";
        for (const auto& l : st.labels)
            out << ' ' << l;
        out << '\n';
    }
    for (std::size_t s = 0; s < m.size(); ++s)
        for (const auto& t : m.successors(static_cast<StateId>(s)))
            out << "trans " << m.states()[s].name << ' ' << m.state(t.target).name << ' ' << to_string(t.prob)
                << '\n';
    for (StateId s : m.initial())
        out << "init " << m.state(s).name << '\n';
    return out.str();
}

std::string serialize_json(const Dtmc& m)
{
    nlohmann::json doc;
    doc["vars"] = m.vars();
    auto states = nlohmann::json::array();
    for (const auto& st : m.states()) {
        nlohmann::json s;
        s["id"] = st.name;
        auto vals = nlohmann::json::array();
        for (const auto& v : st.values)
            vals.push_back(to_string(v));
        s["values"] = vals;
        s["labels"] = st.labels;
        states.push_back(s);
    }
    doc["states"] = states;
    auto trans = nlohmann::json::array();
    for (std::size_t s = 0; s < m.size(); ++s)
        for (const auto& t : m.successors(static_cast<StateId>(s)))
            trans.push_back({m.states()[s].name, m.state(t.target).name, to_string(t.prob)});
    doc["trans"] = trans;
    auto init = nlohmann::json::array();
    for (StateId s : m.initial())
        init.push_back(m.state(s).name);
    doc["init"] = init;
    if (!m.stochastic())
        doc["substochastic"] = true;
    return doc.dump(1) + "\n";
}

} // namespace pac
