#include "pac/predicate.hpp"

#include "pac/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace pac {

struct Predicate::Node {
    Kind kind = Kind::True;
    std::string name;
    Cmp op = Cmp::Eq;
    Rational value;
    Predicate lhs_child;
    Predicate rhs_child;

    // Children default to TRUE which needs a node; break the recursion.
    explicit Node(Kind k) : kind(k), lhs_child(nullptr), rhs_child(nullptr) {}
};

Predicate::Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Predicate::Predicate() : Predicate(constant(true)) {}

Predicate Predicate::constant(bool value)
{
    static const auto t = std::make_shared<const Node>(Kind::True);
    static const auto f = std::make_shared<const Node>(Kind::False);
    return Predicate(value ? t : f);
}

Predicate Predicate::compare(std::string name, Cmp op, Rational value)
{
    auto n = std::make_shared<Node>(Kind::Compare);
    n->name = std::move(name);
    n->op = op;
    n->value = std::move(value);
    return Predicate(std::move(n));
}

Predicate Predicate::label(std::string name)
{
    auto n = std::make_shared<Node>(Kind::Label);
    n->name = std::move(name);
    return Predicate(std::move(n));
}

Predicate Predicate::conj(Predicate a, Predicate b)
{
    auto n = std::make_shared<Node>(Kind::And);
    n->lhs_child = std::move(a);
    n->rhs_child = std::move(b);
    return Predicate(std::move(n));
}

Predicate Predicate::disj(Predicate a, Predicate b)
{
    auto n = std::make_shared<Node>(Kind::Or);
    n->lhs_child = std::move(a);
    n->rhs_child = std::move(b);
    return Predicate(std::move(n));
}

Predicate Predicate::negate(Predicate a)
{
    auto n = std::make_shared<Node>(Kind::Not);
    n->lhs_child = std::move(a);
    return Predicate(std::move(n));
}

Predicate Predicate::conj_all(const std::vector<Predicate>& parts)
{
    if (parts.empty())
        return constant(true);
    Predicate acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        acc = conj(acc, parts[i]);
    return acc;
}

Predicate Predicate::disj_all(const std::vector<Predicate>& parts)
{
    if (parts.empty())
        return constant(false);
    Predicate acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        acc = disj(acc, parts[i]);
    return acc;
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
const std::string& Predicate::name() const { return node_->name; }
Cmp Predicate::op() const { return node_->op; }
const Rational& Predicate::value() const { return node_->value; }
const Predicate& Predicate::lhs() const { return node_->lhs_child; }
const Predicate& Predicate::rhs() const { return node_->rhs_child; }

namespace {

void collect_names(const Predicate& p, std::set<std::string>& out)
{
    switch (p.kind()) {
    case Predicate::Kind::Compare:
    case Predicate::Kind::Label:
        out.insert(p.name());
        break;
    case Predicate::Kind::And:
    case Predicate::Kind::Or:
        collect_names(p.lhs(), out);
        collect_names(p.rhs(), out);
        break;
    case Predicate::Kind::Not:
        collect_names(p.lhs(), out);
        break;
    default:
        break;
    }
}

int precedence(Predicate::Kind k)
{
    switch (k) {
    case Predicate::Kind::Or:
        return 1;
    case Predicate::Kind::And:
        return 2;
    case Predicate::Kind::Not:
        return 3;
    default:
        return 4;
    }
}

std::string render(const Predicate& p, int parent)
{
    std::string out;
    switch (p.kind()) {
    case Predicate::Kind::True:
        return "true";
    case Predicate::Kind::False:
        return "false";
    case Predicate::Kind::Label:
        return p.name();
    case Predicate::Kind::Compare:
        return p.name() + " " + std::string(to_string(p.op())) + " " + to_display(p.value());
    case Predicate::Kind::Not:
        // a comparison under negation needs parentheses to re-parse
        if (p.lhs().kind() == Predicate::Kind::Compare)
            return "!(" + render(p.lhs(), 0) + ")";
        out = "!" + render(p.lhs(), 3);
        break;
    case Predicate::Kind::And:
        out = render(p.lhs(), 2) + " && " + render(p.rhs(), 2);
        break;
    case Predicate::Kind::Or:
        out = render(p.lhs(), 1) + " || " + render(p.rhs(), 1);
        break;
    }
    return precedence(p.kind()) < parent ? "(" + out + ")" : out;
}

void emit(const Predicate& p, const Scope& scope, std::vector<CompiledPredicate::Op>& program);

} // namespace

std::set<std::string> Predicate::names() const
{
    std::set<std::string> out;
    collect_names(*this, out);
    return out;
}

Predicate Predicate::scaled(const Rational& factor) const
{
    switch (kind()) {
    case Kind::Compare:
        return compare(name(), op(), value() * factor);
    case Kind::And:
        return conj(lhs().scaled(factor), rhs().scaled(factor));
    case Kind::Or:
        return disj(lhs().scaled(factor), rhs().scaled(factor));
    case Kind::Not:
        return negate(lhs().scaled(factor));
    default:
        return *this;
    }
}

std::string Predicate::to_string() const
{
    return render(*this, 0);
}

bool compare(const Rational& lhs, Cmp op, const Rational& rhs)
{
    switch (op) {
    case Cmp::Lt:
        return lhs < rhs;
    case Cmp::Le:
        return lhs <= rhs;
    case Cmp::Eq:
        return lhs == rhs;
    case Cmp::Ne:
        return lhs != rhs;
    case Cmp::Ge:
        return lhs >= rhs;
    case Cmp::Gt:
        return lhs > rhs;
    }
    return false;
}

std::string_view to_string(Cmp op)
{
    switch (op) {
    case Cmp::Lt:
        return "<";
    case Cmp::Le:
        return "<=";
    case Cmp::Eq:
        return "=";
    case Cmp::Ne:
        return "!=";
    case Cmp::Ge:
        return ">=";
    case Cmp::Gt:
        return ">";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Compilation and evaluation

namespace {

void emit(const Predicate& p, const Scope& scope, std::vector<CompiledPredicate::Op>& program)
{
    using Kind = Predicate::Kind;
    CompiledPredicate::Op op{p.kind()};
    switch (p.kind()) {
    case Kind::Compare:
    case Kind::Label: {
        auto it = std::find(scope.vars.begin(), scope.vars.end(), p.name());
        if (it != scope.vars.end()) {
            op.var = static_cast<int>(it - scope.vars.begin());
        } else if (scope.props && scope.props->count(p.name())) {
            op.label = p.name();
        } else {
            throw UnboundVariable(p.name());
        }
        if (p.kind() == Kind::Compare) {
            op.cmp = p.op();
            op.value = p.value();
        } else if (op.var >= 0) {
            // A bare variable name reads as "non-zero".
            op.kind = Kind::Compare;
            op.cmp = Cmp::Ne;
            op.value = 0;
        }
        break;
    }
    case Kind::And:
    case Kind::Or:
        emit(p.lhs(), scope, program);
        emit(p.rhs(), scope, program);
        break;
    case Kind::Not:
        emit(p.lhs(), scope, program);
        break;
    default:
        break;
    }
    program.push_back(std::move(op));
}

} // namespace

CompiledPredicate Predicate::compile(const Scope& scope) const
{
    CompiledPredicate out;
    emit(*this, scope, out.program_);
    return out;
}

bool CompiledPredicate::eval(std::span<const Rational> values, const std::set<std::string>& labels) const
{
    using Kind = Predicate::Kind;
    // Predicates are tiny; a fixed stack of bools is plenty.
    std::vector<char> stack;
    stack.reserve(program_.size());
    for (const auto& op : program_) {
        switch (op.kind) {
        case Kind::True:
            stack.push_back(1);
            break;
        case Kind::False:
            stack.push_back(0);
            break;
        case Kind::Label:
            stack.push_back(labels.count(op.label) ? 1 : 0);
            break;
        case Kind::Compare: {
            if (op.var >= 0) {
                stack.push_back(compare(values[static_cast<std::size_t>(op.var)], op.cmp, op.value));
            } else {
                Rational bit = labels.count(op.label) ? 1 : 0;
                stack.push_back(compare(bit, op.cmp, op.value));
            }
            break;
        }
        case Kind::Not:
            stack.back() = !stack.back();
            break;
        case Kind::And:
        case Kind::Or: {
            char b = stack.back();
            stack.pop_back();
            stack.back() = op.kind == Kind::And ? (stack.back() && b) : (stack.back() || b);
            break;
        }
        }
    }
    return stack.back() != 0;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum Type { Ident, Number, Op, LParen, RParen, End } type;
    std::string text;
    int column;
};

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto col = [&](std::size_t at) { return static_cast<int>(at) + 1; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.'))
                ++i;
            out.push_back({Token::Ident, std::string(s.substr(start, i - start)), col(start)});
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.'
                   || ((c == '-' || c == '+') && i + 1 < s.size()
                       && (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '.'))) {
            ++i;
            while (i < s.size()) {
                char d = s[i];
                if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == '/') {
                    ++i;
                } else if ((d == 'e' || d == 'E') && i + 1 < s.size()) {
                    ++i;
                    if (s[i] == '-' || s[i] == '+')
                        ++i;
                } else {
                    break;
                }
            }
            out.push_back({Token::Number, std::string(s.substr(start, i - start)), col(start)});
        } else if (c == '(') {
            out.push_back({Token::LParen, "(", col(i++)});
        } else if (c == ')') {
            out.push_back({Token::RParen, ")", col(i++)});
        } else {
            static constexpr std::string_view ops[] = {"&&", "||", "<=", ">=", "==", "!=", "<", ">", "=", "!"};
            bool matched = false;
            for (auto op : ops) {
                if (s.substr(i, op.size()) == op) {
                    out.push_back({Token::Op, std::string(op), col(i)});
                    i += op.size();
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw SyntaxError("unexpected character '" + std::string(1, c) + "'", 1, col(i));
        }
    }
    out.push_back({Token::End, "", col(s.size())});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    Predicate parse()
    {
        Predicate p = parse_or();
        if (peek().type != Token::End)
            fail("unexpected '" + peek().text + "'");
        return p;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, 1, peek().column); }

    bool accept_op(std::string_view op)
    {
        if (peek().type == Token::Op && peek().text == op) {
            ++pos_;
            return true;
        }
        return false;
    }

    Predicate parse_or()
    {
        Predicate acc = parse_and();
        while (accept_op("||"))
            acc = Predicate::disj(acc, parse_and());
        return acc;
    }

    Predicate parse_and()
    {
        Predicate acc = parse_unary();
        while (accept_op("&&"))
            acc = Predicate::conj(acc, parse_unary());
        return acc;
    }

    Predicate parse_unary()
    {
        if (accept_op("!"))
            return Predicate::negate(parse_unary());
        if (peek().type == Token::LParen) {
            next();
            Predicate inner = parse_or();
            if (peek().type != Token::RParen)
                fail("expected ')'");
            next();
            return inner;
        }
        return parse_atom();
    }

    std::optional<Cmp> parse_cmp()
    {
        if (peek().type != Token::Op)
            return std::nullopt;
        const std::string& t = peek().text;
        std::optional<Cmp> op;
        if (t == "<")
            op = Cmp::Lt;
        else if (t == "<=")
            op = Cmp::Le;
        else if (t == "=" || t == "==")
            op = Cmp::Eq;
        else if (t == "!=")
            op = Cmp::Ne;
        else if (t == ">=")
            op = Cmp::Ge;
        else if (t == ">")
            op = Cmp::Gt;
        if (op)
            ++pos_;
        return op;
    }

    Rational number(const Token& tok)
    {
        try {
            return parse_rational(tok.text);
        } catch (const std::invalid_argument&) {
            throw SyntaxError("malformed number '" + tok.text + "'", 1, tok.column);
        }
    }

    static Cmp flip(Cmp op)
    {
        switch (op) {
        case Cmp::Lt:
            return Cmp::Gt;
        case Cmp::Le:
            return Cmp::Ge;
        case Cmp::Ge:
            return Cmp::Le;
        case Cmp::Gt:
            return Cmp::Lt;
        default:
            return op;
        }
    }

    Predicate parse_atom()
    {
        const Token& tok = peek();
        if (tok.type == Token::Ident) {
            next();
            if (tok.text == "true")
                return Predicate::constant(true);
            if (tok.text == "false")
                return Predicate::constant(false);
            if (auto op = parse_cmp()) {
                if (peek().type != Token::Number)
                    fail("expected a number after comparison");
                return Predicate::compare(tok.text, *op, number(next()));
            }
            return Predicate::label(tok.text);
        }
        if (tok.type == Token::Number) {
            Rational lhs = number(next());
            auto op = parse_cmp();
            if (!op)
                fail("expected a comparison operator");
            if (peek().type != Token::Ident)
                fail("expected a variable name");
            return Predicate::compare(next().text, flip(*op), lhs);
        }
        if (tok.type == Token::End)
            fail("unexpected end of predicate");
        fail("unexpected '" + tok.text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

Predicate parse_predicate(std::string_view text)
{
    return Parser(text).parse();
}

std::vector<Predicate> parse_predicate_list(std::string_view text)
{
    std::vector<Predicate> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto piece = text.substr(start, end - start);
        if (piece.find_first_not_of(" \t") != std::string_view::npos)
            out.push_back(parse_predicate(piece));
        start = end + 1;
    }
    return out;
}

} // namespace pac
