#pragma once

#include "pac/rational.hpp"

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pac {

enum class Cmp { Lt, Le, Eq, Ne, Ge, Gt };

/// Raised when a predicate names something that is neither a variable nor a
/// proposition of the model it is evaluated on.
class UnboundVariable : public std::runtime_error {
public:
    explicit UnboundVariable(const std::string& name)
        : std::runtime_error("unbound variable '" + name + "'"), name_(name)
    {
    }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// What a predicate may refer to: the ordered variable names of a model and
/// its atomic propositions.
struct Scope {
    std::span<const std::string> vars;
    const std::set<std::string>* props = nullptr;
};

class CompiledPredicate;

/// Boolean expression over `var CMP constant` atoms and proposition labels.
/// Immutable; copies share structure.
class Predicate {
public:
    enum class Kind { True, False, Compare, Label, And, Or, Not };

    Predicate(); // TRUE

    static Predicate constant(bool value);
    static Predicate compare(std::string name, Cmp op, Rational value);
    static Predicate label(std::string name);
    static Predicate conj(Predicate a, Predicate b);
    static Predicate disj(Predicate a, Predicate b);
    static Predicate negate(Predicate a);
    static Predicate conj_all(const std::vector<Predicate>& parts);
    static Predicate disj_all(const std::vector<Predicate>& parts);

    Kind kind() const;
    const std::string& name() const;
    Cmp op() const;
    const Rational& value() const;
    const Predicate& lhs() const;
    const Predicate& rhs() const;

    /// Resolves names against a scope; throws UnboundVariable.
    CompiledPredicate compile(const Scope& scope) const;

    /// Every variable or label name referenced.
    std::set<std::string> names() const;

    /// Same predicate with every numeric constant multiplied by `factor`.
    Predicate scaled(const Rational& factor) const;

    std::string to_string() const;

private:
    struct Node;
    explicit Predicate(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// Flattened, name-resolved form used in hot loops.
class CompiledPredicate {
public:
    bool eval(std::span<const Rational> values, const std::set<std::string>& labels) const;

    struct Op {
        Predicate::Kind kind;
        int var = -1; // Compare on a variable
        std::string label; // Label, or Compare on a proposition
        Cmp cmp = Cmp::Eq;
        Rational value;
    };

private:
    friend class Predicate;
    std::vector<Op> program_; // postfix
};

/// Parses `pos < 0.6 && halt`, `!(vel >= 3/100) || done`, `true`.
/// Throws SyntaxError with the 1-based column of the offending token.
Predicate parse_predicate(std::string_view text);

/// Splits on `;` and parses each non-empty piece.
std::vector<Predicate> parse_predicate_list(std::string_view text);

bool compare(const Rational& lhs, Cmp op, const Rational& rhs);
std::string_view to_string(Cmp op);

} // namespace pac
