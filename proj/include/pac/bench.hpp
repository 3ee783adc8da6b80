#pragma once

#include "pac/concrete.hpp"
#include "pac/refine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pac {

/// Parameters of the layered random chain generator.
struct GenSpec {
    std::uint64_t seed = 1;
    std::size_t budget = 50; // maximum number of states
    int max_depth = 6;
    int kmin = 1;
    int kmax = 3;
    int extra_vars = 0;            // additional random-walk variables x1, x2, ...
    Rational step = Rational(1, 100); // value grid
    int noise = 1;                 // velocity noise amplitude, in grid steps
    Rational accel = Rational(1, 100);
    Predicate effect_rule = Predicate::conj(Predicate::label("halt"), Predicate::compare("pos", Cmp::Lt, Rational(0)));
    std::string effect_label = "fail";
    bool strict = false; // throw GuardExceeded instead of truncating at the budget
};

/// key=value lines; unknown keys are an error. Keys: seed, budget,
/// max_depth, kmin, kmax, extra_vars, step, noise, accel, effect_rule,
/// effect_label, strict.
GenSpec parse_genspec(std::string_view text);

/// Layer-by-layer expansion. Each state gets k ~ U[kmin, kmax] successors
/// with weights u_i ~ U{1..1000} normalized to u_i / sum(u). Successor
/// valuations follow pos += vel, vel += act * accel + noise, act ~ U{-1,0,1};
/// equal valuations within a layer are merged. Leaves are closed with halt
/// self-loops and every state satisfying the effect rule is labeled.
Dtmc generate(const GenSpec& spec);

/// Independent discovery by explicit path enumeration. Single-state and
/// subset policies only. Throws GuardExceeded past `path_cap` paths.
std::optional<CauseReport> oracle_discover(const PacQuery& q, std::size_t path_cap = 100000);

struct BenchTemplate {
    std::string effect = "fail";
    std::vector<std::string> predicates{"pos >= 0", "vel >= 0"};
    bool include_effect = true; // append the effect to the abstraction predicates
    Rational alpha = Rational(3, 5);
    int max_rounds = 1000;
    long timeout_ms = 60000;
    int jobs = 1;
};

struct BenchRow {
    std::string name;
    std::size_t states = 0;
    double concrete_ms = 0;
    double abstract_ms = 0;
    std::string concrete_status; // cause | none | timeout | error
    std::string abstract_status;
    std::string concrete_cause;
    std::string abstract_cause;
    int rounds = 0;
    bool agree = false;
    std::optional<double> improvement; // 100 * (1 - abs / conc)
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

/// Runs both pipelines on each generated model after one discarded warm-up.
BenchReport compare(const std::vector<GenSpec>& specs, const BenchTemplate& tmpl);

/// One pipeline pair on an existing model.
BenchRow compare_model(const std::string& name, const Dtmc& m, const BenchTemplate& tmpl);

/// Aligned table; `timing` false replaces times with `-` for reproducible output.
std::string render_report(const BenchReport& r, bool records, bool timing);

} // namespace pac
