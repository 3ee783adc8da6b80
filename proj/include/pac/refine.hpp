#pragma once

#include "pac/abstract_check.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pac {

struct TraceRecord {
    int round = 0;
    int subgraph = -1; // index in subgraph mode, else -1
    std::size_t states = 0;
    std::string selected; // split state, empty when none was split
    Rational lo;
    Rational hi;
    std::string outcome; // cause | none | spurious | exhausted
    double millis = 0;
};

struct RefineOptions {
    std::vector<Predicate> predicates;
    Rational alpha = Rational(3, 5);
    int max_rounds = 64;
    std::size_t path_cap = 100000;
};

struct RefineResult {
    std::optional<CauseReport> report; // cause states are ids of the query's model
    std::vector<TraceRecord> trace;
};

/// Non-singleton abstract state with the widest [Pmin, Pmax] interval of
/// reaching `Ehat`; ties go to the lower abstract id. Throws QueryError on
/// the finest partition.
StateId select_split_state(const Abstraction& a, const StateSet& Ehat);

/// Abstract discovery, split, repeat. Every returned cause has passed the
/// concrete check on the chain it was found in.
RefineResult run(const AbstractPacQuery& q, const RefineOptions& opt);

/// One line per record; `timing` adds wall-clock milliseconds.
std::string render_trace(const std::vector<TraceRecord>& trace, bool records, bool timing);

} // namespace pac
