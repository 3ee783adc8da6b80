#pragma once

#include "pac/model.hpp"
#include "pac/stutter.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pac {

/// Paths sharing one stutter-collapsed W-trace, as a sub-chain. Edge
/// probabilities are the original ones, so rows may sum to less than one.
/// A concrete state reached at several trace positions appears once per
/// position, named `<state>@<position>`.
struct Subgraph {
    std::vector<WValuation> signature;
    Dtmc model;
    std::vector<StateId> origin; // sub-chain state -> concrete state
    std::size_t paths = 0;
};

inline constexpr std::size_t kDefaultPathCap = 100000;

/// Enumerates root-to-absorption paths depth first (successors in id order)
/// and groups them by signature, in order of first discovery. Throws
/// GuardExceeded when more than `path_cap` paths exist.
std::vector<Subgraph> enumerate_subgraphs(const Dtmc& m, const std::vector<Predicate>& W,
                                          std::size_t path_cap = kDefaultPathCap);

/// `(w,¬w,w)` for a single predicate; `([a ¬b],[a b])` for several.
std::string signature_string(const std::vector<WValuation>& sig, const std::vector<Predicate>& W);

} // namespace pac
