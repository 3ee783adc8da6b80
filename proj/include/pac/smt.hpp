#pragma once

#include "pac/abstract_check.hpp"
#include "pac/concrete.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pac {

struct SmtInstance {
    std::string text;
    /// SMT symbol pattern and what it stands for; also written as comments.
    std::vector<std::pair<std::string, std::string>> manifest;
};

/// Solver output that cannot be read, or a decoded cause the internal
/// checker does not confirm.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// QF_LRA instance whose models select a cause through the f_s<i> flags.
/// Single-state and subset policies are supported. With `ordered`, a fixed-
/// cause copy per candidate forces the selection to be the first cause in
/// search order, so every solver model names the same cause as `discover`.
SmtInstance export_smt(const PacQuery& q, bool ordered = true);

/// Abstract variant with min/max Bellman encodings over rank-ordered actions.
SmtInstance export_smt_abs(const Abstraction& a, const AbstractPacQuery& q, bool ordered = true);

/// Reads f_s<i> from a get-model response and re-verifies with check_cause.
/// `unsat` yields nothing. Throws DecodeError.
std::optional<CauseReport> decode_smt_model(const PacQuery& q, std::string_view output);

/// Abstract variant: f_s<i> index abstract states; post-verified concretely.
std::optional<CauseReport> decode_smt_model_abs(const Abstraction& a, const AbstractPacQuery& q,
                                                std::string_view output);

/// SMT-LIB real literal: `3.0`, `(/ 69.0 200.0)`.
std::string smt_real(const Rational& r);

} // namespace pac
