#pragma once

#include "pac/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace pac {

/// Parses the line-oriented model format, or its JSON mirror when the text
/// starts with `{`. Throws SyntaxError or ValidationError.
Dtmc parse_model(std::string_view text);

/// Reads and parses a model file.
Dtmc load_model(const std::filesystem::path& path);

/// Canonical text form. Rationals are written as `a/b` in lowest terms, so
/// parse_model(serialize_text(m)) rebuilds an identical chain.
std::string serialize_text(const Dtmc& m);

/// Canonical JSON form with sorted keys and string-valued rationals.
std::string serialize_json(const Dtmc& m);

std::string read_file(const std::filesystem::path& path);

} // namespace pac
