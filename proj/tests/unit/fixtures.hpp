#pragma once

#include "pac/model_io.hpp"

#include <algorithm>
#include <string>

namespace fixtures {

inline std::string data_path(const std::string& name)
{
    return std::string(PAC_TEST_DATA) + "/" + name;
}

inline const pac::Dtmc& vehicle()
{
    static const pac::Dtmc m = pac::load_model(data_path("vehicle.dtmc"));
    return m;
}

inline pac::StateId id(const pac::Dtmc& m, const std::string& name)
{
    return m.find(name);
}

inline pac::StateSet ids(const pac::Dtmc& m, std::initializer_list<const char*> names)
{
    pac::StateSet out;
    for (const char* n : names)
        out.push_back(m.find(n));
    std::sort(out.begin(), out.end());
    return out;
}

inline pac::Rational q(const char* text)
{
    return pac::parse_rational(text);
}

} // namespace fixtures
