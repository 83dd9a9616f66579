#pragma once

#include <cstdio>
#include <string>

namespace ruledlab::detail {

// Fixed float formatting for every text artifact; reports must be
// byte-identical across runs.
inline std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace ruledlab::detail
