#pragma once

#include "doctest.h"

#include "numeric.hpp"

namespace testutil {

inline void check_close(const ruledlab::Vec3& a, const ruledlab::Vec3& b, double tol) {
    CAPTURE(a.transpose());
    CAPTURE(b.transpose());
    CHECK((a - b).norm() <= tol);
}

inline void check_rel(double a, double b, double tol) {
    CHECK(std::fabs(a - b) <= tol * (1.0 + std::fabs(b)));
}

} // namespace testutil
