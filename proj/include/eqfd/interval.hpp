#pragma once

#include <cmath>
#include <string>

#include "eqfd/error.hpp"

namespace eqfd {

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    void require_nonempty() const {
        if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
            throw InputError("empty or non-finite interval [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
        }
    }
};

}  // namespace eqfd
