#pragma once

#include "l2ext/rational.hpp"

#include <cstdint>
#include <vector>

namespace l2ext {

/// One divisor of a log resolution: the pulled-back ideal vanishes to order
/// `a` along it and the Jacobian to order `b`.
struct Divisor {
    std::int64_t a = 1;
    std::int64_t b = 0;
    /// Ambient coordinate index for a coordinate hyperplane, or -1 for the
    /// exceptional divisor of the blow-up at the origin.
    int axis = -1;
};

struct ResolutionData {
    std::vector<Divisor> divisors;
    Rational c{1};

    /// Throws ConfigError unless there is at least one divisor, every a >= 1,
    /// every b >= 0 and c > 0.
    void validate() const;
};

}  // namespace l2ext
