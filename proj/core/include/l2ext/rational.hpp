#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace l2ext {

using Rational = boost::rational<std::int64_t>;

/// Largest integer not exceeding q.
std::int64_t floor_of(const Rational& q);

/// max(floor(q), 0).
std::int64_t floor_plus(const Rational& q);

double to_double(const Rational& q);

/// Parses "3", "-2", "7/4". Throws ConfigError on anything else.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

inline std::pair<std::int64_t, std::int64_t> as_pair(const Rational& q) {
    return {q.numerator(), q.denominator()};
}

}  // namespace l2ext
