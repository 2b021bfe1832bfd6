#include "l2ext/rational.hpp"

#include "l2ext/error.hpp"

#include <charconv>

namespace l2ext {

std::int64_t floor_of(const Rational& q) {
    // boost::rational keeps the denominator positive.
    const std::int64_t n = q.numerator();
    const std::int64_t d = q.denominator();
    std::int64_t f = n / d;
    if (n % d != 0 && n < 0) --f;
    return f;
}

std::int64_t floor_plus(const Rational& q) {
    const std::int64_t f = floor_of(q);
    return f > 0 ? f : 0;
}

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
    std::int64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last)
        throw ConfigError("not a rational number: '" + whole + "'");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text, text));
    const std::string_view sv(text);
    const auto num = parse_int(sv.substr(0, slash), text);
    const auto den = parse_int(sv.substr(slash + 1), text);
    if (den == 0) throw ConfigError("zero denominator in '" + text + "'");
    return Rational(num, den);
}

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

}  // namespace l2ext
