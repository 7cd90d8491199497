#ifndef TRIP_RATIONAL_HPP
#define TRIP_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace trip {

// Exact rational scalar used throughout; no floating point anywhere.
using Rational = mpq_class;

inline Rational makeRational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational parseRational(const std::string& text) {
    Rational r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + text);
    r.canonicalize();
    return r;
}

inline std::string toString(const Rational& r) { return r.get_str(); }

}  // namespace trip

#endif
