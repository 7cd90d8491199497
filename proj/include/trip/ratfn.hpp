#ifndef TRIP_RATFN_HPP
#define TRIP_RATFN_HPP

#include <optional>
#include <string>

#include "trip/superpoly.hpp"

namespace trip {

// Quotient n/d with the denominator a nonzero polynomial in even
// form-degree-0 generators (central, so the localization is unambiguous).
// Kept unreduced; equality is decided by exact cross-multiplication.
class RationalFn {
  public:
    RationalFn() = default;
    explicit RationalFn(SuperPoly num);
    RationalFn(SuperPoly num, SuperPoly den);

    static RationalFn constant(TablePtr table, Rational c) {
        return RationalFn(SuperPoly::constant(std::move(table), std::move(c)));
    }

    const SuperPoly& num() const { return num_; }
    const SuperPoly& den() const { return den_; }
    const TablePtr& table() const { return num_.table(); }

    bool isZero() const { return num_.isZero(); }

    RationalFn operator-() const;
    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-(const RationalFn& o) const;
    RationalFn operator*(const RationalFn& o) const;
    RationalFn operator*(const Rational& c) const;
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }

    RationalFn reciprocal() const;  // requires even form-0 numerator
    RationalFn operator/(const RationalFn& o) const { return *this * o.reciprocal(); }

    bool equals(const RationalFn& o) const;  // n1 d2 - n2 d1 == 0

    RationalFn leftDerivative(VarId v) const;
    RationalFn rightDerivative(VarId v) const;

    Rational evaluateBody(const std::map<VarId, Rational>& point) const;

    // exact polynomial content when the denominator divides the numerator
    std::optional<SuperPoly> tryToPoly() const;

    // expand as a power series in all variables, to total degree D; requires
    // den(0) != 0 on the even body at the origin of the denominator variables
    SuperPoly series(int degree) const;

    std::string str() const;

  private:
    void normalizeContent();

    SuperPoly num_, den_;
};

// exact division f / g (g in even form-0 generators); nullopt when g does not
// divide f in the polynomial ring
std::optional<SuperPoly> tryExactDivide(const SuperPoly& f, const SuperPoly& g);

}  // namespace trip

#endif
