#include "trip/ratfn.hpp"

#include "trip/error.hpp"
#include "trip/parser.hpp"

namespace trip {

namespace {

bool isEvenCentral(const SuperPoly& p) {
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, k] : m.entries()) {
            const auto& gv = p.table()->at(v);
            if (gv.parity != 0 || gv.formDegree != 0) return false;
        }
    return true;
}

// the part of p written purely in even form-degree-0 generators
SuperPoly evenVariablePart(const SuperPoly& p) {
    SuperPoly out(p.table(), p.truncation());
    for (const auto& [m, c] : p.terms()) {
        bool even = true;
        for (const auto& [v, k] : m.entries()) {
            const auto& gv = p.table()->at(v);
            if (gv.parity != 0 || gv.formDegree != 0) even = false;
        }
        if (even) out += SuperPoly::fromMonomial(p.table(), m, c, p.truncation());
    }
    return out;
}

}  // namespace

RationalFn::RationalFn(SuperPoly num) : num_(std::move(num)) {
    den_ = SuperPoly::constant(num_.table(), Rational(1));
}

RationalFn::RationalFn(SuperPoly num, SuperPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw Error("ZeroDenominator", "rational function with zero denominator");
    if (!isEvenCentral(den_)) {
        // an even-parity denominator a + nu with nilpotent nu and a built from
        // even generators is a unit over the localization at a: multiply
        // through by sum_k (-nu)^k a^(m-1-k) to clear the nilpotent part
        auto gp = den_.grassmannParity();
        auto fp = den_.formParity();
        if (!gp || *gp != 0 || !fp || *fp != 0)
            throw Error("BadDenominator", "denominator must be Grassmann- and form-even");
        SuperPoly a = evenVariablePart(den_);
        if (a.isZero())
            throw Error("BadDenominator",
                        "denominator has no even-generator part: " + den_.str());
        SuperPoly nu = den_ - a;
        int m = 1;
        SuperPoly power = nu;
        while (!power.isZero()) {
            power = power * nu;
            ++m;
            if (m > 64) throw Error("BadDenominator", "denominator is not a unit");
        }
        SuperPoly w(num_.table(), num_.truncation());
        SuperPoly nuPow = SuperPoly::constant(num_.table(), Rational(1), num_.truncation());
        for (int k = 0; k < m; ++k) {
            w += nuPow * a.pow(m - 1 - k);
            nuPow = nuPow * (-nu);
        }
        num_ = num_ * w;
        den_ = a.pow(m);
    }
    normalizeContent();
}

void RationalFn::normalizeContent() {
    // cheap size control: pull the rational content out of the denominator
    if (den_.isZero()) return;
    Rational lead = den_.terms().begin()->second;
    if (lead == 1) return;
    Rational inv = 1 / lead;
    num_ = num_ * inv;
    den_ = den_ * inv;
}

RationalFn RationalFn::operator-() const {
    RationalFn out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
    if (den_ == o.den_) return RationalFn(num_ + o.num_, den_);
    return RationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator-(const RationalFn& o) const { return *this + (-o); }

RationalFn RationalFn::operator*(const RationalFn& o) const {
    return RationalFn(num_ * o.num_, den_ * o.den_);
}

RationalFn RationalFn::operator*(const Rational& c) const {
    RationalFn out = *this;
    out.num_ = out.num_ * c;
    return out;
}

RationalFn RationalFn::reciprocal() const {
    if (num_.isZero()) throw Error("DivisionByZero", "reciprocal of zero");
    return RationalFn(den_, num_);  // the constructor validates the new denominator
}

bool RationalFn::equals(const RationalFn& o) const {
    return (num_ * o.den_ - o.num_ * den_).isZero();
}

RationalFn RationalFn::leftDerivative(VarId v) const {
    // denominators depend on even form-0 generators only, so d(den) is even
    // and central; the quotient rule needs no extra signs
    SuperPoly dn = num_.leftDerivative(v);
    SuperPoly dd = den_.leftDerivative(v);
    if (dd.isZero()) return RationalFn(std::move(dn), den_);
    return RationalFn(dn * den_ - num_ * dd, den_ * den_);
}

RationalFn RationalFn::rightDerivative(VarId v) const {
    SuperPoly dn = num_.rightDerivative(v);
    SuperPoly dd = den_.rightDerivative(v);
    if (dd.isZero()) return RationalFn(std::move(dn), den_);
    return RationalFn(dn * den_ - num_ * dd, den_ * den_);
}

Rational RationalFn::evaluateBody(const std::map<VarId, Rational>& point) const {
    Rational d = den_.evaluateBody(point);
    if (d == 0) throw Error("PoleAtPoint", "denominator vanishes at the evaluation point");
    return num_.evaluateBody(point) / d;
}

std::optional<SuperPoly> tryExactDivide(const SuperPoly& f, const SuperPoly& g) {
    if (g.isZero()) return std::nullopt;
    if (!isEvenCentral(g)) return std::nullopt;
    if (f.isZero()) return f;
    SuperPoly q(f.table(), f.truncation());
    SuperPoly r = f;
    const auto& gLead = *g.terms().rbegin();
    while (!r.isZero()) {
        const auto& rLead = *r.terms().rbegin();
        auto mq = divideMonomials(rLead.first, gLead.first);
        if (!mq) return std::nullopt;
        Rational cq = rLead.second / gLead.second;
        SuperPoly t = SuperPoly::fromMonomial(f.table(), std::move(*mq), cq, f.truncation());
        q += t;
        r -= t * g;
    }
    return q;
}

std::optional<SuperPoly> RationalFn::tryToPoly() const {
    if (den_.isConstant()) {
        Rational c = den_.constantTerm();
        return num_ * (1 / c);
    }
    return tryExactDivide(num_, den_);
}

SuperPoly RationalFn::series(int degree) const {
    Rational d0 = den_.constantTerm();
    if (d0 == 0)
        throw Error("SeriesPole", "denominator vanishes at the origin; no series expansion");
    // 1/(d0 + u) = (1/d0) sum_k (-u/d0)^k, truncated at the requested degree
    SuperPoly u = (den_ - SuperPoly::constant(den_.table(), d0)) * (1 / d0);
    SuperPoly geom = SuperPoly::constant(den_.table(), Rational(1));
    SuperPoly powU = SuperPoly::constant(den_.table(), Rational(1));
    for (int k = 1; k <= degree; ++k) {
        powU = (powU * (-u)).truncated(degree);
        if (powU.isZero()) break;
        geom += powU;
    }
    return (num_ * geom * (1 / d0)).truncated(degree);
}

std::string RationalFn::str() const {
    if (den_.isConstant() && den_.constantTerm() == 1) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace trip
