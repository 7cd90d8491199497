#include "trip/superpoly.hpp"

#include <algorithm>

#include "trip/error.hpp"

namespace trip {

SuperPoly SuperPoly::constant(TablePtr table, Rational c, std::optional<int> trunc) {
    SuperPoly p(std::move(table), trunc);
    if (c != 0) p.terms_[Monomial{}] = std::move(c);
    return p;
}

SuperPoly SuperPoly::variable(TablePtr table, VarId v, std::optional<int> trunc) {
    SuperPoly p(std::move(table), trunc);
    p.table_->at(v);  // range check
    p.terms_[Monomial::variable(v)] = Rational(1);
    return p;
}

SuperPoly SuperPoly::fromMonomial(TablePtr table, Monomial m, Rational c,
                                  std::optional<int> trunc) {
    SuperPoly p(std::move(table), trunc);
    if (c != 0) p.terms_[std::move(m)] = std::move(c);
    return p;
}

bool SuperPoly::isConstant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.isConstant());
}

Rational SuperPoly::constantTerm() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

void SuperPoly::addTerm(Monomial m, Rational c) {
    if (c == 0) return;
    if (trunc_ && m.totalDegree() > *trunc_) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void SuperPoly::requireSameTable(const SuperPoly& o) const {
    if (table_.get() != o.table_.get())
        throw Error("TableMismatch", "operands live on different variable tables");
}

SuperPoly SuperPoly::operator-() const {
    SuperPoly out(table_, trunc_);
    for (const auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
}

namespace {
std::optional<int> mergeTrunc(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}
}  // namespace

SuperPoly SuperPoly::operator+(const SuperPoly& o) const {
    requireSameTable(o);
    SuperPoly out(table_, mergeTrunc(trunc_, o.trunc_));
    out.terms_ = terms_;
    for (const auto& [m, c] : o.terms_) out.addTerm(m, c);
    if (out.trunc_)
        for (auto it = out.terms_.begin(); it != out.terms_.end();)
            it = (it->first.totalDegree() > *out.trunc_) ? out.terms_.erase(it) : std::next(it);
    return out;
}

SuperPoly SuperPoly::operator-(const SuperPoly& o) const { return *this + (-o); }

SuperPoly SuperPoly::operator*(const SuperPoly& o) const {
    requireSameTable(o);
    SuperPoly out(table_, mergeTrunc(trunc_, o.trunc_));
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            auto prod = mulMonomials(ma, mb, *table_);
            if (!prod) continue;
            Rational c = ca * cb;
            if (prod->sign < 0) c = -c;
            out.addTerm(std::move(prod->mono), std::move(c));
        }
    }
    return out;
}

SuperPoly SuperPoly::operator*(const Rational& c) const {
    SuperPoly out(table_, trunc_);
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_[m] = k * c;
    return out;
}

SuperPoly SuperPoly::pow(int k) const {
    if (k < 0) throw Error("NegativePower", "negative polynomial power");
    SuperPoly out = constant(table_, Rational(1), trunc_);
    for (int i = 0; i < k; ++i) out = out * *this;
    return out;
}

SuperPoly SuperPoly::leftDerivative(VarId v) const {
    SuperPoly out(table_, trunc_);
    for (const auto& [m, c] : terms_) {
        int mult = 0;
        auto d = leftDerivMonomial(m, v, *table_, mult);
        if (!d) continue;
        out.addTerm(std::move(d->mono), c * mult * d->sign);
    }
    return out;
}

SuperPoly SuperPoly::rightDerivative(VarId v) const {
    SuperPoly out(table_, trunc_);
    for (const auto& [m, c] : terms_) {
        int mult = 0;
        auto d = rightDerivMonomial(m, v, *table_, mult);
        if (!d) continue;
        out.addTerm(std::move(d->mono), c * mult * d->sign);
    }
    return out;
}

SuperPoly SuperPoly::substitute(const std::map<VarId, SuperPoly>& assignment) const {
    for (const auto& [v, val] : assignment) {
        const auto& gv = table_->at(v);
        if (val.isZero()) continue;
        auto gp = val.grassmannParity();
        auto fp = val.formParity();
        bool formOk = true;
        for (const auto& [m, c] : val.terms())
            if (m.formDegree(*val.table()) != gv.formDegree) formOk = false;
        if (!gp || *gp != gv.parity || !fp || !formOk)
            throw Error("GradingMismatch",
                        "value substituted for " + gv.name + " has wrong grading");
    }
    SuperPoly out(table_, trunc_);
    for (const auto& [m, c] : terms_) {
        SuperPoly term = constant(table_, c, trunc_);
        for (const auto& [v, k] : m.entries()) {
            auto it = assignment.find(v);
            const SuperPoly base =
                (it == assignment.end()) ? variable(table_, v, trunc_) : it->second;
            term = term * base.pow(k);
            if (term.isZero()) break;
        }
        out += term;
    }
    return out;
}

Rational SuperPoly::evaluateBody(const std::map<VarId, Rational>& point) const {
    Rational total(0);
    for (const auto& [m, c] : terms_) {
        Rational v = c;
        bool dead = false;
        for (const auto& [id, k] : m.entries()) {
            const auto& gv = table_->at(id);
            if (gv.parity != 0 || gv.formDegree != 0) {
                dead = true;
                break;
            }
            auto it = point.find(id);
            if (it == point.end())
                throw Error("UnassignedVariable", "no value for " + gv.name);
            for (int i = 0; i < k; ++i) v *= it->second;
        }
        if (!dead) total += v;
    }
    return total;
}

std::optional<int> SuperPoly::grassmannParity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms_) {
        int mp = m.grassmannParity(*table_);
        if (p && *p != mp) return std::nullopt;
        p = mp;
    }
    return p ? p : std::optional<int>(0);  // zero counts as even
}

std::optional<int> SuperPoly::formParity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms_) {
        int mp = m.formDegree(*table_) & 1;
        if (p && *p != mp) return std::nullopt;
        p = mp;
    }
    return p ? p : std::optional<int>(0);
}

int SuperPoly::totalDegree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.totalDegree());
    return d;
}

bool SuperPoly::dependsOn(VarId v) const {
    for (const auto& [m, c] : terms_)
        if (m.exponentOf(v) > 0) return true;
    return false;
}

SuperPoly SuperPoly::truncated(int degree) const {
    SuperPoly out(table_, trunc_);
    for (const auto& [m, c] : terms_)
        if (m.totalDegree() <= degree) out.terms_[m] = c;
    return out;
}

SuperPoly SuperPoly::withTruncation(std::optional<int> trunc) const {
    SuperPoly out(table_, trunc);
    for (const auto& [m, c] : terms_)
        if (!trunc || m.totalDegree() <= *trunc) out.terms_[m] = c;
    return out;
}

SuperPoly SuperPoly::onTable(TablePtr bigger) const {
    if (!bigger->extends(*table_))
        throw Error("TableMismatch", "target table does not extend the source table");
    SuperPoly out(std::move(bigger), trunc_);
    out.terms_ = terms_;
    return out;
}

}  // namespace trip
