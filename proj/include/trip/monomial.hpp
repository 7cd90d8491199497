#ifndef TRIP_MONOMIAL_HPP
#define TRIP_MONOMIAL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "trip/variables.hpp"

namespace trip {

// Sparse exponent vector in canonical generator order. The monomial itself is
// always the sign-normalized word x_{i1}^{k1} ... x_{ir}^{kr} with i1 < ... < ir;
// signs appear as coefficients during operations.
class Monomial {
  public:
    using Entry = std::pair<VarId, int>;

    Monomial() = default;
    static Monomial variable(VarId v, int exp = 1) {
        Monomial m;
        if (exp > 0) m.entries_.push_back({v, exp});
        return m;
    }
    static Monomial fromSortedEntries(std::vector<Entry> entries) {
        Monomial m;
        m.entries_ = std::move(entries);
        return m;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool isConstant() const { return entries_.empty(); }

    int exponentOf(VarId v) const {
        for (const auto& [id, k] : entries_)
            if (id == v) return k;
        return 0;
    }

    int totalDegree() const {
        int d = 0;
        for (const auto& [id, k] : entries_) d += k;
        return d;
    }

    int grassmannParity(const VariableTable& t) const {
        int p = 0;
        for (const auto& [id, k] : entries_) p += k * t.at(id).parity;
        return p & 1;
    }

    int formDegree(const VariableTable& t) const {
        int p = 0;
        for (const auto& [id, k] : entries_) p += k * t.at(id).formDegree;
        return p;
    }

    // graded-lex order: total degree first, then lex on the expanded word
    bool operator<(const Monomial& o) const {
        int da = totalDegree(), db = o.totalDegree();
        if (da != db) return da < db;
        size_t n = std::min(entries_.size(), o.entries_.size());
        for (size_t i = 0; i < n; ++i) {
            if (entries_[i].first != o.entries_[i].first)
                return entries_[i].first < o.entries_[i].first;
            if (entries_[i].second != o.entries_[i].second)
                return entries_[i].second > o.entries_[i].second;
        }
        return entries_.size() < o.entries_.size();
    }
    bool operator==(const Monomial& o) const { return entries_ == o.entries_; }

  private:
    std::vector<Entry> entries_;
};

struct SignedMonomial {
    Monomial mono;
    int sign;  // +1 or -1
};

// graded product; nullopt when an odd generator squares to zero
std::optional<SignedMonomial> mulMonomials(const Monomial& a, const Monomial& b,
                                           const VariableTable& t);

// d^l/dv from the left / d^r/dv from the right; nullopt for zero. The integer
// multiplicity (the exponent before differentiation) is returned separately.
std::optional<SignedMonomial> leftDerivMonomial(const Monomial& m, VarId v,
                                                const VariableTable& t, int& multiplicity);
std::optional<SignedMonomial> rightDerivMonomial(const Monomial& m, VarId v,
                                                 const VariableTable& t, int& multiplicity);

// exponentwise quotient a / b; nullopt when not divisible. Intended for
// divisors in even form-degree-0 generators (no sign arises).
std::optional<Monomial> divideMonomials(const Monomial& a, const Monomial& b);

}  // namespace trip

#endif
