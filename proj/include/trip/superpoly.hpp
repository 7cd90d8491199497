#ifndef TRIP_SUPERPOLY_HPP
#define TRIP_SUPERPOLY_HPP

#include <map>
#include <optional>
#include <string>

#include "trip/monomial.hpp"
#include "trip/rational.hpp"

namespace trip {

// Supercommutative polynomial with exact rational coefficients over a shared
// VariableTable. Immutable value semantics; no zero coefficients are stored.
// When a truncation degree D is set, products drop monomials of total degree
// greater than D (quotient by the span of those monomials).
class SuperPoly {
  public:
    SuperPoly() = default;
    explicit SuperPoly(TablePtr table, std::optional<int> trunc = std::nullopt)
        : table_(std::move(table)), trunc_(trunc) {}

    static SuperPoly constant(TablePtr table, Rational c,
                              std::optional<int> trunc = std::nullopt);
    static SuperPoly variable(TablePtr table, VarId v,
                              std::optional<int> trunc = std::nullopt);
    static SuperPoly fromMonomial(TablePtr table, Monomial m, Rational c,
                                  std::optional<int> trunc = std::nullopt);

    const TablePtr& table() const { return table_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    std::optional<int> truncation() const { return trunc_; }

    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    Rational constantTerm() const;

    SuperPoly operator-() const;
    SuperPoly operator+(const SuperPoly& o) const;
    SuperPoly operator-(const SuperPoly& o) const;
    SuperPoly operator*(const SuperPoly& o) const;
    SuperPoly operator*(const Rational& c) const;
    SuperPoly& operator+=(const SuperPoly& o) { return *this = *this + o; }
    SuperPoly& operator-=(const SuperPoly& o) { return *this = *this - o; }
    SuperPoly& operator*=(const SuperPoly& o) { return *this = *this * o; }

    bool operator==(const SuperPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const SuperPoly& o) const { return !(*this == o); }

    SuperPoly pow(int k) const;

    // graded left/right partial derivatives
    SuperPoly leftDerivative(VarId v) const;
    SuperPoly rightDerivative(VarId v) const;

    // algebra homomorphism; every substituted value must carry the parity and
    // form degree of its variable (GradingMismatch otherwise). Variables not
    // listed map to themselves.
    SuperPoly substitute(const std::map<VarId, SuperPoly>& assignment) const;

    // evaluate on the even body: listed even form-degree-0 variables take the
    // given rational values, every other generator goes to zero.
    Rational evaluateBody(const std::map<VarId, Rational>& point) const;

    // Grassmann parity / form-degree parity when all terms agree, else nullopt
    std::optional<int> grassmannParity() const;
    std::optional<int> formParity() const;

    int totalDegree() const;  // max over terms; -1 for zero
    // max degree counting only the variables selected by `pick`
    template <class Pred>
    int degreeIn(Pred pick) const {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (const auto& [v, k] : m.entries())
                if (pick(v)) s += k;
            d = std::max(d, s);
        }
        return d;
    }
    bool dependsOn(VarId v) const;

    SuperPoly truncated(int degree) const;       // drop monomials of degree > D
    SuperPoly withTruncation(std::optional<int> trunc) const;
    SuperPoly onTable(TablePtr bigger) const;    // embed into an extending table

    std::string str() const;  // canonical printer (see parser.hpp)

  private:
    void addTerm(Monomial m, Rational c);
    void requireSameTable(const SuperPoly& o) const;

    TablePtr table_;
    std::map<Monomial, Rational> terms_;
    std::optional<int> trunc_;

    friend SuperPoly operator*(const Rational& c, const SuperPoly& p) { return p * c; }
};

}  // namespace trip

#endif
