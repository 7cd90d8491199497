#include "corpus.hpp"
#include "doctest.h"
#include "trip/liegroup.hpp"
#include "trip/parahyper.hpp"
#include "trip/parser.hpp"

using namespace trip;
using triptest::chartEF;
using triptest::example3d;

namespace {

bool compEquals(const ParityStructure& s, size_t i, size_t j, const std::string& expr) {
    return s.comp.at(i, j).equals(RationalFn(parseExpression(expr, s.comp.at(i, j).table())));
}

std::map<VarId, Rational> pointFor(const TriplecticChart& ch, long value) {
    std::map<VarId, Rational> point;
    for (VarId v : ch.pIds()) point[v] = Rational(value);
    for (VarId v : ch.cIds()) point[v] = Rational(value);
    return point;
}

}  // namespace

TEST_CASE("two-dimensional example structures") {
    auto ch = TriplecticChart::canonical({1, 0, {0}});
    auto sigma = buildSigma(ch.pIds(), ch.cIds(), ch.table());
    auto P = buildPfromE(ch.E(), ch.pIds(), ch.cIds());
    auto J = buildJ(P, sigma);

    CHECK(compEquals(sigma, 0, 0, "1"));
    CHECK(compEquals(sigma, 1, 1, "-1"));
    CHECK(compEquals(P, 0, 1, "1"));
    CHECK(compEquals(P, 1, 0, "1"));
    CHECK(P.comp.at(0, 0).isZero());
    CHECK(compEquals(J, 0, 1, "-1"));
    CHECK(compEquals(J, 1, 0, "1"));

    CHECK(squaresTo(sigma, Rational(1)));
    CHECK(squaresTo(P, Rational(1)));
    CHECK(squaresTo(J, Rational(-1)));
    CHECK(anticommute(sigma, P));

    auto [kp, km] = kernelDimensions(sigma, pointFor(ch, 0));
    CHECK(kp == 1);
    CHECK(km == 1);
}

TEST_CASE("P from a nonconstant E") {
    auto example = example3d();
    auto P = buildPfromE(example.E(), example.pIds(), example.cIds());
    CHECK(P.comp.at(0, 1).equals(RationalFn(parseExpression("1", example.table()),
                                            parseExpression("p1+c1", example.table()))));
    CHECK(compEquals(P, 1, 0, "p1+c1"));
    CHECK(squaresTo(P, Rational(1)));
    auto sigma = buildSigma(example.pIds(), example.cIds(), example.table());
    CHECK(anticommute(sigma, P));
    CHECK(squaresTo(buildJ(P, sigma), Rational(-1)));
    auto [kp, km] = kernelDimensions(P, pointFor(example, 1));
    CHECK(kp == 1);
    CHECK(km == 1);
}

TEST_CASE("nijenhuis tensor") {
    auto ch = TriplecticChart::canonical({2, 0, {0, 0}});
    auto sigma = buildSigma(ch.pIds(), ch.cIds(), ch.table());
    CHECK(nijenhuis(sigma).isZero());

    auto example = example3d();
    auto P = buildPfromE(example.E(), example.pIds(), example.cIds());
    CHECK(nijenhuis(P).isZero());

    // every corpus chart satisfies the closedness conditions, so N = 0
    for (const auto& c : triptest::corpus()) {
        INFO(c.name);
        auto Pc = buildPfromE(c.chart.E(), c.chart.pIds(), c.chart.cIds());
        CHECK(nijenhuis(Pc).isZero());
    }

    // constructed closedness violation has a nonzero component
    PolyMatrix bad = identityPolyMatrix(2, ch.table());
    bad.at(0, 0) = parseExpression("1+p2", ch.table());
    auto Pbad = buildPfromE(bad, ch.pIds(), ch.cIds());
    CHECK_FALSE(nijenhuis(Pbad).isZero());
}

TEST_CASE("obata connection on the named examples") {
    auto id1 = TriplecticChart::canonical({1, 0, {0}});
    ObataConnection c0 = obataConnection(id1.E(), id1.pIds(), id1.cIds());
    CHECK(c0.gammaP[0].at(0, 0).isZero());
    CHECK(c0.gammaC[0].at(0, 0).isZero());

    auto example = example3d();
    ObataConnection c1 = obataConnection(example.E(), example.pIds(), example.cIds());
    CHECK(c1.gammaP[0].at(0, 0).equals(RationalFn(parseExpression("1", example.table()),
                                                  parseExpression("p1+c1", example.table()))));
    CHECK(c1.gammaC[0].at(0, 0).equals(RationalFn(parseExpression("1", example.table()),
                                                  parseExpression("p1+c1", example.table()))));

    auto prod = chartEF({1, 0, {0}}, {{"(1+p1)*(2+c1)"}});
    ObataConnection c2 = obataConnection(prod.E(), prod.pIds(), prod.cIds());
    CHECK(c2.gammaP[0].at(0, 0).equals(RationalFn(parseExpression("1", prod.table()),
                                                  parseExpression("1+p1", prod.table()))));
    for (VarId v : prod.cIds()) CHECK(c2.gammaP[0].at(0, 0).leftDerivative(v).isZero());
}

TEST_CASE("connection preserves the parity structures and is torsion free") {
    for (const auto& c : triptest::corpus()) {
        INFO(c.name);
        const auto& ch = c.chart;
        ObataConnection conn = obataConnection(ch.E(), ch.pIds(), ch.cIds());
        auto sigma = buildSigma(ch.pIds(), ch.cIds(), ch.table());
        auto P = buildPfromE(ch.E(), ch.pIds(), ch.cIds());
        size_t d = 2 * static_cast<size_t>(ch.n());
        for (size_t I = 0; I < d; ++I) {
            FnMatrix ds = covariantDerivative(conn, I, sigma);
            FnMatrix dp = covariantDerivative(conn, I, P);
            for (size_t a = 0; a < d; ++a)
                for (size_t b = 0; b < d; ++b) {
                    CHECK(ds.at(a, b).isZero());
                    CHECK(dp.at(a, b).isZero());
                }
        }
        // torsion: Gamma^K_IJ = -(-1)^((e_I+1)(e_J+1)) Gamma^K_JI with
        // Gamma^K_IJ = (-1)^(e_I e_K) Gamma_I{}^K{}_J
        size_t n = static_cast<size_t>(ch.n());
        auto eps = [&](VarId v) { return ch.table()->at(v).parity; };
        for (size_t sector = 0; sector < 2; ++sector) {
            const auto& gamma = sector == 0 ? conn.gammaP : conn.gammaC;
            const auto& ids = sector == 0 ? ch.pIds() : ch.cIds();
            for (size_t i = 0; i < n; ++i)
                for (size_t k = 0; k < n; ++k)
                    for (size_t j = 0; j < n; ++j) {
                        int sIK = ((eps(ids[i]) * eps(ids[k])) & 1) ? -1 : 1;
                        int sJK = ((eps(ids[j]) * eps(ids[k])) & 1) ? -1 : 1;
                        int sym = (((eps(ids[i]) + 1) * (eps(ids[j]) + 1)) & 1) ? -1 : 1;
                        RationalFn lhs = gamma[i].at(k, j) * Rational(sIK);
                        RationalFn rhs = gamma[j].at(k, i) * Rational(sJK * -sym);
                        CHECK(lhs.equals(rhs));
                    }
        }
    }
}

TEST_CASE("obata curvature decides flatness") {
    auto flat = TriplecticChart::canonical({1, 0, {0}});
    CHECK(obataCurvature(obataConnection(flat.E(), flat.pIds(), flat.cIds())).isFlat);

    auto example = example3d();
    ObataCurvature curved =
        obataCurvature(obataConnection(example.E(), example.pIds(), example.cIds()));
    CHECK_FALSE(curved.isFlat);
    CHECK(!curved.nonzeroWitness.empty());

    auto prod = chartEF({1, 0, {0}}, {{"(1+p1)*(2+c1)"}});
    CHECK(obataCurvature(obataConnection(prod.E(), prod.pIds(), prod.cIds())).isFlat);
}

TEST_CASE("equivalence of factorization, the differential condition and flatness") {
    for (const auto& c : triptest::corpus()) {
        INFO(c.name);
        const auto& ch = c.chart;
        BodyPoint base = defaultBasePoint(ch);
        bool fact = factorize(ch, base).has_value();
        bool diff = checkDifferentialFactorization(ch);
        bool flat = obataCurvature(obataConnection(ch.E(), ch.pIds(), ch.cIds())).isFlat;
        CHECK(fact == c.factorizable);
        CHECK(diff == c.factorizable);
        CHECK(flat == c.factorizable);
    }
}

TEST_CASE("bi-Darboux structures from the split-quaternion generators") {
    auto ch1 = TriplecticChart::canonical({1, 0, {0}});
    BiDarbouxStructures s1 = biDarbouxStructures(ch1.pIds(), ch1.cIds(), ch1.table());
    CHECK(isIdentityStructure(s1.id));
    CHECK(compEquals(s1.P, 0, 1, "1"));
    CHECK(compEquals(s1.J, 0, 1, "-1"));
    CHECK(compEquals(s1.Sigma, 1, 1, "-1"));

    // they coincide with the structures built from E = Id
    auto sigma = buildSigma(ch1.pIds(), ch1.cIds(), ch1.table());
    auto P = buildPfromE(ch1.E(), ch1.pIds(), ch1.cIds());
    auto J = buildJ(P, sigma);
    CHECK(equalsFn(s1.P.comp, P.comp));
    CHECK(equalsFn(s1.J.comp, J.comp));
    CHECK(equalsFn(s1.Sigma.comp, sigma.comp));

    auto ch2 = TriplecticChart::canonical({2, 0, {0, 0}});
    BiDarbouxStructures s2 = biDarbouxStructures(ch2.pIds(), ch2.cIds(), ch2.table());
    CHECK(squaresTo(s2.P, Rational(1)));
    CHECK(squaresTo(s2.J, Rational(-1)));
    CHECK(squaresTo(s2.Sigma, Rational(1)));
    CHECK(anticommute(s2.Sigma, s2.P));

    // a GL(2) momentum rotation conjugates the generators; the rotated triple
    // expands in the t-basis through the inverse adjoint Lorentz matrix
    RatMatrix g(2, 2, Rational(0));
    g.at(0, 0) = 1;
    g.at(0, 1) = 1;
    g.at(1, 1) = 1;
    BiDarbouxStructures rotated = biDarbouxStructures(ch2.pIds(), ch2.cIds(), ch2.table(), &g);
    CHECK(squaresTo(rotated.P, Rational(1)));
    CHECK(squaresTo(rotated.J, Rational(-1)));
    CHECK(squaresTo(rotated.Sigma, Rational(1)));
    CHECK(anticommute(rotated.Sigma, rotated.P));

    RatMatrix lambdaInv = invertRatMatrix(lie::adjointMap(g));
    auto t = lie::tGenerators();
    auto generatorOf = [&](const ParityStructure& s) {
        RatMatrix block(2, 2, Rational(0));
        for (size_t a = 0; a < 2; ++a)
            for (size_t b = 0; b < 2; ++b) {
                const RationalFn& e = s.comp.at(a * 2, b * 2);
                block.at(a, b) = e.isZero() ? Rational(0)
                                            : e.num().constantTerm() / e.den().constantTerm();
            }
        return block;
    };
    std::array<const ParityStructure*, 3> rot{&rotated.P, &rotated.J, &rotated.Sigma};
    for (int alpha = 1; alpha <= 3; ++alpha) {
        RatMatrix want(2, 2, Rational(0));
        for (int beta = 1; beta <= 3; ++beta) {
            Rational coef = lambdaInv.at(static_cast<size_t>(beta - 1),
                                         static_cast<size_t>(alpha - 1));
            for (size_t i = 0; i < 2; ++i)
                for (size_t j = 0; j < 2; ++j)
                    want.at(i, j) += t[static_cast<size_t>(beta)].at(i, j) * coef;
        }
        RatMatrix got = generatorOf(*rot[static_cast<size_t>(alpha - 1)]);
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) CHECK(got.at(i, j) == want.at(i, j));
    }
}
