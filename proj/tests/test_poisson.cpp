#include "corpus.hpp"
#include "doctest.h"
#include "trip/poisson.hpp"
#include "util.hpp"

using namespace trip;
using triptest::chartEF;
using triptest::example3d;

namespace {

// raw pencil builder for n = 1 so the poisson layer can be tested without
// the triplectic chart checks
struct RawPencil {
    Chart chart;
    PolyMatrix pi1, pi2;

    RawPencil(int eps, int qParity, const std::string& e2) {
        VariableTable t;
        t.add("q1", qParity, 0, VarRole::Position, 1);
        t.add("p1", (qParity + eps) & 1, 0, VarRole::Momentum, 1);
        t.add("c1", (qParity + eps) & 1, 0, VarRole::Casimir, 1);
        chart.table = freeze(std::move(t));
        chart.coords = {0, 1, 2};
        chart.epsilon = eps;
        pi1 = zeroPolyMatrix(3, 3, chart.table);
        pi2 = zeroPolyMatrix(3, 3, chart.table);
        auto one = SuperPoly::constant(chart.table, Rational(1));
        int s1 = ((qParity * (1 + eps)) & 1) ? 1 : -1;
        pi1.at(0, 1) = one;
        pi1.at(1, 0) = one * Rational(s1);
        if (!e2.empty()) {
            SuperPoly e = parseExpression(e2, chart.table);
            int epsQ = qParity, epsC = (qParity + eps) & 1;
            int s2 = (((epsC + eps) * (epsQ + eps)) & 1) ? 1 : -1;
            pi2.at(0, 2) = e;
            pi2.at(2, 0) = e * Rational(s2);
        }
    }

    PoissonPencil pencil() const {
        return PoissonPencil{PoissonStructure(chart, pi1), PoissonStructure(chart, pi2)};
    }
};

}  // namespace

TEST_CASE("canonical bracket values") {
    RawPencil even(0, 0, "1");
    auto p = even.pencil();
    auto q1 = even.chart.coord(0), p1 = even.chart.coord(1), c1 = even.chart.coord(2);

    CHECK(bracket(q1, p1, p.first) == SuperPoly::constant(even.chart.table, Rational(1)));
    CHECK(bracket(p1, q1, p.first) == SuperPoly::constant(even.chart.table, Rational(-1)));
    CHECK(bracket(q1, c1, p.second) == SuperPoly::constant(even.chart.table, Rational(1)));

    // odd intrinsic parity: q even, p odd; {p,q} = -(-1)^((1+1)(0+1)) {q,p} = -1
    RawPencil odd(1, 0, "1");
    auto po = odd.pencil();
    CHECK(bracket(odd.chart.coord(0), odd.chart.coord(1), po.first) ==
          SuperPoly::constant(odd.chart.table, Rational(1)));
    CHECK(bracket(odd.chart.coord(1), odd.chart.coord(0), po.first) ==
          SuperPoly::constant(odd.chart.table, Rational(-1)));
}

TEST_CASE("bracket is a graded biderivation with the pencil antisymmetry") {
    RawPencil even(0, 0, "p1+c1");
    auto pencil = even.pencil();
    std::mt19937_64 rng(17);
    std::vector<VarId> vars{0, 1, 2};
    for (int trial = 0; trial < 12; ++trial) {
        for (const auto* s : {&pencil.first, &pencil.second}) {
            SuperPoly f = triptest::randomHomogeneous(even.chart.table, vars, trial % 2, 3, rng);
            SuperPoly g =
                triptest::randomHomogeneous(even.chart.table, vars, (trial / 2) % 2, 3, rng);
            SuperPoly h = triptest::randomHomogeneous(even.chart.table, vars, 0, 2, rng);
            int ef = *f.grassmannParity(), eg = *g.grassmannParity();
            int sign = (((ef + 0) * (eg + 0)) & 1) ? 1 : -1;
            CHECK(bracket(f, g, *s) == bracket(g, f, *s) * Rational(sign));
            // graded Leibniz in the second argument
            SuperPoly lhs = bracket(f, g * h, *s);
            int leib = ((ef)*eg & 1) ? -1 : 1;
            SuperPoly rhs = bracket(f, g, *s) * h + g * bracket(f, h, *s) * Rational(leib);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("jacobi checks") {
    RawPencil canonical(0, 0, "1");
    CHECK(checkSymmetrizedJacobi(canonical.pencil()).pass());

    RawPencil example(0, 0, "p1+c1");
    CHECK(checkSymmetrizedJacobi(example.pencil()).pass());

    // {q1,c1}^2 = q1 violates q-independence and breaks the pencil identity
    RawPencil broken(0, 0, "q1");
    CHECK_FALSE(checkSymmetrizedJacobi(broken.pencil()).pass());

    // randomized three-polynomial spot check on the 3d example
    std::mt19937_64 rng(23);
    std::vector<VarId> vars{0, 1, 2};
    auto pencil = example.pencil();
    for (int trial = 0; trial < 6; ++trial) {
        SuperPoly f = triptest::randomHomogeneous(example.chart.table, vars, trial % 2, 2, rng);
        SuperPoly g = triptest::randomHomogeneous(example.chart.table, vars, 0, 2, rng);
        SuperPoly h = triptest::randomHomogeneous(example.chart.table, vars, 1, 2, rng);
        CHECK(symmetrizedJacobiResidual(f, g, h, pencil.first, pencil.second, 0).isZero());
        CHECK(symmetrizedJacobiResidual(f, g, h, pencil.first, pencil.first, 0).isZero());
        CHECK(symmetrizedJacobiResidual(f, g, h, pencil.second, pencil.second, 0).isZero());
    }
}

TEST_CASE("casimirs") {
    RawPencil even(0, 0, "p1+c1");
    auto pencil = even.pencil();
    auto table = even.chart.table;
    CHECK(isCasimir(SuperPoly::variable(table, 2), pencil.first));   // c1 for bracket 1
    CHECK_FALSE(isCasimir(SuperPoly::variable(table, 0), pencil.first));  // q1
    CHECK(isCasimir(SuperPoly::constant(table, Rational(1)), pencil.first));
    CHECK(isCasimir(SuperPoly::variable(table, 1), pencil.second));  // p1 for bracket 2

    std::vector<SuperPoly> cas1{SuperPoly::variable(table, 1)};
    std::vector<SuperPoly> cas2{SuperPoly::variable(table, 2)};
    CHECK(checkMutualInvolutivity(pencil, cas1, cas2).pass());

    // inject {p1,c1}^2 = 1: p1 stops being a Casimir of bracket 2
    PolyMatrix pi2 = even.pi2;
    auto one = SuperPoly::constant(table, Rational(1));
    pi2.at(1, 2) = one;
    pi2.at(2, 1) = -one;
    PoissonPencil injected{pencil.first, PoissonStructure(even.chart, pi2)};
    CHECK_THROWS_WITH_AS(checkMutualInvolutivity(injected, cas1, cas2),
                         doctest::Contains("CasimirPrecheckFailed"), Error);
}

TEST_CASE("gl2 rotations") {
    RawPencil example(0, 0, "p1+c1");
    auto pencil = example.pencil();

    RatMatrix id = RatMatrix::identityLike(2, Rational(1), Rational(0));
    auto rotated = gl2Rotate(pencil, id);
    CHECK(rotated.first.pi().at(0, 1) == pencil.first.pi().at(0, 1));
    CHECK(rotated.second.pi().at(0, 2) == pencil.second.pi().at(0, 2));

    RatMatrix g(2, 2, Rational(0));
    g.at(0, 0) = 1;
    g.at(0, 1) = 1;
    g.at(1, 1) = 1;
    auto sheared = gl2Rotate(pencil, g);
    // {.,.}'^1 = {.,.}^1 and {.,.}'^2 = -{.,.}^1 + {.,.}^2
    CHECK(sheared.first.pi().at(0, 1) == pencil.first.pi().at(0, 1));
    CHECK(sheared.second.pi().at(0, 1) == -pencil.first.pi().at(0, 1));
    CHECK(sheared.second.pi().at(0, 2) == pencil.second.pi().at(0, 2));
    CHECK(checkSymmetrizedJacobi(sheared).pass());

    RatMatrix lam(2, 2, Rational(0));
    lam.at(0, 0) = Rational(3);
    lam.at(1, 1) = Rational(3);
    auto scaled = gl2Rotate(pencil, lam);
    CHECK(scaled.first.pi().at(0, 1) == pencil.first.pi().at(0, 1) * Rational(1, 3));
    CHECK(checkSymmetrizedJacobi(scaled).pass());

    RatMatrix sing(2, 2, Rational(1));
    CHECK_THROWS_WITH_AS(gl2Rotate(pencil, sing), doctest::Contains("SingularGroupElement"),
                         Error);

    // left action: rotate(rotate(P,g),h) = rotate(P, h g)
    RatMatrix h(2, 2, Rational(0));
    h.at(0, 0) = 2;
    h.at(1, 0) = 1;
    h.at(1, 1) = 1;
    auto twice = gl2Rotate(gl2Rotate(pencil, g), h);
    auto once = gl2Rotate(pencil, h * g);
    CHECK(twice.first.pi().at(0, 1) == once.first.pi().at(0, 1));
    CHECK(twice.second.pi().at(0, 2) == once.second.pi().at(0, 2));
    CHECK(twice.second.pi().at(0, 1) == once.second.pi().at(0, 1));
}

TEST_CASE("body rank") {
    RawPencil example(0, 0, "p1+c1");
    auto pencil = example.pencil();
    std::map<VarId, Rational> origin{{0, Rational(0)}, {1, Rational(0)}, {2, Rational(0)}};
    std::map<VarId, Rational> point{{0, Rational(0)}, {1, Rational(1)}, {2, Rational(1)}};

    CHECK(bodyRank(pencil.first, origin) == 2);
    CHECK(bodyRank(pencil.second, point) == 2);
    CHECK(bodyRank(pencil.second, origin) == 0);  // E vanishes at the origin

    PoissonStructure zero(example.chart, zeroPolyMatrix(3, 3, example.chart.table));
    CHECK(bodyRank(zero, origin) == 0);
}

TEST_CASE("linear combinations of a pencil satisfy Jacobi") {
    RawPencil example(0, 0, "p1+c1");
    auto pencil = example.pencil();
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        Rational l1(coef(rng)), l2(coef(rng));
        CHECK(checkJacobi(linearCombination(pencil, l1, l2)).pass());
    }
}
