#include <random>

#include "doctest.h"
#include "trip/homotopy.hpp"
#include "trip/parser.hpp"

using namespace trip;

namespace {

SuperPoly parseA(const TriAlgebra& a, const std::string& s) {
    return parseExpression(s, a.table());
}

// random polynomial in the tri-graded generators
SuperPoly randomForm(const TriAlgebra& a, int maxDegree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> expDist(0, 2);
    SuperPoly acc = a.zero();
    for (int t = 0; t < 10; ++t) {
        SuperPoly term = a.constant(Rational(coef(rng)));
        int deg = 0;
        for (int alpha = 1; alpha <= 3; ++alpha)
            for (int i = 0; i < a.n(); ++i) {
                VarId v = a.x(alpha, i);
                int cap = a.table()->at(v).selfSign() ? 1 : 2;
                int k = std::min(expDist(rng), cap);
                if (deg + k > maxDegree) k = 0;
                if (k) {
                    term = term * SuperPoly::variable(a.table(), v).pow(k);
                    deg += k;
                }
            }
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("differentials act as in the defining formulas") {
    TriAlgebra a = TriAlgebra::make(2, {0, 0});
    CHECK(dA(a, 1, parseA(a, "x1_1")) == parseA(a, "x3_1"));
    CHECK(dA(a, 2, parseA(a, "x3_1*x3_2")).isZero());
    CHECK(iA(a, 1, parseA(a, "x3_1*x3_2")) == parseA(a, "x1_1*x3_2 - x1_2*x3_1"));
    CHECK(scriptL(a, 1, 1, parseA(a, "x1_1")) == parseA(a, "x1_1"));
    CHECK(Lambda(a, parseA(a, "x3_1*x3_2")) == parseA(a, "2*x3_1*x3_2"));
}

TEST_CASE("operator algebra identities on random forms") {
    std::mt19937_64 rng(31);
    for (const auto& parities : {std::vector<int>{0, 0}, std::vector<int>{0, 1}}) {
        TriAlgebra a = TriAlgebra::make(2, parities);
        for (int trial = 0; trial < 12; ++trial) {
            SuperPoly w = randomForm(a, 5, rng);

            // nilpotency and commutation of d^a and i_a
            CHECK(dA(a, 1, dA(a, 1, w)).isZero());
            CHECK(dA(a, 2, dA(a, 2, w)).isZero());
            CHECK(iA(a, 1, iA(a, 1, w)).isZero());
            CHECK(iA(a, 2, iA(a, 2, w)).isZero());
            CHECK(dA(a, 1, dA(a, 2, w)) + dA(a, 2, dA(a, 1, w)) == a.zero());
            CHECK(iA(a, 1, iA(a, 2, w)) + iA(a, 2, iA(a, 1, w)) == a.zero());

            // explicit formulas for the scriptL operators
            SuperPoly n1 = a.zero(), n2 = a.zero(), n3 = a.zero();
            for (int i = 0; i < a.n(); ++i) {
                n1 += a.xPoly(1, i) * w.leftDerivative(a.x(1, i));
                n2 += a.xPoly(2, i) * w.leftDerivative(a.x(2, i));
                n3 += a.xPoly(3, i) * w.leftDerivative(a.x(3, i));
            }
            CHECK(scriptL(a, 1, 1, w) == n1 + n3);
            CHECK(scriptL(a, 2, 2, w) == n2 + n3);

            // gl(2): [L^a_b, L^c_d] = delta^a_d L^c_b - delta^c_b L^a_d
            for (int aa = 1; aa <= 2; ++aa)
                for (int bb = 1; bb <= 2; ++bb)
                    for (int cc = 1; cc <= 2; ++cc)
                        for (int dd = 1; dd <= 2; ++dd) {
                            SuperPoly lhs = scriptL(a, aa, bb, scriptL(a, cc, dd, w)) -
                                            scriptL(a, cc, dd, scriptL(a, aa, bb, w));
                            SuperPoly rhs = a.zero();
                            if (aa == dd) rhs += scriptL(a, cc, bb, w);
                            if (cc == bb) rhs -= scriptL(a, aa, dd, w);
                            CHECK(lhs == rhs);
                        }

            // trace relations [L,d] = 2d, [i,L] = 2i
            CHECK(traceL(a, dOp(a, w)) - dOp(a, traceL(a, w)) == dOp(a, w) * Rational(2));
            CHECK(iOp(a, traceL(a, w)) - traceL(a, iOp(a, w)) == iOp(a, w) * Rational(2));

            // L = Lambda + R_b d^b
            CHECK(LOp(a, w) ==
                  Lambda(a, w) + ROp(a, 1, dA(a, 1, w)) + ROp(a, 2, dA(a, 2, w)));

            // Lambda and L commute, Lambda commutes with scriptL
            CHECK(LOp(a, Lambda(a, w)) == Lambda(a, LOp(a, w)));
            CHECK(scriptL(a, 2, 1, Lambda(a, w)) == Lambda(a, scriptL(a, 2, 1, w)));

            // intertwiners d f(Lambda) = f(Lambda') d and f(Lambda) i = i f(Lambda')
            CHECK(dOp(a, Lambda(a, w)) == LambdaPrime(a, dOp(a, w)));
            CHECK(Lambda(a, iOp(a, w)) == iOp(a, LambdaPrime(a, w)));
            SuperPoly lam2 = Lambda(a, Lambda(a, w));
            CHECK(dOp(a, lam2) == LambdaPrime(a, LambdaPrime(a, dOp(a, w))));
        }
    }
}

TEST_CASE("lambda blocks and highest-weight eigenvalues") {
    TriAlgebra a2 = TriAlgebra::make(2, {0, 0});

    // block (0,2): only x3_1 x3_2 with eigenvalue 2 = (l/2)(l/2-1) - j(j+1)
    GradedBlockOperator b02 = lambdaBlock(a2, 0, 2);
    CHECK(b02.basis.size() == 1);
    CHECK(b02.matrix.at(0, 0) == Rational(2));
    CHECK(b02.det == Rational(2));

    // highest-weight vector (x1_1)^2 x3_1 x3_2: j = 1, l = 6, eigenvalue 4
    SuperPoly v = parseA(a2, "x1_1^2*x3_1*x3_2");
    CHECK(scriptL(a2, 2, 1, v).isZero());  // J_+ annihilates it
    CHECK(Lambda(a2, v) == v * Rational(4));
    // and 4 respects the bound (n12+n3)(n3-1) = 4
    GradedBlockOperator b22 = lambdaBlock(a2, 2, 2);
    CHECK(b22.det != 0);

    // any block with n3 = 2 has nonzero determinant
    for (int n12 = 0; n12 <= 3; ++n12) {
        GradedBlockOperator b = lambdaBlock(a2, n12, 2);
        if (!b.basis.empty()) CHECK(b.det != 0);
    }
}

TEST_CASE("bi-Poincare homotopy") {
    TriAlgebra a = TriAlgebra::make(2, {0, 0});

    SuperPoly omega = parseA(a, "x3_1*x3_2");
    HomotopyResult h = biPoincareHomotopy(a, omega);
    CHECK(h.eta == parseA(a, "1/2*x1_1*x2_2 - 1/2*x1_2*x2_1"));
    CHECK(dOp(a, h.eta) == omega);

    CHECK(biPoincareHomotopy(a, a.zero()).eta.isZero());

    SuperPoly rho = parseA(a, "x1_1*x1_2*x2_1*x2_2");
    SuperPoly omega2 = dOp(a, rho);
    HomotopyResult h2 = biPoincareHomotopy(a, omega2);
    CHECK(dOp(a, h2.eta) == omega2);

    // for n = 3 the product x1_3 x3_1 x3_2 has d^1 omega = x3_3 x3_1 x3_2 != 0
    TriAlgebra a3 = TriAlgebra::make(3, {0, 0, 0});
    CHECK_THROWS_WITH_AS(biPoincareHomotopy(a3, parseExpression("x1_3*x3_1*x3_2", a3.table())),
                         doctest::Contains("NotClosed"), Error);
    SuperPoly low = dA(a, 1, parseA(a, "x1_1*x1_2"));
    CHECK_THROWS_WITH_AS(biPoincareHomotopy(a, low), doctest::Contains("DegreeTooLow"), Error);
}

TEST_CASE("homotopy round trip on random closed forms") {
    std::mt19937_64 rng(37);
    int count = 0;
    for (const auto& parities :
         {std::vector<int>{0}, std::vector<int>{1}, std::vector<int>{0, 1},
          std::vector<int>{0, 0, 1}}) {
        TriAlgebra a = TriAlgebra::make(static_cast<int>(parities.size()), parities);
        for (int trial = 0; trial < 8; ++trial) {
            SuperPoly rho = randomForm(a, 6, rng);
            SuperPoly omega = dOp(a, rho);
            if (omega.isZero()) continue;
            HomotopyResult h = biPoincareHomotopy(a, omega);
            CHECK(dOp(a, h.eta) == omega);
            for (const auto& b : h.blocks) CHECK(b.det != 0);
            ++count;
        }
    }
    CHECK(count > 10);
}

TEST_CASE("chart bridge builds the gauge zero-form") {
    // n = 2, even positions, F^{12} = 1
    VariableTable vt;
    vt.add("p1", 0, 0, VarRole::Momentum, 1);
    vt.add("p2", 0, 0, VarRole::Momentum, 2);
    vt.add("c1", 0, 0, VarRole::Casimir, 1);
    vt.add("c2", 0, 0, VarRole::Casimir, 2);
    auto table = freeze(std::move(vt));
    PolyMatrix F = zeroPolyMatrix(2, 2, table);
    F.at(0, 1) = SuperPoly::constant(table, Rational(1));
    F.at(1, 0) = SuperPoly::constant(table, Rational(-1));

    ChartBridge bridge = bridgeToChart(F, {"p1", "p2"}, {"c1", "c2"}, {0, 0}, 0);
    CHECK(!bridge.beta2.isZero());
    CHECK(!bridge.B.isZero());
    CHECK(dA(bridge.algebra, 2, dA(bridge.algebra, 1, bridge.B)) == bridge.beta2);
    // B depends only on the p and c generators
    for (int i = 0; i < 2; ++i) CHECK_FALSE(bridge.B.dependsOn(bridge.algebra.x(3, i)));

    PolyMatrix zero = zeroPolyMatrix(2, 2, table);
    CHECK(bridgeToChart(zero, {"p1", "p2"}, {"c1", "c2"}, {0, 0}, 0).B.isZero());
}
