#ifndef TRIP_TESTS_UTIL_HPP
#define TRIP_TESTS_UTIL_HPP

#include <random>
#include <vector>

#include "trip/parser.hpp"
#include "trip/superpoly.hpp"

namespace triptest {

using namespace trip;

// two even generators p1, c1 and two odd generators th1, th2
inline TablePtr mixedTable() {
    VariableTable t;
    t.add("p1", 0, 0, VarRole::Momentum, 1);
    t.add("c1", 0, 0, VarRole::Casimir, 1);
    t.add("th1", 1, 0, VarRole::Auxiliary, 1);
    t.add("th2", 1, 0, VarRole::Auxiliary, 2);
    return freeze(std::move(t));
}

inline SuperPoly parseOn(const TablePtr& t, const std::string& s) {
    return parseExpression(s, t);
}

// random polynomial of homogeneous Grassmann parity over the listed variables
inline SuperPoly randomHomogeneous(const TablePtr& t, const std::vector<VarId>& vars,
                                   int parity, int maxDegree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> expDist(0, 2);
    SuperPoly acc(t);
    for (int attempts = 0; attempts < 24; ++attempts) {
        SuperPoly term = SuperPoly::constant(t, Rational(coef(rng)));
        int deg = 0;
        for (VarId v : vars) {
            const auto& gv = t->at(v);
            int maxExp = gv.selfSign() ? 1 : 2;
            int k = std::min(expDist(rng), maxExp);
            if (deg + k > maxDegree) k = 0;
            if (k > 0) {
                term = term * SuperPoly::variable(t, v).pow(k);
                deg += k;
            }
        }
        auto gp = term.grassmannParity();
        if (gp && *gp == parity) acc += term;
    }
    if (acc.isZero() && parity == 0) acc = SuperPoly::constant(t, Rational(1));
    return acc;
}

}  // namespace triptest

#endif
