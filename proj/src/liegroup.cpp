#include "trip/liegroup.hpp"

#include <sstream>

namespace trip::lie {

namespace {

RatMatrix mat2(long a, long b, long c, long d) {
    RatMatrix m(2, 2, Rational(0));
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
}

int epsSymbol(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    // parity of the permutation (a b c) of (1 2 3)
    int perm[3] = {a, b, c};
    int swaps = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (perm[i] > perm[j]) {
                std::swap(perm[i], perm[j]);
                ++swaps;
            }
    return (swaps % 2 == 0) ? 1 : -1;
}

Rational etaDiag(int a) { return Rational(a == 2 ? -1 : 1); }  // eta_11 = eta_33 = 1

bool equalMat(const RatMatrix& x, const RatMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t j = 0; j < x.cols(); ++j)
            if (x.at(i, j) != y.at(i, j)) return false;
    return true;
}

RatMatrix scale(const RatMatrix& m, const Rational& c) {
    RatMatrix out = m;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j) * c;
    return out;
}

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

}  // namespace

RatMatrix minkowskiMetric() {
    RatMatrix eta(3, 3, Rational(0));
    eta.at(0, 0) = 1;
    eta.at(1, 1) = -1;
    eta.at(2, 2) = 1;
    return eta;
}

std::array<RatMatrix, 4> tGenerators() {
    return {mat2(1, 0, 0, 1), mat2(0, 1, 1, 0), mat2(0, -1, 1, 0), mat2(1, 0, 0, -1)};
}

std::array<RatMatrix, 3> TGenerators() {
    // (T_a)^d_b = eps_abc eta^cd with the metric above
    std::array<RatMatrix, 3> t{RatMatrix(3, 3, Rational(0)), RatMatrix(3, 3, Rational(0)),
                               RatMatrix(3, 3, Rational(0))};
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c) {
                int eps = epsSymbol(a, b, c);
                if (eps == 0) continue;
                // eta^{cd} diagonal: d = c
                t[static_cast<size_t>(a - 1)].at(static_cast<size_t>(c - 1),
                                                 static_cast<size_t>(b - 1)) +=
                    Rational(eps) / etaDiag(c);
            }
    return t;
}

CheckReport paraQuaternionTable() {
    CheckReport report;
    auto t = tGenerators();
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            RatMatrix want(2, 2, Rational(0));
            if (a == b) want = scale(t[0], etaDiag(a));
            for (int c = 1; c <= 3; ++c) {
                int eps = epsSymbol(a, b, c);
                if (eps == 0) continue;
                want = want + scale(t[static_cast<size_t>(c)], Rational(eps) / etaDiag(c));
            }
            RatMatrix got = t[static_cast<size_t>(a)] * t[static_cast<size_t>(b)];
            if (!equalMat(got, want)) {
                std::ostringstream os;
                os << "t_" << a << " t_" << b << " deviates from the table";
                report.pass = false;
                report.failures.push_back(os.str());
            }
        }
    for (int a = 0; a <= 3; ++a) {
        if (!equalMat(t[0] * t[static_cast<size_t>(a)], t[static_cast<size_t>(a)] * t[0])) {
            report.pass = false;
            report.failures.push_back("t_0 is not central");
        }
    }
    return report;
}

bool isLorentz(const RatMatrix& lambda) {
    if (lambda.rows() != 3 || lambda.cols() != 3) return false;
    RatMatrix eta = minkowskiMetric();
    return equalMat(lambda.transpose() * eta * lambda, eta);
}

bool isRestrictedLorentz(const RatMatrix& lambda) {
    return isLorentz(lambda) && determinant(lambda) == 1 && lambda.at(1, 1) >= 1;
}

RatMatrix adjointMap(const RatMatrix& g) {
    if (g.rows() != 2 || g.cols() != 2)
        throw Error("ShapeMismatch", "adjoint map expects a 2x2 matrix");
    if (determinant(g) != 1)
        throw Error("NotUnitDeterminant", "adjoint map requires det g = 1");
    RatMatrix ginv = invertRatMatrix(g);
    auto t = tGenerators();
    RatMatrix lambda(3, 3, Rational(0));
    for (int b = 1; b <= 3; ++b) {
        RatMatrix x = g * t[static_cast<size_t>(b)] * ginv;
        // decompose the traceless x = x^1 t_1 + x^2 t_2 + x^3 t_3
        Rational x1 = (x.at(0, 1) + x.at(1, 0)) / 2;
        Rational x2 = (x.at(1, 0) - x.at(0, 1)) / 2;
        Rational x3 = x.at(0, 0);
        lambda.at(0, static_cast<size_t>(b - 1)) = x1;
        lambda.at(1, static_cast<size_t>(b - 1)) = x2;
        lambda.at(2, static_cast<size_t>(b - 1)) = x3;
    }
    if (!isRestrictedLorentz(lambda))
        throw Error("AdjointNotLorentz", "adjoint image failed the SO+(2,1) membership test");
    return lambda;
}

CheckReport lieAlgebraCheck() {
    CheckReport report;
    auto T = TGenerators();
    auto t = tGenerators();
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            RatMatrix want3(3, 3, Rational(0));
            RatMatrix want2(2, 2, Rational(0));
            for (int c = 1; c <= 3; ++c) {
                int eps = epsSymbol(a, b, c);
                if (eps == 0) continue;
                want3 = want3 + scale(T[static_cast<size_t>(c - 1)], Rational(eps) / etaDiag(c));
                want2 = want2 +
                        scale(scale(t[static_cast<size_t>(c)], Rational(1, 2)),
                              Rational(eps) / etaDiag(c));
            }
            if (!equalMat(commutator(T[static_cast<size_t>(a - 1)], T[static_cast<size_t>(b - 1)]),
                          want3)) {
                report.pass = false;
                report.failures.push_back("[T_" + std::to_string(a) + ",T_" + std::to_string(b) +
                                          "] deviates");
            }
            if (!equalMat(commutator(scale(t[static_cast<size_t>(a)], Rational(1, 2)),
                                     scale(t[static_cast<size_t>(b)], Rational(1, 2))),
                          want2)) {
                report.pass = false;
                report.failures.push_back("T -> t/2 is not a homomorphism at (" +
                                          std::to_string(a) + "," + std::to_string(b) + ")");
            }
        }
    // eta eps_{abm} eta^{mn} eps_{ncd} = eta_{ac} eta_{bd} - eta_{ad} eta_{bc}
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c)
                for (int d = 1; d <= 3; ++d) {
                    Rational lhs(0);
                    for (int m = 1; m <= 3; ++m)
                        lhs += Rational(-1) * Rational(epsSymbol(a, b, m)) / etaDiag(m) *
                               Rational(epsSymbol(m, c, d));
                    Rational rhs(0);
                    if (a == c && b == d) rhs += etaDiag(a) * etaDiag(b);
                    if (a == d && b == c) rhs -= etaDiag(a) * etaDiag(b);
                    if (lhs != rhs) {
                        report.pass = false;
                        report.failures.push_back("epsilon identity fails at (" +
                                                  std::to_string(a) + "," + std::to_string(b) +
                                                  "," + std::to_string(c) + "," +
                                                  std::to_string(d) + ")");
                    }
                }
    return report;
}

bool adjointSeriesAgree(const std::array<Rational, 3>& direction, int order) {
    VariableTable vt;
    VarId th = vt.add("s", 0, 0);
    TablePtr table = freeze(std::move(vt));
    auto theta = SuperPoly::variable(table, th, order);
    auto polyConst = [&](const Rational& c) { return SuperPoly::constant(table, c, order); };

    auto toPoly = [&](const RatMatrix& m) {
        PolyMatrix out(m.rows(), m.cols(), SuperPoly(table, order));
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j) out.at(i, j) = polyConst(m.at(i, j));
        return out;
    };

    auto expSeries = [&](const PolyMatrix& x) {
        size_t n = x.rows();
        PolyMatrix acc(n, n, SuperPoly(table, order));
        PolyMatrix power(n, n, SuperPoly(table, order));
        for (size_t i = 0; i < n; ++i) {
            acc.at(i, i) = polyConst(Rational(1));
            power.at(i, i) = polyConst(Rational(1));
        }
        Rational fact(1);
        for (int k = 1; k <= order; ++k) {
            power = power * x;
            fact *= k;
            PolyMatrix term = power;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) acc.at(i, j) += term.at(i, j) * (1 / fact);
        }
        return acc;
    };

    auto t = tGenerators();
    auto T = TGenerators();
    PolyMatrix xHalf(2, 2, SuperPoly(table, order));
    PolyMatrix xFull(3, 3, SuperPoly(table, order));
    for (int a = 1; a <= 3; ++a) {
        auto half = toPoly(scale(t[static_cast<size_t>(a)], direction[static_cast<size_t>(a - 1)] / 2));
        auto full = toPoly(scale(T[static_cast<size_t>(a - 1)], direction[static_cast<size_t>(a - 1)]));
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) xHalf.at(i, j) += half.at(i, j) * theta;
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) xFull.at(i, j) += full.at(i, j) * theta;
    }

    PolyMatrix g = expSeries(xHalf);
    PolyMatrix gInv = expSeries(xHalf.map([](const SuperPoly& p) { return -p; }));
    PolyMatrix rhs = expSeries(xFull);

    // Ad(g) t_b = g t_b g^-1 must match t_a (e^{x T})^a_b order by order
    for (int b = 1; b <= 3; ++b) {
        PolyMatrix lhs = g * toPoly(t[static_cast<size_t>(b)]) * gInv;
        PolyMatrix want(2, 2, SuperPoly(table, order));
        for (int a = 1; a <= 3; ++a) {
            auto ta = toPoly(t[static_cast<size_t>(a)]);
            for (size_t i = 0; i < 2; ++i)
                for (size_t j = 0; j < 2; ++j)
                    want.at(i, j) += ta.at(i, j) * rhs.at(static_cast<size_t>(a - 1),
                                                          static_cast<size_t>(b - 1));
        }
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j)
                if (lhs.at(i, j) != want.at(i, j)) return false;
    }
    return true;
}

}  // namespace trip::lie
