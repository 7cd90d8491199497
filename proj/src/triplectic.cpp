#include "trip/triplectic.hpp"

#include <algorithm>
#include <sstream>

#include "trip/parahyper.hpp"

namespace trip {

namespace {

int signPow(long e) { return (e & 1) ? -1 : +1; }

SuperPoly zeroOn(const TablePtr& t) { return SuperPoly(t); }

// residual zero test, truncated when the chart lives in a series ring
bool residualVanishes(const SuperPoly& r, const std::optional<int>& checkDegree) {
    if (!checkDegree) return r.isZero();
    return r.truncated(*checkDegree).isZero();
}

}  // namespace

static void verifySemiCanonical(const TriplecticChart& chart);

TriplecticChart TriplecticChart::canonical(const ChartSpec& spec) {
    if (static_cast<int>(spec.positionParities.size()) != spec.n)
        throw Error("ShapeMismatch", "need one position parity per index");
    VariableTable t;
    std::vector<VarId> q, p, c;
    for (int i = 0; i < spec.n; ++i)
        q.push_back(t.add("q" + std::to_string(i + 1),
                          spec.positionParities[static_cast<size_t>(i)], 0, VarRole::Position,
                          i + 1));
    for (int i = 0; i < spec.n; ++i)
        p.push_back(t.add("p" + std::to_string(i + 1),
                          (spec.positionParities[static_cast<size_t>(i)] + spec.epsilon) & 1, 0,
                          VarRole::Momentum, i + 1));
    for (int i = 0; i < spec.n; ++i)
        c.push_back(t.add("c" + std::to_string(i + 1),
                          (spec.positionParities[static_cast<size_t>(i)] + spec.epsilon) & 1, 0,
                          VarRole::Casimir, i + 1));
    TablePtr table = freeze(std::move(t));

    TriplecticChart chart;
    chart.spec_ = spec;
    chart.table_ = table;
    chart.q_ = q;
    chart.p_ = p;
    chart.c_ = c;
    return chart.withEF(identityPolyMatrix(static_cast<size_t>(spec.n), table),
                        zeroPolyMatrix(static_cast<size_t>(spec.n),
                                       static_cast<size_t>(spec.n), table));
}

TriplecticChart TriplecticChart::withEF(PolyMatrix E, PolyMatrix F) const {
    return fromEF(spec_, table_, q_, p_, c_, std::move(E), std::move(F));
}

TriplecticChart TriplecticChart::fromEF(ChartSpec spec, TablePtr table, std::vector<VarId> q,
                                        std::vector<VarId> p, std::vector<VarId> c, PolyMatrix E,
                                        PolyMatrix F) {
    size_t n = static_cast<size_t>(spec.n);
    size_t dim = 3 * n;
    PolyMatrix pi1 = zeroPolyMatrix(dim, dim, table);
    PolyMatrix pi2 = zeroPolyMatrix(dim, dim, table);
    auto one = SuperPoly::constant(table, Rational(1));
    for (size_t i = 0; i < n; ++i) {
        int epsI = table->at(q[i]).parity;
        // {q^i, p_i}^1 = 1 and its graded mirror
        pi1.at(i, n + i) = one;
        pi1.at(n + i, i) = one * Rational(-signPow(epsI * (1 + spec.epsilon)));
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const SuperPoly& e = E.at(i, j);
            if (!e.isZero()) {
                int epsQi = table->at(q[i]).parity;
                int epsCj = table->at(c[j]).parity;
                pi2.at(i, 2 * n + j) = e;
                pi2.at(2 * n + j, i) =
                    e * Rational(-signPow((epsCj + spec.epsilon) * (epsQi + spec.epsilon)));
            }
            pi2.at(i, j) = F.at(i, j);
        }

    return fromPencil(std::move(spec), std::move(table), std::move(q), std::move(p),
                      std::move(c), std::move(pi1), std::move(pi2));
}

TriplecticChart TriplecticChart::fromPencil(ChartSpec spec, TablePtr table, std::vector<VarId> q,
                                            std::vector<VarId> p, std::vector<VarId> c,
                                            PolyMatrix pi1, PolyMatrix pi2) {
    TriplecticChart chart;
    chart.spec_ = std::move(spec);
    chart.table_ = std::move(table);
    chart.q_ = std::move(q);
    chart.p_ = std::move(p);
    chart.c_ = std::move(c);

    Chart pchart;
    pchart.table = chart.table_;
    pchart.epsilon = chart.spec_.epsilon;
    pchart.trunc = std::nullopt;
    for (VarId v : chart.q_) pchart.coords.push_back(v);
    for (VarId v : chart.p_) pchart.coords.push_back(v);
    for (VarId v : chart.c_) pchart.coords.push_back(v);

    chart.pencil_ = std::make_shared<const PoissonPencil>(
        PoissonPencil{PoissonStructure(pchart, std::move(pi1)),
                      PoissonStructure(pchart, std::move(pi2))});

    verifySemiCanonical(chart);

    size_t n = static_cast<size_t>(chart.spec_.n);
    chart.E_ = zeroPolyMatrix(n, n, chart.table_);
    chart.F_ = zeroPolyMatrix(n, n, chart.table_);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            chart.E_.at(i, j) = chart.pencil_->second.pi().at(i, 2 * n + j);
            chart.F_.at(i, j) = chart.pencil_->second.pi().at(i, j);
        }
    return chart;
}

bool TriplecticChart::isCanonicalBiDarboux() const {
    size_t n = static_cast<size_t>(spec_.n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SuperPoly want = (i == j) ? SuperPoly::constant(table_, Rational(1)) : zeroOn(table_);
            if (!residualVanishes(E_.at(i, j) - want, spec_.checkDegree)) return false;
            if (!residualVanishes(F_.at(i, j), spec_.checkDegree)) return false;
        }
    return true;
}

// semi-canonical axioms: first bracket exactly Darboux, p and c Casimir
// structure for the second bracket, q-independence, E invertible
static void verifySemiCanonical(const TriplecticChart& chart) {
    size_t n = static_cast<size_t>(chart.n());
    const auto& pi1 = chart.pencil().first.pi();
    const auto& pi2 = chart.pencil().second.pi();
    const auto& table = chart.table();
    auto check = chart.spec().checkDegree;

    auto expect = [&](const SuperPoly& got, const SuperPoly& want, const std::string& axiom) {
        if (!residualVanishes(got - want, check))
            throw Error("NotSemiCanonical", "axiom violated: " + axiom + " (found " +
                                                got.str() + ")");
    };
    auto one = SuperPoly::constant(table, Rational(1));
    auto zero = zeroOn(table);

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            expect(pi1.at(i, n + j), (i == j) ? one : zero, "{q,p}^1 = delta");
            expect(pi1.at(i, j), zero, "{q,q}^1 = 0");
            expect(pi1.at(i, 2 * n + j), zero, "{q,c}^1 = 0 (c Casimir of bracket 1)");
            expect(pi1.at(n + i, n + j), zero, "{p,p}^1 = 0");
            expect(pi1.at(n + i, 2 * n + j), zero, "{p,c}^1 = 0");
            expect(pi1.at(2 * n + i, 2 * n + j), zero, "{c,c}^1 = 0");
            expect(pi2.at(i, n + j), zero, "{q,p}^2 = 0 (p Casimir of bracket 2)");
            expect(pi2.at(n + i, n + j), zero, "{p,p}^2 = 0");
            expect(pi2.at(n + i, 2 * n + j), zero, "{p,c}^2 = 0");
            expect(pi2.at(2 * n + i, 2 * n + j), zero, "{c,c}^2 = 0");
        }

    // Observation: all fundamental brackets are q-independent
    for (size_t A = 0; A < 3 * n; ++A)
        for (size_t B = 0; B < 3 * n; ++B)
            for (VarId qv : chart.qIds()) {
                if (pi1.at(A, B).dependsOn(qv) || pi2.at(A, B).dependsOn(qv))
                    throw Error("QDependent", "fundamental bracket {z" + std::to_string(A) +
                                                  ",z" + std::to_string(B) +
                                                  "} depends on a position variable");
            }

    // E block invertible over the rational functions
    FnMatrix e(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) e.at(i, j) = RationalFn(pi2.at(i, 2 * n + j));
    try {
        invertMatrix(e);
    } catch (const Error& err) {
        throw Error("ESingular", std::string("E block not invertible: ") + err.what());
    }

    // the pencil axiom itself
    JacobiReport jac = checkSymmetrizedJacobi(chart.pencil());
    if (check) {
        for (const auto& v : jac.violations)
            if (!v.residual.truncated(*check).isZero())
                throw Error("JacobiViolation", "symmetrized Jacobi identity fails: " +
                                                   v.residual.str());
    } else if (!jac.pass()) {
        throw Error("JacobiViolation", "symmetrized Jacobi identity fails: " +
                                           jac.violations.front().residual.str());
    }
}

EFMatrices extractEF(const TriplecticChart& chart) {
    verifySemiCanonical(chart);
    return {chart.E(), chart.F()};
}

namespace {

// invert the Euler operator of the selected variables monomial-wise
SuperPoly eulerInverse(const SuperPoly& u, const std::vector<VarId>& vars) {
    SuperPoly out(u.table(), u.truncation());
    for (const auto& [m, coef] : u.terms()) {
        int d = 0;
        for (const auto& [v, k] : m.entries())
            if (std::find(vars.begin(), vars.end(), v) != vars.end()) d += k;
        if (d == 0)
            throw Error("NotIntegrable", "monomial without the integration variables");
        out += SuperPoly::fromMonomial(u.table(), m, coef / d, u.truncation());
    }
    return out;
}

}  // namespace

std::vector<SuperPoly> integrateJacobian(const PolyMatrix& m, const std::vector<VarId>& vars,
                                         const TablePtr& table) {
    size_t n = vars.size();
    if (m.rows() != n || m.cols() != n)
        throw Error("ShapeMismatch", "Jacobian must be square over the variables");
    std::vector<SuperPoly> phi;
    for (size_t j = 0; j < n; ++j) {
        SuperPoly u(table);
        for (size_t i = 0; i < n; ++i)
            u += SuperPoly::variable(table, vars[i]) * m.at(i, j);
        SuperPoly candidate = u.isZero() ? u : eulerInverse(u, vars);
        for (size_t i = 0; i < n; ++i) {
            if (candidate.leftDerivative(vars[i]) != m.at(i, j))
                throw Error("NotIntegrable",
                            "matrix is not a graded-symmetric Jacobian in column " +
                                std::to_string(j));
        }
        phi.push_back(candidate);
    }
    return phi;
}

ClosednessReport checkClosednessOf(const PolyMatrix& e, const std::vector<VarId>& pIds,
                                   const std::vector<VarId>& cIds,
                                   std::optional<int> checkDegree) {
    ClosednessReport report;
    size_t n = pIds.size();
    const TablePtr& table = e.at(0, 0).table();

    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j) {
                int epsPi = table->at(pIds[i]).parity;
                int epsPk = table->at(pIds[k]).parity;
                SuperPoly r = e.at(k, j).leftDerivative(pIds[i]) -
                              e.at(i, j).leftDerivative(pIds[k]) *
                                  Rational(signPow(epsPi * epsPk));
                if (!residualVanishes(r, checkDegree)) {
                    report.pass = false;
                    report.residuals.push_back("dE^" + std::to_string(k) + "_" +
                                               std::to_string(j) + "/dp_" + std::to_string(i) +
                                               " asymmetry: " + r.str());
                }
            }

    FnMatrix etilde = invertMatrix(toFnMatrix(e));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                int epsCi = table->at(cIds[i]).parity;
                int epsCj = table->at(cIds[j]).parity;
                RationalFn r = etilde.at(j, k).leftDerivative(cIds[i]) -
                               etilde.at(i, k).leftDerivative(cIds[j]) *
                                   Rational(signPow(epsCi * epsCj));
                bool zero = checkDegree ? r.num().truncated(*checkDegree).isZero() : r.isZero();
                if (!zero) {
                    report.pass = false;
                    report.residuals.push_back("dEtilde^" + std::to_string(j) + "_" +
                                               std::to_string(k) + "/dc_" + std::to_string(i) +
                                               " asymmetry: " + r.str());
                }
            }

    if (report.pass) {
        report.potentialA = integrateJacobian(e, pIds, table);
        bool polyTilde = true;
        PolyMatrix et(n, n, zeroOn(table));
        for (size_t i = 0; i < n && polyTilde; ++i)
            for (size_t j = 0; j < n && polyTilde; ++j) {
                auto p = etilde.at(i, j).tryToPoly();
                if (p)
                    et.at(i, j) = *p;
                else
                    polyTilde = false;
            }
        if (polyTilde) report.potentialAtilde = integrateJacobian(et, cIds, table);
    }
    return report;
}

ClosednessReport checkClosedness(const TriplecticChart& chart) {
    return checkClosednessOf(chart.E(), chart.pIds(), chart.cIds(), chart.spec().checkDegree);
}

BodyPoint defaultBasePoint(const TriplecticChart& chart) {
    std::vector<VarId> evens;
    for (VarId v : chart.pIds())
        if (chart.table()->at(v).parity == 0) evens.push_back(v);
    for (VarId v : chart.cIds())
        if (chart.table()->at(v).parity == 0) evens.push_back(v);

    static const long values[] = {0, 1, -1, 2, -2, 3, -3};
    size_t m = evens.size();
    for (int radius = 0; radius < 7; ++radius) {
        std::vector<int> idx(m, 0);
        while (true) {
            int maxIdx = 0;
            for (int k : idx) maxIdx = std::max(maxIdx, k);
            if (maxIdx == radius) {
                BodyPoint point;
                for (size_t k = 0; k < m; ++k)
                    point[evens[k]] = Rational(values[idx[k]]);
                for (VarId v : chart.pIds())
                    if (!point.count(v)) point[v] = Rational(0);
                for (VarId v : chart.cIds())
                    if (!point.count(v)) point[v] = Rational(0);
                try {
                    if (determinant(evaluateBody(chart.E(), point)) != 0) return point;
                } catch (const Error&) {
                }
            }
            size_t pos = 0;
            while (pos < m && idx[pos] == radius) idx[pos++] = 0;
            if (pos == m) break;
            ++idx[pos];
        }
        if (m == 0) break;
    }
    throw Error("BasePointSearchFailed", "no small integer point makes det(E) nonzero");
}

namespace {

std::map<VarId, SuperPoly> constantAssignment(const TablePtr& table,
                                              const std::vector<VarId>& vars,
                                              const BodyPoint& point) {
    std::map<VarId, SuperPoly> sub;
    for (VarId v : vars) {
        const auto& gv = table->at(v);
        Rational value(0);
        if (gv.parity == 0 && gv.formDegree == 0) {
            auto it = point.find(v);
            value = (it == point.end()) ? Rational(0) : it->second;
        }
        sub[v] = SuperPoly::constant(table, value);
    }
    return sub;
}

}  // namespace

FactorizationAttempt factorizeCandidate(const TriplecticChart& chart, const BodyPoint& base) {
    const auto& table = chart.table();
    size_t n = static_cast<size_t>(chart.n());

    RatMatrix e00(n, n, Rational(0));
    try {
        e00 = evaluateBody(chart.E(), base);
    } catch (const Error&) {
        throw Error("BasePointSingular", "E cannot be evaluated at the base point");
    }
    if (determinant(e00) == 0)
        throw Error("BasePointSingular", "det E vanishes at the base point");
    RatMatrix e00inv = invertRatMatrix(e00);

    auto subC = constantAssignment(table, chart.cIds(), base);
    auto subP = constantAssignment(table, chart.pIds(), base);

    PolyMatrix P(n, n, zeroOn(table)), Ec(n, n, zeroOn(table));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            P.at(i, j) = chart.E().at(i, j).substitute(subC);
            Ec.at(i, j) = chart.E().at(i, j).substitute(subP);
        }
    // C := E(p0,c0)^-1 E(p0,c)
    PolyMatrix C(n, n, zeroOn(table));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SuperPoly acc(table);
            for (size_t k = 0; k < n; ++k) acc += Ec.at(k, j) * e00inv.at(i, k);
            C.at(i, j) = acc;
        }

    FactorizationAttempt attempt{std::move(P), std::move(C),
                                 zeroPolyMatrix(n, n, table), true};
    PolyMatrix product = attempt.P * attempt.C;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            attempt.residual.at(i, j) = product.at(i, j) - chart.E().at(i, j);
            if (!attempt.residual.at(i, j).isZero()) attempt.exact = false;
        }
    return attempt;
}

std::optional<Factorization> factorize(const TriplecticChart& chart, const BodyPoint& base) {
    FactorizationAttempt attempt = factorizeCandidate(chart, base);
    if (!attempt.exact) return std::nullopt;
    return Factorization{std::move(attempt.P), std::move(attempt.C)};
}

bool checkDifferentialFactorization(const TriplecticChart& chart) {
    FnMatrix etilde = invertMatrix(toFnMatrix(chart.E()));
    FnMatrix e = toFnMatrix(chart.E());
    for (VarId cv : chart.cIds()) {
        FnMatrix d = etilde.map([&](const RationalFn& f) { return f.leftDerivative(cv); });
        FnMatrix t = d * e;
        for (VarId pv : chart.pIds())
            for (size_t i = 0; i < t.rows(); ++i)
                for (size_t j = 0; j < t.cols(); ++j)
                    if (!t.at(i, j).leftDerivative(pv).isZero()) return false;
    }
    return true;
}

PolyMap invertPolyMap(const std::vector<SuperPoly>& forward, const std::vector<VarId>& vars,
                      const TablePtr& table, int degree) {
    size_t n = vars.size();
    PolyMap out;
    out.vars = vars;
    out.forward = forward;

    std::vector<Rational> shift(n);
    std::vector<SuperPoly> hat;
    for (size_t j = 0; j < n; ++j) {
        shift[j] = forward[j].constantTerm();
        hat.push_back(forward[j] - SuperPoly::constant(table, shift[j]));
    }

    RatMatrix jac(n, n, Rational(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            jac.at(i, j) = hat[j].leftDerivative(vars[i]).constantTerm();
    RatMatrix jinv(n, n, Rational(0));
    try {
        jinv = invertRatMatrix(jac);
    } catch (const Error&) {
        throw Error("MapNotInvertible", "Jacobian is singular at the base point");
    }

    // h_j = hat_j minus its linear part
    std::vector<SuperPoly> h;
    for (size_t j = 0; j < n; ++j) {
        SuperPoly lin(table);
        for (size_t i = 0; i < n; ++i)
            lin += SuperPoly::variable(table, vars[i]) * jac.at(i, j);
        h.push_back(hat[j] - lin);
    }

    // alpha_i = sum_j (v_j - h_j(alpha)) Jinv(j,i), iterated to the degree
    std::vector<SuperPoly> alpha(n, SuperPoly(table));
    for (int round = 0; round <= degree; ++round) {
        std::map<VarId, SuperPoly> sub;
        for (size_t i = 0; i < n; ++i) sub[vars[i]] = alpha[i];
        std::vector<SuperPoly> next;
        bool stable = true;
        for (size_t i = 0; i < n; ++i) {
            SuperPoly acc(table);
            for (size_t j = 0; j < n; ++j) {
                if (jinv.at(j, i) == 0) continue;
                SuperPoly term = SuperPoly::variable(table, vars[j]) - h[j].substitute(sub);
                acc += term * jinv.at(j, i);
            }
            acc = acc.truncated(degree);
            if (acc != alpha[i]) stable = false;
            next.push_back(std::move(acc));
        }
        alpha = std::move(next);
        if (stable) break;
    }

    // shift back: old v = alpha(v' - shift)
    std::map<VarId, SuperPoly> shiftSub;
    for (size_t j = 0; j < n; ++j)
        shiftSub[vars[j]] =
            SuperPoly::variable(table, vars[j]) - SuperPoly::constant(table, shift[j]);
    for (size_t i = 0; i < n; ++i) out.inverse.push_back(alpha[i].substitute(shiftSub));

    // exactness: forward(inverse) == identity in the plain polynomial ring
    std::map<VarId, SuperPoly> invSub;
    for (size_t i = 0; i < n; ++i) invSub[vars[i]] = out.inverse[i];
    out.exactInverse = true;
    for (size_t j = 0; j < n; ++j) {
        SuperPoly comp = forward[j].substitute(invSub) - SuperPoly::variable(table, vars[j]);
        if (comp.isZero()) continue;
        out.exactInverse = false;
        if (!comp.truncated(degree).isZero())
            throw Error("TruncationResidual",
                        "map inverse fails the composition check to degree " +
                            std::to_string(degree) + ": " + comp.str());
    }
    out.verifiedDegree = degree;
    return out;
}

namespace {

struct TransformOutcome {
    PolyMatrix E, F;        // in the new coordinates
    FnMatrix EPrimeOld, FPrimeOld;
    bool exact = true;
};

// common core of applyF3 / applyCasimirReparam: given the new coordinate
// functions written in the old symbols plus the inverse substitution for the
// base variables that changed, recompute all fundamental brackets and
// re-express them in the primed coordinates.
TransformOutcome recomputeBrackets(const TriplecticChart& chart,
                                   const std::vector<RationalFn>& qNew,
                                   const std::vector<RationalFn>& pNew,
                                   const std::vector<RationalFn>& cNew, const PolyMap& inverse,
                                   int degree) {
    const auto& table = chart.table();
    size_t n = static_cast<size_t>(chart.n());
    TransformOutcome out;
    out.exact = inverse.exactInverse;

    std::vector<RationalFn> znew;
    for (const auto& f : qNew) znew.push_back(f);
    for (const auto& f : pNew) znew.push_back(f);
    for (const auto& f : cNew) znew.push_back(f);

    auto computeBlock = [&](const PoissonStructure& s, size_t A, size_t B) {
        return bracketFn(znew[A], znew[B], s);
    };

    // the primed brackets in the old symbols are exact expressions, so the
    // canonical structure of the first bracket must hold exactly here
    auto expectZero = [&](const RationalFn& f, const std::string& what) {
        if (f.isZero()) return;
        throw Error("TransformBroken", what + " = " + f.str());
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            RationalFn qp = computeBlock(chart.pencil().first, i, n + j);
            RationalFn want = RationalFn::constant(table, Rational(i == j ? 1 : 0));
            expectZero(qp - want, "{q',p'}^1 - delta");
            expectZero(computeBlock(chart.pencil().first, i, j), "{q',q'}^1");
            expectZero(computeBlock(chart.pencil().first, i, 2 * n + j), "{q',c'}^1");
            expectZero(computeBlock(chart.pencil().second, i, n + j), "{q',p'}^2");
            expectZero(computeBlock(chart.pencil().first, n + i, n + j), "{p',p'}^1");
            expectZero(computeBlock(chart.pencil().second, n + i, n + j), "{p',p'}^2");
            expectZero(computeBlock(chart.pencil().first, n + i, 2 * n + j), "{p',c'}^1");
            expectZero(computeBlock(chart.pencil().second, n + i, 2 * n + j), "{p',c'}^2");
            expectZero(computeBlock(chart.pencil().first, 2 * n + i, 2 * n + j), "{c',c'}^1");
            expectZero(computeBlock(chart.pencil().second, 2 * n + i, 2 * n + j), "{c',c'}^2");
        }

    out.EPrimeOld = FnMatrix(n, n);
    out.FPrimeOld = FnMatrix(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            out.EPrimeOld.at(i, j) = computeBlock(chart.pencil().second, i, 2 * n + j);
            out.FPrimeOld.at(i, j) = computeBlock(chart.pencil().second, i, j);
        }

    // re-express in the primed symbols through the inverse substitution
    std::map<VarId, SuperPoly> invSub;
    for (size_t k = 0; k < inverse.vars.size(); ++k) invSub[inverse.vars[k]] = inverse.inverse[k];

    auto reexpress = [&](const RationalFn& f) -> SuperPoly {
        for (VarId qv : chart.qIds())
            if (f.num().dependsOn(qv) || f.den().dependsOn(qv))
                throw Error("TransformBroken", "fundamental bracket depends on a position");
        RationalFn g(f.num().substitute(invSub), f.den().substitute(invSub));
        auto poly = g.tryToPoly();
        if (poly && inverse.exactInverse) return *poly;
        if (poly) return poly->truncated(degree);
        if (inverse.exactInverse)
            throw Error("ChartNotPolynomial",
                        "transformed bracket is not polynomial: " + g.str() +
                            " (rerun with a truncation degree)");
        out.exact = false;
        return g.series(degree);
    };

    out.E = PolyMatrix(n, n, zeroOn(table));
    out.F = PolyMatrix(n, n, zeroOn(table));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            out.E.at(i, j) = reexpress(out.EPrimeOld.at(i, j));
            out.F.at(i, j) = reexpress(out.FPrimeOld.at(i, j));
        }
    return out;
}

}  // namespace

F3Result applyF3(const TriplecticChart& chart, const F3Generator& gen, int inverseDegree) {
    const auto& table = chart.table();
    size_t n = static_cast<size_t>(chart.n());
    if (gen.A.size() != n) throw Error("ShapeMismatch", "need n generator functions A_j");

    for (size_t j = 0; j < n; ++j) {
        for (VarId v : chart.qIds())
            if (gen.A[j].dependsOn(v))
                throw Error("BadGenerator", "A_j must not depend on positions");
        for (VarId v : chart.cIds())
            if (gen.A[j].dependsOn(v))
                throw Error("BadGenerator", "A_j must be independent of the c variables");
        auto gp = gen.A[j].grassmannParity();
        if (!gen.A[j].isZero() &&
            (!gp || *gp != table->at(chart.pIds()[j]).parity))
            throw Error("BadGenerator", "A_j must carry the parity of p_j");
    }
    for (VarId v : chart.qIds())
        if (gen.B.dependsOn(v)) throw Error("BadGenerator", "B must not depend on positions");
    if (!gen.B.isZero()) {
        auto gp = gen.B.grassmannParity();
        if (!gp || *gp != chart.epsilon())
            throw Error("BadGenerator", "B must carry the intrinsic parity");
    }

    // M^i_j = d^l/dp_i A_j, the position Jacobian of Eq-style oldq relation
    PolyMatrix M(n, n, zeroOn(table));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) M.at(i, j) = gen.A[j].leftDerivative(chart.pIds()[i]);
    FnMatrix Minv;
    try {
        Minv = invertMatrix(toFnMatrix(M));
    } catch (const Error& err) {
        throw Error("MapNotInvertible", std::string("dA/dp is not invertible: ") + err.what());
    }

    // q'^j = sum_i (M^-1)^j_i (q^i - d^l B/dp_i)
    std::vector<RationalFn> qNew;
    for (size_t j = 0; j < n; ++j) {
        RationalFn acc = RationalFn::constant(table, Rational(0));
        for (size_t i = 0; i < n; ++i) {
            SuperPoly y = chart.qPoly(static_cast<int>(i)) - gen.B.leftDerivative(chart.pIds()[i]);
            acc += Minv.at(j, i) * RationalFn(y);
        }
        qNew.push_back(acc);
    }
    std::vector<RationalFn> pNew, cNew;
    for (size_t j = 0; j < n; ++j) pNew.push_back(RationalFn(gen.A[j]));
    for (size_t j = 0; j < n; ++j)
        cNew.push_back(RationalFn(chart.cPoly(static_cast<int>(j))));

    PolyMap inverse = invertPolyMap(gen.A, chart.pIds(), table, inverseDegree);
    TransformOutcome o = recomputeBrackets(chart, qNew, pNew, cNew, inverse, inverseDegree);

    F3Result result;
    result.exact = o.exact;
    result.verifiedDegree = o.exact ? -1 : inverseDegree - 4;
    result.newMomenta = gen.A;
    result.newPositions = qNew;
    result.jacobian = M;
    result.EPrimeOld = o.EPrimeOld;
    result.FPrimeOld = o.FPrimeOld;

    ChartSpec spec = chart.spec();
    if (!o.exact) spec.checkDegree = inverseDegree - 4;
    result.chart = TriplecticChart::fromEF(spec, table, chart.qIds(), chart.pIds(),
                                           chart.cIds(), o.E, o.F);

    // tensor law: E = M E'(A(p), c) entrywise, checked in the old symbols
    std::map<VarId, SuperPoly> fwdSub;
    for (size_t i = 0; i < n; ++i) fwdSub[chart.pIds()[i]] = gen.A[i];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SuperPoly acc(table);
            for (size_t k = 0; k < n; ++k)
                acc += M.at(i, k) * result.chart.E().at(k, j).substitute(fwdSub);
            SuperPoly residual = acc - chart.E().at(i, j);
            if (o.exact ? !residual.isZero()
                        : !residual.truncated(inverseDegree - 4).isZero())
                throw Error("TensorLawViolation",
                            "E does not transform as a tensor: " + residual.str());
        }
    return result;
}

F3Result applyCasimirReparam(const TriplecticChart& chart, const std::vector<SuperPoly>& gamma,
                             int inverseDegree) {
    const auto& table = chart.table();
    size_t n = static_cast<size_t>(chart.n());
    if (gamma.size() != n) throw Error("ShapeMismatch", "need n reparametrization functions");
    for (size_t j = 0; j < n; ++j) {
        for (VarId v : chart.qIds())
            if (gamma[j].dependsOn(v)) throw Error("BadGenerator", "gamma_j must depend on c only");
        for (VarId v : chart.pIds())
            if (gamma[j].dependsOn(v)) throw Error("BadGenerator", "gamma_j must depend on c only");
        auto gp = gamma[j].grassmannParity();
        if (!gamma[j].isZero() && (!gp || *gp != table->at(chart.cIds()[j]).parity))
            throw Error("BadGenerator", "gamma_j must carry the parity of c_j");
    }

    std::vector<RationalFn> qNew, pNew, cNew;
    for (size_t j = 0; j < n; ++j)
        qNew.push_back(RationalFn(chart.qPoly(static_cast<int>(j))));
    for (size_t j = 0; j < n; ++j)
        pNew.push_back(RationalFn(chart.pPoly(static_cast<int>(j))));
    for (size_t j = 0; j < n; ++j) cNew.push_back(RationalFn(gamma[j]));

    PolyMap inverse = invertPolyMap(gamma, chart.cIds(), table, inverseDegree);
    TransformOutcome o = recomputeBrackets(chart, qNew, pNew, cNew, inverse, inverseDegree);

    F3Result result;
    result.exact = o.exact;
    result.verifiedDegree = o.exact ? -1 : inverseDegree - 4;
    result.newMomenta = gamma;
    result.newPositions = qNew;
    result.jacobian = zeroPolyMatrix(n, n, table);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            result.jacobian.at(i, j) = gamma[j].leftDerivative(chart.cIds()[i]);
    result.EPrimeOld = o.EPrimeOld;
    result.FPrimeOld = o.FPrimeOld;

    ChartSpec spec = chart.spec();
    if (!o.exact) spec.checkDegree = inverseDegree - 4;
    result.chart = TriplecticChart::fromEF(spec, table, chart.qIds(), chart.pIds(),
                                           chart.cIds(), o.E, o.F);
    return result;
}

KillFResult killF(const TriplecticChart& chart) {
    const auto& table = chart.table();
    size_t n = static_cast<size_t>(chart.n());
    if (!equalsFn(toFnMatrix(chart.E()),
                  toFnMatrix(identityPolyMatrix(n, table))))
        throw Error("EnotIdentity", "killF requires E = Id");

    std::vector<std::string> pNames, cNames;
    std::vector<int> posParities;
    for (VarId v : chart.pIds()) pNames.push_back(table->at(v).name);
    for (VarId v : chart.cIds()) cNames.push_back(table->at(v).name);
    for (VarId v : chart.qIds()) posParities.push_back(table->at(v).parity);

    ChartBridge bridge = bridgeToChart(chart.F(), pNames, cNames, posParities, chart.epsilon());
    SuperPoly B = bridge.B.isZero() ? SuperPoly(table) : transportByName(bridge.B, table);

    // verify the reconstruction of F from B before shifting:
    // F^{ij} = {q^i,{q^j,B}^1}^2 - (-1)^((eps_i+eps)(eps_j+eps)) (i<->j)
    const auto& s1 = chart.pencil().first;
    const auto& s2 = chart.pencil().second;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            int ei = table->at(chart.qIds()[i]).parity + chart.epsilon();
            int ej = table->at(chart.qIds()[j]).parity + chart.epsilon();
            SuperPoly lhs = chart.F().at(i, j);
            SuperPoly rhs =
                bracket(chart.qPoly(static_cast<int>(i)),
                        bracket(chart.qPoly(static_cast<int>(j)), B, s1), s2) -
                bracket(chart.qPoly(static_cast<int>(j)),
                        bracket(chart.qPoly(static_cast<int>(i)), B, s1), s2) *
                    Rational(signPow(ei * ej));
            if (!residualVanishes(lhs - rhs, chart.spec().checkDegree))
                throw Error("NotClosed", "homotopy output does not reproduce F at (" +
                                             std::to_string(i) + "," + std::to_string(j) + ")");
        }

    // gauge shift q'^i = q^i - d^l B/dp_i; recompute the brackets directly
    std::vector<SuperPoly> qShift;
    for (size_t i = 0; i < n; ++i)
        qShift.push_back(chart.qPoly(static_cast<int>(i)) -
                         B.leftDerivative(chart.pIds()[i]));

    PolyMatrix newF(n, n, zeroOn(table));
    PolyMatrix newE(n, n, zeroOn(table));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            newF.at(i, j) = bracket(qShift[i], qShift[j], s2);
            newE.at(i, j) = bracket(qShift[i], chart.cPoly(static_cast<int>(j)), s2);
        }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (!residualVanishes(newF.at(i, j), chart.spec().checkDegree))
                throw Error("NotClosed", "gauge shift failed to remove F");
            SuperPoly wantE = (i == j) ? SuperPoly::constant(table, Rational(1)) : zeroOn(table);
            if (!residualVanishes(newE.at(i, j) - wantE, chart.spec().checkDegree))
                throw Error("TransformBroken", "gauge shift changed E");
        }

    KillFResult out{chart.withEF(identityPolyMatrix(n, table),
                                 zeroPolyMatrix(n, n, table)),
                    B, bridge.blocks};
    return out;
}

PipelineResult biDarbouxPipeline(const TriplecticChart& chart,
                                 std::optional<BodyPoint> basePoint, int degree) {
    PipelineResult result;
    auto stage = [&](const std::string& name, const std::string& detail) {
        result.stages.push_back({name, detail});
    };
    try {
        if (chart.isCanonicalBiDarboux()) {
            stage("identity", "chart already in bi-Darboux form");
            result.success = true;
            result.chart = chart;
            result.gaugeB = SuperPoly(chart.table());
            return result;
        }

        result.obstructionStage = "closedness";
        ClosednessReport closed = checkClosedness(chart);
        if (!closed.pass) {
            result.obstruction = "closedness conditions fail: " + closed.residuals.front();
            return result;
        }
        stage("closedness", "dE/dp and dEtilde/dc symmetry verified; potentials built");

        result.obstructionStage = "basePoint";
        BodyPoint base = basePoint ? *basePoint : defaultBasePoint(chart);
        {
            std::ostringstream os;
            for (const auto& [v, val] : base)
                os << chart.table()->at(v).name << "=" << toString(val) << " ";
            stage("basePoint", os.str());
        }

        result.obstructionStage = "factorize";
        FactorizationAttempt attempt = factorizeCandidate(chart, base);
        if (!attempt.exact) {
            result.obstruction = "E(p,c) does not factorize as P(p) C(c)";
            result.factorizationResidual = attempt.residual;
            ObataConnection conn = obataConnection(chart.E(), chart.pIds(), chart.cIds());
            ObataCurvature curv = obataCurvature(conn);
            for (const auto& w : curv.nonzeroWitness) result.curvatureWitness.push_back(w);
            return result;
        }
        auto factors = std::optional<Factorization>(
            Factorization{attempt.P, attempt.C});
        result.factors = factors;
        stage("factorize", "E = P(p) C(c) with exact product check");

        result.obstructionStage = "integrateJacobian";
        std::vector<SuperPoly> newP =
            integrateJacobian(factors->P, chart.pIds(), chart.table());
        stage("integrateJacobian", "p'_j with dp'_j/dp_i = P^i_j, p'(0) = 0");

        result.obstructionStage = "applyF3";
        F3Generator gen{newP, SuperPoly(chart.table())};
        F3Result f3 = applyF3(chart, gen, degree);
        if (!f3.exact) result.exact = false;
        stage("applyF3", "E' = P^-1 E = C(c); first bracket re-verified canonical");

        result.obstructionStage = "casimirReparam";
        FnMatrix cInvFn = invertMatrix(toFnMatrix(factors->C));
        size_t n = static_cast<size_t>(chart.n());
        PolyMatrix cInv(n, n, zeroOn(chart.table()));
        bool cInvPoly = true;
        for (size_t i = 0; i < n && cInvPoly; ++i)
            for (size_t j = 0; j < n && cInvPoly; ++j) {
                auto p = cInvFn.at(i, j).tryToPoly();
                if (p)
                    cInv.at(i, j) = *p;
                else
                    cInvPoly = false;
            }
        if (!cInvPoly) {
            result.exact = false;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) cInv.at(i, j) = cInvFn.at(i, j).series(degree);
        }
        std::vector<SuperPoly> gamma = integrateJacobian(cInv, chart.cIds(), chart.table());
        F3Result reparam = applyCasimirReparam(f3.chart, gamma, degree);
        if (!reparam.exact) result.exact = false;
        stage("casimirReparam", std::string("c'_j = gamma_j(c) with dgamma = C^-1") +
                                    (cInvPoly ? "" : " (series)"));

        result.obstructionStage = "killF";
        KillFResult killed = killF(reparam.chart);
        result.gaugeB = killed.gaugeB;
        stage("killF", killed.gaugeB.isZero()
                           ? "F already zero"
                           : "gauge B found via the homotopy operator");

        result.obstructionStage = "finalVerify";
        if (!killed.chart.isCanonicalBiDarboux())
            throw Error("FinalVerification", "brackets are not canonical after the pipeline");
        stage("finalVerify", result.exact
                                 ? "both brackets equal the canonical form exactly"
                                 : "both brackets canonical to the verified order");

        result.success = true;
        result.chart = killed.chart;
        if (!result.exact) result.verifiedDegree = degree - 4;
        result.obstructionStage.clear();
        return result;
    } catch (const Error& err) {
        result.obstruction = err.what();
        return result;
    }
}

BiCanonicalReport checkBiCanonical(const TriplecticChart& chart, const BiCanonicalMap& map) {
    BiCanonicalReport report;
    const auto& table = chart.table();
    size_t n = static_cast<size_t>(chart.n());
    auto fail = [&](const std::string& s) {
        report.pass = false;
        report.failures.push_back(s);
    };

    for (size_t j = 0; j < n; ++j) {
        for (VarId v : chart.qIds())
            if (map.pNew[j].dependsOn(v) || map.cNew[j].dependsOn(v))
                fail("momenta must not depend on positions");
        for (VarId v : chart.cIds())
            if (map.pNew[j].dependsOn(v)) fail("p' must depend on p only");
        for (VarId v : chart.pIds())
            if (map.cNew[j].dependsOn(v)) fail("c' must depend on c only");
    }

    RatMatrix j1(n, n, Rational(0)), j2(n, n, Rational(0));
    bool constant = true;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SuperPoly d1 = map.pNew[j].leftDerivative(chart.pIds()[i]);
            SuperPoly d2 = map.cNew[j].leftDerivative(chart.cIds()[i]);
            if (!d1.isConstant() || !d2.isConstant()) constant = false;
            j1.at(i, j) = d1.constantTerm();
            j2.at(i, j) = d2.constantTerm();
        }
    if (!constant) fail("Jacobi matrix is not constant");
    bool sameJ = true;
    for (size_t i = 0; i < n && sameJ; ++i)
        for (size_t j = 0; j < n && sameJ; ++j)
            if (j1.at(i, j) != j2.at(i, j)) sameJ = false;
    if (!sameJ) fail("Jacobi matrices differ between the two momenta families");
    if (constant && determinant(j1) == 0) fail("Jacobi matrix is singular");
    report.jacobian = j1;

    // positions: q^i = J^i_j q'^j + b^i with b independent of q
    std::vector<SuperPoly> b;
    for (size_t i = 0; i < n; ++i) {
        SuperPoly acc = chart.qPoly(static_cast<int>(i));
        for (size_t j = 0; j < n; ++j) acc -= map.qNew[j] * j1.at(i, j);
        for (VarId v : chart.qIds())
            if (acc.dependsOn(v)) fail("positions do not transform affinely with J");
        b.push_back(acc);
    }

    bool identityMomenta = true;
    for (size_t j = 0; j < n; ++j) {
        if (map.pNew[j] != chart.pPoly(static_cast<int>(j))) identityMomenta = false;
        if (map.cNew[j] != chart.cPoly(static_cast<int>(j))) identityMomenta = false;
    }
    report.pureGauge = identityMomenta && report.pass;

    if (report.pureGauge) {
        // gauge shifts need b^i to be a gradient for both momenta families
        SuperPoly u1(table), u2(table);
        for (size_t i = 0; i < n; ++i) {
            u1 += chart.pPoly(static_cast<int>(i)) * b[i];
            u2 += chart.cPoly(static_cast<int>(i)) * b[i];
        }
        bool okB1 = true, okB2 = true;
        SuperPoly B1(table), B2(table);
        try {
            if (!u1.isZero()) B1 = eulerInverse(u1, chart.pIds());
            for (size_t i = 0; i < n; ++i)
                if (B1.leftDerivative(chart.pIds()[i]) != b[i]) okB1 = false;
        } catch (const Error&) {
            okB1 = false;
        }
        try {
            if (!u2.isZero()) B2 = eulerInverse(u2, chart.cIds());
            for (size_t i = 0; i < n; ++i)
                if (B2.leftDerivative(chart.cIds()[i]) != b[i]) okB2 = false;
        } catch (const Error&) {
            okB2 = false;
        }
        if (okB1) report.gaugeB1 = B1;
        if (okB2) report.gaugeB2 = B2;
        if (!okB1) fail("shift is not a gradient with respect to the first momenta");
        if (!okB2) fail("shift is not a gradient with respect to the second momenta");
    }
    return report;
}

FormCalculus::FormCalculus(const TriplecticChart& chart) : chart_(chart) {
    VariableTable t;
    for (size_t i = 0; i < chart.table()->size(); ++i) t.add(chart.table()->at(static_cast<VarId>(i)));
    auto addForms = [&](const std::vector<VarId>& base, const std::string& prefix,
                        std::vector<VarId>& out) {
        for (size_t i = 0; i < base.size(); ++i) {
            const auto& gv = chart.table()->at(base[i]);
            out.push_back(t.add(prefix + gv.name, gv.parity, 1, VarRole::FormGen,
                                static_cast<int>(i + 1)));
        }
    };
    addForms(chart.qIds(), "d", dq_);
    addForms(chart.pIds(), "d", dp_);
    addForms(chart.cIds(), "d", dc_);
    ext_ = freeze(std::move(t));

    size_t n = static_cast<size_t>(chart.n());
    E_ = FnMatrix(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) E_.at(i, j) = RationalFn(chart.E().at(i, j).onTable(ext_));
    Etilde_ = invertMatrix(E_);
}

RationalFn FormCalculus::deRham(const RationalFn& f) const {
    RationalFn acc = RationalFn::constant(ext_, Rational(0));
    auto run = [&](const std::vector<VarId>& base, const std::vector<VarId>& forms) {
        for (size_t i = 0; i < base.size(); ++i) {
            RationalFn d = f.leftDerivative(base[i]);
            if (d.isZero()) continue;
            acc += RationalFn(SuperPoly::variable(ext_, forms[i])) * d;
        }
    };
    run(chart_.qIds(), dq_);
    run(chart_.pIds(), dp_);
    run(chart_.cIds(), dc_);
    return acc;
}

RationalFn FormCalculus::paraDolbeault(int which, bool tilde, const RationalFn& f) const {
    size_t n = static_cast<size_t>(chart_.n());
    RationalFn acc = RationalFn::constant(ext_, Rational(0));
    if (which == 1 && !tilde) {
        for (size_t i = 0; i < n; ++i)
            acc += RationalFn(dp(static_cast<int>(i))) * f.leftDerivative(chart_.pIds()[i]);
    } else if (which == 1 && tilde) {
        for (size_t i = 0; i < n; ++i)
            acc += RationalFn(dc(static_cast<int>(i))) * f.leftDerivative(chart_.cIds()[i]);
    } else if (which == 2 && !tilde) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                RationalFn d = f.leftDerivative(chart_.cIds()[j]);
                if (d.isZero()) continue;
                acc += RationalFn(dp(static_cast<int>(i))) * E_.at(i, j) * d;
            }
    } else {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                RationalFn d = f.leftDerivative(chart_.pIds()[j]);
                if (d.isZero()) continue;
                acc += RationalFn(dc(static_cast<int>(i))) * Etilde_.at(i, j) * d;
            }
    }
    return acc;
}

RationalFn FormCalculus::presymplecticPotential() const {
    SuperPoly acc(ext_);
    for (size_t j = 0; j < static_cast<size_t>(chart_.n()); ++j)
        acc -= dp(static_cast<int>(j)) *
               SuperPoly::variable(ext_, chart_.qIds()[j]);
    return RationalFn(acc);
}

RationalFn FormCalculus::presymplecticTwoForm() const {
    return deRham(presymplecticPotential());
}

RationalFn FormCalculus::restrictedTwoForm() const {
    SuperPoly acc(ext_);
    size_t n = static_cast<size_t>(chart_.n());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const SuperPoly& fij = chart_.F().at(i, j);
            if (fij.isZero()) continue;
            acc -= dp(static_cast<int>(j)) * dp(static_cast<int>(i)) * fij.onTable(ext_) *
                   Rational(1, 2);
        }
    return RationalFn(acc);
}

}  // namespace trip
