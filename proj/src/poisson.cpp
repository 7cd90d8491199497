#include "trip/poisson.hpp"

namespace trip {

namespace {

int signPow(long e) { return (e & 1) ? -1 : +1; }

}  // namespace

PoissonStructure::PoissonStructure(Chart chart, PolyMatrix pi)
    : chart_(std::move(chart)), pi_(std::move(pi)) {
    size_t n = chart_.dim();
    if (pi_.rows() != n || pi_.cols() != n)
        throw Error("ShapeMismatch", "bracket matrix must be dim x dim");
    for (size_t A = 0; A < n; ++A) {
        for (size_t B = 0; B < n; ++B) {
            const SuperPoly& e = pi_.at(A, B);
            if (e.isZero()) continue;
            // parity rule eps(Pi^{AB}) = eps_A + eps + eps_B
            auto gp = e.grassmannParity();
            int want = (chart_.coordParity(A) + chart_.epsilon + chart_.coordParity(B)) & 1;
            if (!gp || *gp != want)
                throw Error("ParityMismatch",
                            "bracket entry {z" + std::to_string(A) + ",z" + std::to_string(B) +
                                "} has parity inconsistent with the intrinsic parity");
            // graded antisymmetryforced entrywise
            int s = signPow((chart_.coordParity(A) + chart_.epsilon) *
                            (chart_.coordParity(B) + chart_.epsilon));
            SuperPoly mirror = pi_.at(B, A) * Rational(s) + e;
            if (!mirror.isZero())
                throw Error("AntisymmetryViolation",
                            "bracket matrix violates graded antisymmetry at (" +
                                std::to_string(A) + "," + std::to_string(B) + ")");
        }
    }
}

SuperPoly bracket(const SuperPoly& f, const SuperPoly& g, const PoissonStructure& s) {
    const Chart& ch = s.chart();
    if (f.table().get() != ch.table.get() || g.table().get() != ch.table.get())
        throw Error("TableMismatch", "bracket arguments live on a different chart");
    SuperPoly acc(ch.table, ch.trunc);
    for (size_t A = 0; A < ch.dim(); ++A) {
        SuperPoly fa = f.rightDerivative(ch.coords[A]);
        if (fa.isZero()) continue;
        for (size_t B = 0; B < ch.dim(); ++B) {
            const SuperPoly& piAB = s.pi().at(A, B);
            if (piAB.isZero()) continue;
            SuperPoly gb = g.leftDerivative(ch.coords[B]);
            if (gb.isZero()) continue;
            acc += fa * piAB * gb;
        }
    }
    return acc;
}

RationalFn bracketFn(const RationalFn& f, const RationalFn& g, const PoissonStructure& s) {
    const Chart& ch = s.chart();
    RationalFn acc = RationalFn::constant(ch.table, Rational(0));
    for (size_t A = 0; A < ch.dim(); ++A) {
        RationalFn fa = f.rightDerivative(ch.coords[A]);
        if (fa.isZero()) continue;
        for (size_t B = 0; B < ch.dim(); ++B) {
            const SuperPoly& piAB = s.pi().at(A, B);
            if (piAB.isZero()) continue;
            RationalFn gb = g.leftDerivative(ch.coords[B]);
            if (gb.isZero()) continue;
            acc += fa * RationalFn(piAB) * gb;
        }
    }
    return acc;
}

SuperPoly symmetrizedJacobiResidual(const SuperPoly& f, const SuperPoly& g, const SuperPoly& h,
                                    const PoissonStructure& sa, const PoissonStructure& sb,
                                    int epsilon) {
    auto pf = f.grassmannParity(), pg = g.grassmannParity(), ph = h.grassmannParity();
    if (!pf || !pg || !ph)
        throw Error("MixedParity", "Jacobi residual needs Grassmann-homogeneous arguments");
    auto term = [&](const SuperPoly& x, const SuperPoly& y, const SuperPoly& z, int px, int pz) {
        SuperPoly t = bracket(bracket(x, y, sa), z, sb) + bracket(bracket(x, y, sb), z, sa);
        return t * Rational(signPow((px + epsilon) * (pz + epsilon)));
    };
    return term(f, g, h, *pf, *ph) + term(g, h, f, *pg, *pf) + term(h, f, g, *ph, *pg);
}

namespace {

JacobiReport checkTriples(const PoissonStructure& s1, const PoissonStructure& s2, int a, int b) {
    const Chart& ch = s1.chart();
    JacobiReport report;
    for (size_t A = 0; A < ch.dim(); ++A)
        for (size_t B = A; B < ch.dim(); ++B)
            for (size_t C = B; C < ch.dim(); ++C) {
                SuperPoly r = symmetrizedJacobiResidual(ch.coord(A), ch.coord(B), ch.coord(C),
                                                        s1, s2, ch.epsilon);
                if (!r.isZero()) report.violations.push_back({A, B, C, a, b, r});
            }
    return report;
}

}  // namespace

JacobiReport checkJacobi(const PoissonStructure& s) { return checkTriples(s, s, 1, 1); }

JacobiReport checkSymmetrizedJacobi(const PoissonPencil& p) {
    JacobiReport report = checkTriples(p.first, p.first, 1, 1);
    JacobiReport mixed = checkTriples(p.first, p.second, 1, 2);
    JacobiReport second = checkTriples(p.second, p.second, 2, 2);
    report.violations.insert(report.violations.end(), mixed.violations.begin(),
                             mixed.violations.end());
    report.violations.insert(report.violations.end(), second.violations.begin(),
                             second.violations.end());
    return report;
}

bool isCasimir(const SuperPoly& f, const PoissonStructure& s) {
    for (size_t A = 0; A < s.chart().dim(); ++A)
        if (!bracket(f, s.chart().coord(A), s).isZero()) return false;
    return true;
}

InvolutivityReport checkMutualInvolutivity(const PoissonPencil& p,
                                           const std::vector<SuperPoly>& casimirs1,
                                           const std::vector<SuperPoly>& casimirs2) {
    InvolutivityReport report;
    // reversed labeling: the first family annihilates the second bracket
    for (size_t i = 0; i < casimirs1.size(); ++i)
        if (!isCasimir(casimirs1[i], p.second))
            throw Error("CasimirPrecheckFailed",
                        "casimirs1[" + std::to_string(i) + "] is not a Casimir of bracket 2");
    for (size_t i = 0; i < casimirs2.size(); ++i)
        if (!isCasimir(casimirs2[i], p.first))
            throw Error("CasimirPrecheckFailed",
                        "casimirs2[" + std::to_string(i) + "] is not a Casimir of bracket 1");

    std::vector<const SuperPoly*> all;
    for (const auto& f : casimirs1) all.push_back(&f);
    for (const auto& f : casimirs2) all.push_back(&f);
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = 0; j < all.size(); ++j) {
            for (int c = 1; c <= 2; ++c) {
                const PoissonStructure& s = (c == 1) ? p.first : p.second;
                if (!bracket(*all[i], *all[j], s).isZero())
                    report.failures.push_back("{xi_" + std::to_string(i) + ",xi_" +
                                              std::to_string(j) + "}^" + std::to_string(c) +
                                              " != 0");
            }
        }
    return report;
}

PoissonPencil gl2Rotate(const PoissonPencil& p, const RatMatrix& g) {
    if (g.rows() != 2 || g.cols() != 2) throw Error("ShapeMismatch", "GL(2) element must be 2x2");
    if (determinant(g) == 0) throw Error("SingularGroupElement", "GL(2) element is singular");
    RatMatrix ginv = invertRatMatrix(g);
    const PolyMatrix& pi1 = p.first.pi();
    const PolyMatrix& pi2 = p.second.pi();
    auto combine = [&](int b) {
        PolyMatrix out = pi1;
        for (size_t i = 0; i < out.rows(); ++i)
            for (size_t j = 0; j < out.cols(); ++j)
                out.at(i, j) = pi1.at(i, j) * ginv.at(0, b) + pi2.at(i, j) * ginv.at(1, b);
        return out;
    };
    return PoissonPencil{p.first.withPi(combine(0)), p.second.withPi(combine(1))};
}

PoissonStructure linearCombination(const PoissonPencil& p, const Rational& l1,
                                   const Rational& l2) {
    PolyMatrix out = p.first.pi();
    for (size_t i = 0; i < out.rows(); ++i)
        for (size_t j = 0; j < out.cols(); ++j)
            out.at(i, j) = p.first.pi().at(i, j) * l1 + p.second.pi().at(i, j) * l2;
    return p.first.withPi(std::move(out));
}

int bodyRank(const PoissonStructure& s, const std::map<VarId, Rational>& point) {
    return rank(evaluateBody(s.pi(), point));
}

}  // namespace trip
