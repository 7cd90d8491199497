#include "trip/parahyper.hpp"

#include <sstream>

namespace trip {

namespace {

int signPow(long e) { return (e & 1) ? -1 : +1; }

RationalFn zeroFn(const TablePtr& t) { return RationalFn::constant(t, Rational(0)); }
RationalFn oneFn(const TablePtr& t) { return RationalFn::constant(t, Rational(1)); }

int parityOf(const TablePtr& t, VarId v) { return t->at(v).parity; }

}  // namespace

ParityStructure buildSigma(const std::vector<VarId>& pIds, const std::vector<VarId>& cIds,
                           const TablePtr& table) {
    size_t n = pIds.size();
    ParityStructure s;
    s.xi = pIds;
    s.xi.insert(s.xi.end(), cIds.begin(), cIds.end());
    s.comp = FnMatrix(2 * n, 2 * n, zeroFn(table));
    for (size_t i = 0; i < n; ++i) {
        s.comp.at(i, i) = oneFn(table);
        s.comp.at(n + i, n + i) = oneFn(table) * Rational(-1);
    }
    return s;
}

ParityStructure buildPfromE(const PolyMatrix& E, const std::vector<VarId>& pIds,
                            const std::vector<VarId>& cIds) {
    size_t n = pIds.size();
    const TablePtr& table = E.at(0, 0).table();
    FnMatrix etilde = invertMatrix(toFnMatrix(E));

    ParityStructure s;
    s.xi = pIds;
    s.xi.insert(s.xi.end(), cIds.begin(), cIds.end());
    s.comp = FnMatrix(2 * n, 2 * n, zeroFn(table));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            // Etilde_i{}^j = (-1)^(eps(c_j)(eps(p_i)+1)) Etilde^j_i in the p rows
            int sTilde = signPow(parityOf(table, cIds[j]) * (parityOf(table, pIds[i]) + 1));
            s.comp.at(i, n + j) = etilde.at(j, i) * Rational(sTilde);
            // E_i{}^j = (-1)^(eps(p_j)(eps(c_i)+1)) E^j_i in the c rows
            int sE = signPow(parityOf(table, pIds[j]) * (parityOf(table, cIds[i]) + 1));
            s.comp.at(n + i, j) = RationalFn(E.at(j, i)) * Rational(sE);
        }
    return s;
}

ParityStructure composeStructures(const ParityStructure& a, const ParityStructure& b) {
    ParityStructure s;
    s.xi = a.xi;
    s.comp = a.comp * b.comp;
    return s;
}

ParityStructure buildJ(const ParityStructure& p, const ParityStructure& sigma) {
    return composeStructures(p, sigma);
}

bool isIdentityStructure(const ParityStructure& s) { return isIdentityFn(s.comp); }

bool squaresTo(const ParityStructure& s, const Rational& scalar) {
    FnMatrix sq = s.comp * s.comp;
    for (size_t i = 0; i < sq.rows(); ++i)
        for (size_t j = 0; j < sq.cols(); ++j) {
            RationalFn want = (i == j) ? oneFn(sq.at(0, 0).table()) * scalar
                                       : zeroFn(sq.at(0, 0).table());
            if (!sq.at(i, j).equals(want)) return false;
        }
    return true;
}

bool anticommute(const ParityStructure& a, const ParityStructure& b) {
    FnMatrix anti = a.comp * b.comp + b.comp * a.comp;
    for (size_t i = 0; i < anti.rows(); ++i)
        for (size_t j = 0; j < anti.cols(); ++j)
            if (!anti.at(i, j).isZero()) return false;
    return true;
}

std::pair<int, int> kernelDimensions(const ParityStructure& s,
                                     const std::map<VarId, Rational>& point) {
    size_t d = s.dim();
    RatMatrix plus(d, d, Rational(0)), minus(d, d, Rational(0));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            Rational v = s.comp.at(i, j).evaluateBody(point);
            plus.at(i, j) = v + Rational(i == j ? 1 : 0);
            minus.at(i, j) = v - Rational(i == j ? 1 : 0);
        }
    int dimKerPlus = static_cast<int>(d) - rank(minus);   // ker(P - Id) from P v = v
    int dimKerMinus = static_cast<int>(d) - rank(plus);   // ker(P + Id)
    return {dimKerPlus, dimKerMinus};
}

bool NijenhuisTensor::isZero() const {
    for (const auto& m : comp)
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j)
                if (!m.at(i, j).isZero()) return false;
    return true;
}

NijenhuisTensor nijenhuis(const ParityStructure& p) {
    size_t d = p.dim();
    const TablePtr& table = p.comp.at(0, 0).table();
    NijenhuisTensor out;

    auto term = [&](size_t K, size_t I, size_t J) {
        // (P^K_I d^r/dxi^M) P^M_J - P^K_M (P^M_I d^r/dxi^J)
        RationalFn acc = zeroFn(table);
        for (size_t M = 0; M < d; ++M) {
            RationalFn dPKI = p.comp.at(K, I).rightDerivative(p.xi[M]);
            if (!dPKI.isZero()) acc += dPKI * p.comp.at(M, J);
            RationalFn dPMI = p.comp.at(M, I).rightDerivative(p.xi[J]);
            if (!dPMI.isZero()) acc -= p.comp.at(K, M) * dPMI;
        }
        return acc;
    };

    for (size_t K = 0; K < d; ++K) {
        FnMatrix m(d, d, zeroFn(table));
        for (size_t I = 0; I < d; ++I)
            for (size_t J = 0; J < d; ++J) {
                int s = signPow(parityOf(table, p.xi[I]) * parityOf(table, p.xi[J]));
                m.at(I, J) = term(K, I, J) - term(K, J, I) * Rational(s);
            }
        out.comp.push_back(std::move(m));
    }

    // 8 N^K_+-IJ = N^K_IM (P_+-)^M_J - (-1)^(e_I e_J) (I <-> J)
    for (int sign = 0; sign < 2; ++sign) {
        std::vector<FnMatrix>& dst = (sign == 0) ? out.chiralPlus : out.chiralMinus;
        Rational half(1, 2);
        for (size_t K = 0; K < d; ++K) {
            FnMatrix m(d, d, zeroFn(table));
            for (size_t I = 0; I < d; ++I)
                for (size_t J = 0; J < d; ++J) {
                    auto proj = [&](size_t A, size_t B) {
                        RationalFn e = p.comp.at(A, B) * (sign == 0 ? half : -half);
                        if (A == B) e += RationalFn::constant(table, half);
                        return e;
                    };
                    RationalFn acc = zeroFn(table);
                    for (size_t M = 0; M < d; ++M)
                        acc += out.comp[K].at(I, M) * proj(M, J);
                    RationalFn accSwap = zeroFn(table);
                    for (size_t M = 0; M < d; ++M)
                        accSwap += out.comp[K].at(J, M) * proj(M, I);
                    int s = signPow(parityOf(table, p.xi[I]) * parityOf(table, p.xi[J]));
                    m.at(I, J) = (acc - accSwap * Rational(s)) * Rational(1, 8);
                }
            dst.push_back(std::move(m));
        }
    }
    return out;
}

namespace {

// transposed-array helpers with the graded sign twists
FnMatrix twistedEtilde(const FnMatrix& etilde, const TablePtr& table,
                       const std::vector<VarId>& pIds, const std::vector<VarId>& cIds) {
    size_t n = pIds.size();
    FnMatrix out(n, n, zeroFn(table));
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k) {
            int s = signPow(parityOf(table, cIds[k]) * (parityOf(table, pIds[j]) + 1));
            out.at(j, k) = etilde.at(k, j) * Rational(s);
        }
    return out;
}

FnMatrix twistedE(const PolyMatrix& E, const TablePtr& table, const std::vector<VarId>& pIds,
                  const std::vector<VarId>& cIds) {
    size_t n = pIds.size();
    FnMatrix out(n, n, zeroFn(table));
    for (size_t k = 0; k < n; ++k)
        for (size_t m = 0; m < n; ++m) {
            int s = signPow(parityOf(table, pIds[m]) * (parityOf(table, cIds[k]) + 1));
            out.at(k, m) = RationalFn(E.at(m, k)) * Rational(s);
        }
    return out;
}

}  // namespace

ObataConnection obataConnection(const PolyMatrix& E, const std::vector<VarId>& pIds,
                                const std::vector<VarId>& cIds) {
    size_t n = pIds.size();
    const TablePtr& table = E.at(0, 0).table();
    FnMatrix etilde = invertMatrix(toFnMatrix(E));
    FnMatrix tE = twistedEtilde(etilde, table, pIds, cIds);  // Etilde_j{}^k
    FnMatrix tEmat = twistedE(E, table, pIds, cIds);         // E_k{}^m

    ObataConnection conn;
    conn.pIds = pIds;
    conn.cIds = cIds;
    conn.table = table;

    // Gamma_{p_i}{}^{p_j}{}_{p_m} = - sum_k (d^l/dp_i Etilde_j{}^k) E_k{}^m
    for (size_t i = 0; i < n; ++i) {
        FnMatrix g(n, n, zeroFn(table));
        for (size_t j = 0; j < n; ++j)
            for (size_t m = 0; m < n; ++m) {
                RationalFn acc = zeroFn(table);
                for (size_t k = 0; k < n; ++k) {
                    RationalFn d = tE.at(j, k).leftDerivative(pIds[i]);
                    if (!d.isZero()) acc += d * tEmat.at(k, m);
                }
                g.at(j, m) = -acc;
            }
        conn.gammaP.push_back(std::move(g));
    }
    // Gamma_{c_i}{}^{c_j}{}_{c_m} = - sum_k (d^l/dc_i E_j{}^k) Etilde_k{}^m
    for (size_t i = 0; i < n; ++i) {
        FnMatrix g(n, n, zeroFn(table));
        for (size_t j = 0; j < n; ++j)
            for (size_t m = 0; m < n; ++m) {
                RationalFn acc = zeroFn(table);
                for (size_t k = 0; k < n; ++k) {
                    RationalFn d = tEmat.at(j, k).leftDerivative(cIds[i]);
                    if (!d.isZero()) acc += d * tE.at(k, m);
                }
                g.at(j, m) = -acc;
            }
        conn.gammaC.push_back(std::move(g));
    }
    return conn;
}

namespace {

// Gamma_I{}^J{}_M with the block structure; zero for any mixed index pattern
RationalFn gammaAt(const ObataConnection& conn, size_t I, size_t J, size_t M) {
    size_t n = conn.pIds.size();
    bool ip = I < n, jp = J < n, mp = M < n;
    if (ip && jp && mp) return conn.gammaP[I].at(J, M);
    if (!ip && !jp && !mp) return conn.gammaC[I - n].at(J - n, M - n);
    return RationalFn::constant(conn.table, Rational(0));
}

VarId xiVar(const ObataConnection& conn, size_t I) {
    size_t n = conn.pIds.size();
    return I < n ? conn.pIds[I] : conn.cIds[I - n];
}

}  // namespace

FnMatrix covariantDerivative(const ObataConnection& conn, size_t I, const ParityStructure& s) {
    size_t d = s.dim();
    const TablePtr& table = conn.table;
    int epsI = parityOf(table, xiVar(conn, I));
    FnMatrix out(d, d, RationalFn::constant(table, Rational(0)));
    for (size_t J = 0; J < d; ++J)
        for (size_t K = 0; K < d; ++K) {
            int epsJ = parityOf(table, s.xi[J]);
            RationalFn acc = s.comp.at(J, K).leftDerivative(xiVar(conn, I));
            for (size_t M = 0; M < d; ++M) {
                RationalFn g1 = gammaAt(conn, I, J, M);
                if (!g1.isZero()) acc += g1 * s.comp.at(M, K);
                RationalFn g2 = gammaAt(conn, I, M, K);
                if (!g2.isZero()) {
                    int epsM = parityOf(table, s.xi[M]);
                    // Gamma^M_{IK} = (-1)^(e_I e_M) Gamma_I{}^M{}_K
                    int sgn = signPow(epsI * epsJ) * signPow(epsI * epsM);
                    acc -= s.comp.at(J, M) * g2 * Rational(sgn);
                }
            }
            out.at(J, K) = acc;
        }
    return out;
}

ObataCurvature obataCurvature(const ObataConnection& conn) {
    size_t n = conn.pIds.size();
    size_t d = 2 * n;
    const TablePtr& table = conn.table;
    ObataCurvature curv;

    // R(I,J)^K_L = d^l_I Gamma_J{}^K{}_L - (-1)^(e_I e_J) d^l_J Gamma_I{}^K{}_L
    //            + Gamma_I{}^K{}_M Gamma_J{}^M{}_L
    //            - (-1)^(e_I e_J) Gamma_J{}^K{}_M Gamma_I{}^M{}_L
    for (size_t I = 0; I < d; ++I)
        for (size_t J = 0; J <= I; ++J) {
            int epsI = parityOf(table, xiVar(conn, I));
            int epsJ = parityOf(table, xiVar(conn, J));
            if (I == J && ((epsI * epsJ) & 1) == 0) continue;  // antisymmetric slot
            int s = signPow(epsI * epsJ);
            for (size_t K = 0; K < d; ++K)
                for (size_t L = 0; L < d; ++L) {
                    RationalFn r = gammaAt(conn, J, K, L).leftDerivative(xiVar(conn, I)) -
                                   gammaAt(conn, I, K, L).leftDerivative(xiVar(conn, J)) *
                                       Rational(s);
                    for (size_t M = 0; M < d; ++M) {
                        RationalFn g1 = gammaAt(conn, I, K, M);
                        RationalFn g2 = gammaAt(conn, J, M, L);
                        if (!g1.isZero() && !g2.isZero()) r += g1 * g2;
                        RationalFn g3 = gammaAt(conn, J, K, M);
                        RationalFn g4 = gammaAt(conn, I, M, L);
                        if (!g3.isZero() && !g4.isZero()) r -= g3 * g4 * Rational(s);
                    }
                    if (!r.isZero()) {
                        curv.isFlat = false;
                        std::ostringstream os;
                        os << "R(" << I << "," << J << ")^" << K << "_" << L;
                        curv.nonzeroWitness.push_back(os.str());
                        curv.componentList.push_back({os.str(), r});
                    }
                }
        }
    return curv;
}

BiDarbouxStructures biDarbouxStructures(const std::vector<VarId>& pIds,
                                        const std::vector<VarId>& cIds, const TablePtr& table,
                                        const RatMatrix* conjugate) {
    size_t n = pIds.size();
    auto fromGenerator = [&](const RatMatrix& t) {
        RatMatrix g = t;
        if (conjugate) {
            RatMatrix inv = invertRatMatrix(*conjugate);
            g = inv * t * *conjugate;  // t -> g^-1 t g
        }
        ParityStructure s;
        s.xi = pIds;
        s.xi.insert(s.xi.end(), cIds.begin(), cIds.end());
        s.comp = FnMatrix(2 * n, 2 * n, zeroFn(table));
        for (size_t a = 0; a < 2; ++a)
            for (size_t b = 0; b < 2; ++b)
                for (size_t j = 0; j < n; ++j)
                    s.comp.at(a * n + j, b * n + j) = RationalFn::constant(table, g.at(a, b));
        return s;
    };

    RatMatrix t0(2, 2, Rational(0)), t1(2, 2, Rational(0)), t2(2, 2, Rational(0)),
        t3(2, 2, Rational(0));
    t0.at(0, 0) = 1; t0.at(1, 1) = 1;
    t1.at(0, 1) = 1; t1.at(1, 0) = 1;
    t2.at(0, 1) = -1; t2.at(1, 0) = 1;
    t3.at(0, 0) = 1; t3.at(1, 1) = -1;

    return BiDarbouxStructures{fromGenerator(t0), fromGenerator(t1), fromGenerator(t2),
                               fromGenerator(t3)};
}

}  // namespace trip
