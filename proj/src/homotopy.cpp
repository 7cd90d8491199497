#include "trip/homotopy.hpp"

#include <algorithm>
#include <functional>

#include "trip/error.hpp"

namespace trip {

TriAlgebra TriAlgebra::make(int n, const std::vector<int>& parities, std::optional<int> trunc,
                            const std::vector<std::string>* names1,
                            const std::vector<std::string>* names2,
                            const std::vector<std::string>* names3) {
    if (static_cast<int>(parities.size()) != n)
        throw Error("ShapeMismatch", "need one parity per index");
    TriAlgebra a;
    a.n_ = n;
    a.trunc_ = trunc;
    VariableTable t;
    auto nameOf = [&](int alpha, int i) {
        const std::vector<std::string>* names =
            alpha == 1 ? names1 : (alpha == 2 ? names2 : names3);
        if (names) return (*names)[static_cast<size_t>(i)];
        return "x" + std::to_string(alpha) + "_" + std::to_string(i + 1);
    };
    for (int alpha = 1; alpha <= 3; ++alpha)
        for (int i = 0; i < n; ++i) {
            int parity = (parities[static_cast<size_t>(i)] + (alpha == 3 ? 1 : 0)) & 1;
            a.x_[alpha - 1].push_back(
                t.add(nameOf(alpha, i), parity, 0, VarRole::Auxiliary, i + 1));
        }
    a.table_ = freeze(std::move(t));
    return a;
}

int TriAlgebra::degAlpha(const Monomial& m, int alpha) const {
    int d = 0;
    for (const auto& [v, k] : m.entries()) {
        const auto& col = x_[static_cast<size_t>(alpha - 1)];
        if (std::find(col.begin(), col.end(), v) != col.end()) d += k;
    }
    return d;
}

SuperPoly dA(const TriAlgebra& a, int which, const SuperPoly& f) {
    SuperPoly out = a.zero();
    for (int i = 0; i < a.n(); ++i) out += a.xPoly(3, i) * f.leftDerivative(a.x(which, i));
    return out;
}

SuperPoly iA(const TriAlgebra& a, int which, const SuperPoly& f) {
    SuperPoly out = a.zero();
    for (int i = 0; i < a.n(); ++i) out += a.xPoly(which, i) * f.leftDerivative(a.x(3, i));
    return out;
}

SuperPoly scriptL(const TriAlgebra& a, int upper, int lower, const SuperPoly& f) {
    // [i_b, d^a] with both operators odd: i_b d^a + d^a i_b
    return iA(a, lower, dA(a, upper, f)) + dA(a, upper, iA(a, lower, f));
}

SuperPoly traceL(const TriAlgebra& a, const SuperPoly& f) {
    return scriptL(a, 1, 1, f) + scriptL(a, 2, 2, f);
}

SuperPoly dOp(const TriAlgebra& a, const SuperPoly& f) { return dA(a, 1, dA(a, 2, f)); }

SuperPoly iOp(const TriAlgebra& a, const SuperPoly& f) { return iA(a, 2, iA(a, 1, f)); }

SuperPoly LOp(const TriAlgebra& a, const SuperPoly& f) {
    // d and i are Grassmann-even second-order operators
    return dOp(a, iOp(a, f)) - iOp(a, dOp(a, f));
}

SuperPoly Lambda(const TriAlgebra& a, const SuperPoly& f) {
    auto anti = [&](int a1, int b1, int a2, int b2) {
        return scriptL(a, a1, b1, scriptL(a, a2, b2, f)) +
               scriptL(a, a2, b2, scriptL(a, a1, b1, f));
    };
    Rational half(1, 2);
    return anti(1, 1, 2, 2) * half - anti(2, 1, 1, 2) * half - traceL(a, f) * half;
}

SuperPoly LambdaPrime(const TriAlgebra& a, const SuperPoly& f) {
    return Lambda(a, f) - traceL(a, f) + f * Rational(2);
}

SuperPoly ROp(const TriAlgebra& a, int lower, const SuperPoly& f) {
    // R_b = eps_{ba} scriptL^a_c i_d eps^{dc}, with eps^{12} = eps_{21} = +1
    auto inner = [&](int upper) {
        // scriptL^{upper}_c i_d eps^{dc} = scriptL^{upper}_2 i_1 - scriptL^{upper}_1 i_2
        return scriptL(a, upper, 2, iA(a, 1, f)) - scriptL(a, upper, 1, iA(a, 2, f));
    };
    if (lower == 1) return -inner(2);
    return inner(1);
}

namespace {

// all monomials with the exact tri-degree (n1, n2, n3)
void enumerateBlock(const TriAlgebra& a, int alpha, int i, int remaining[3], Monomial current,
                    std::vector<Monomial>& out) {
    if (alpha > 3) {
        if (remaining[0] == 0 && remaining[1] == 0 && remaining[2] == 0)
            out.push_back(current);
        return;
    }
    if (i >= a.n()) {
        enumerateBlock(a, alpha + 1, 0, remaining, current, out);
        return;
    }
    VarId v = a.x(alpha, i);
    int cap = a.table()->at(v).selfSign() ? 1 : remaining[alpha - 1];
    for (int k = 0; k <= cap; ++k) {
        if (k > remaining[alpha - 1]) break;
        Monomial next = current;
        if (k > 0) {
            auto prod = mulMonomials(current, Monomial::variable(v, k), *a.table());
            if (!prod) break;
            next = prod->mono;  // sign is +1: ids added in increasing order
        }
        remaining[alpha - 1] -= k;
        enumerateBlock(a, alpha, i + 1, remaining, next, out);
        remaining[alpha - 1] += k;
    }
}

std::vector<Monomial> blockBasis(const TriAlgebra& a, int n1, int n2, int n3) {
    std::vector<Monomial> out;
    int remaining[3] = {n1, n2, n3};
    enumerateBlock(a, 1, 0, remaining, Monomial{}, out);
    std::sort(out.begin(), out.end());
    return out;
}

RatMatrix operatorMatrix(const TriAlgebra& a, const std::vector<Monomial>& basis,
                         const std::function<SuperPoly(const SuperPoly&)>& op) {
    std::map<Monomial, size_t> indexOf;
    for (size_t k = 0; k < basis.size(); ++k) indexOf[basis[k]] = k;
    RatMatrix m(basis.size(), basis.size(), Rational(0));
    for (size_t j = 0; j < basis.size(); ++j) {
        SuperPoly img = op(SuperPoly::fromMonomial(a.table(), basis[j], Rational(1)));
        for (const auto& [mono, c] : img.terms()) {
            auto it = indexOf.find(mono);
            if (it == indexOf.end())
                throw Error("BlockLeak", "operator left the graded block");
            m.at(it->second, j) = c;
        }
    }
    return m;
}

}  // namespace

GradedBlockOperator lambdaBlock(const TriAlgebra& a, int n12, int n3) {
    GradedBlockOperator block;
    block.n12 = n12;
    block.n3 = n3;
    for (int n1 = 0; n1 <= n12; ++n1) {
        auto part = blockBasis(a, n1, n12 - n1, n3);
        block.basis.insert(block.basis.end(), part.begin(), part.end());
    }
    block.matrix = operatorMatrix(a, block.basis,
                                  [&](const SuperPoly& f) { return Lambda(a, f); });
    block.det = block.basis.empty() ? Rational(1) : determinant(block.matrix);
    return block;
}

HomotopyResult biPoincareHomotopy(const TriAlgebra& a, const SuperPoly& omega) {
    for (int which = 1; which <= 2; ++which) {
        SuperPoly closed = dA(a, which, omega);
        if (!closed.isZero())
            throw Error("NotClosed", "d^" + std::to_string(which) +
                                         " omega = " + closed.str());
    }
    // split by exact tri-degree; Lambda preserves each block
    std::map<std::array<int, 3>, SuperPoly> pieces;
    for (const auto& [m, c] : omega.terms()) {
        int n3 = a.degAlpha(m, 3);
        if (n3 <= 1)
            throw Error("DegreeTooLow",
                        "omega has a component of form degree " + std::to_string(n3));
        std::array<int, 3> key{a.degAlpha(m, 1), a.degAlpha(m, 2), n3};
        auto it = pieces.try_emplace(key, a.zero()).first;
        it->second += SuperPoly::fromMonomial(a.table(), m, c, omega.truncation());
    }

    HomotopyResult result{a.zero(), {}};
    for (const auto& [key, piece] : pieces) {
        auto basis = blockBasis(a, key[0], key[1], key[2]);
        RatMatrix lam = operatorMatrix(a, basis,
                                       [&](const SuperPoly& f) { return Lambda(a, f); });
        // solve Lambda u = piece by exact elimination on the augmented system
        size_t dim = basis.size();
        std::map<Monomial, size_t> indexOf;
        for (size_t k = 0; k < dim; ++k) indexOf[basis[k]] = k;
        std::vector<Rational> rhs(dim, Rational(0));
        for (const auto& [m, c] : piece.terms()) rhs[indexOf.at(m)] = c;

        RatMatrix aug(dim, dim + 1, Rational(0));
        for (size_t i = 0; i < dim; ++i) {
            for (size_t j = 0; j < dim; ++j) aug.at(i, j) = lam.at(i, j);
            aug.at(i, dim) = rhs[i];
        }
        Rational det(1);
        for (size_t col = 0; col < dim; ++col) {
            size_t pivot = dim;
            for (size_t r = col; r < dim; ++r)
                if (aug.at(r, col) != 0) {
                    pivot = r;
                    break;
                }
            if (pivot == dim)
                throw Error("LambdaSingular", "Lambda block unexpectedly singular");
            if (pivot != col) {
                for (size_t j = 0; j <= dim; ++j) std::swap(aug.at(pivot, j), aug.at(col, j));
                det = -det;
            }
            det *= aug.at(col, col);
            Rational inv = 1 / aug.at(col, col);
            for (size_t j = col; j <= dim; ++j) aug.at(col, j) *= inv;
            for (size_t r = 0; r < dim; ++r) {
                if (r == col || aug.at(r, col) == 0) continue;
                Rational f = aug.at(r, col);
                for (size_t j = col; j <= dim; ++j) aug.at(r, j) -= f * aug.at(col, j);
            }
        }
        SuperPoly u = a.zero();
        for (size_t k = 0; k < dim; ++k)
            if (aug.at(k, dim) != 0)
                u += SuperPoly::fromMonomial(a.table(), basis[k], aug.at(k, dim),
                                             omega.truncation());
        result.eta += iOp(a, u);
        result.blocks.push_back({key[0], key[1], key[2], dim, det});
    }

    SuperPoly check = dOp(a, result.eta) - omega;
    if (!check.isZero())
        throw Error("HomotopyPostcondition", "d eta != omega, residual " + check.str());
    return result;
}

SuperPoly transportByName(const SuperPoly& f, const TablePtr& target) {
    SuperPoly out(target, f.truncation());
    for (const auto& [m, c] : f.terms()) {
        SuperPoly term = SuperPoly::constant(target, c, f.truncation());
        for (const auto& [v, k] : m.entries()) {
            const auto& gv = f.table()->at(v);
            VarId tv = target->idOf(gv.name);
            const auto& tgv = target->at(tv);
            if (tgv.parity != gv.parity || tgv.formDegree != gv.formDegree)
                throw Error("GradingMismatch", "transport changes grading of " + gv.name);
            term = term * SuperPoly::variable(target, tv).pow(k);
        }
        out += term;
    }
    return out;
}

ChartBridge bridgeToChart(const PolyMatrix& F, const std::vector<std::string>& pNames,
                          const std::vector<std::string>& cNames,
                          const std::vector<int>& positionParities, int epsilon) {
    int n = static_cast<int>(pNames.size());
    std::vector<int> momentumParities;
    std::vector<std::string> etaNames;
    for (int i = 0; i < n; ++i) {
        momentumParities.push_back((positionParities[static_cast<size_t>(i)] + epsilon) & 1);
        etaNames.push_back("eta" + std::to_string(i + 1));
    }
    TriAlgebra algebra =
        TriAlgebra::make(n, momentumParities, std::nullopt, &pNames, &cNames, &etaNames);
    // eps(eta_i) = eps_i + 1 - epsilon = eps(p_i) + 1, which is the x3 grading

    ChartBridge bridge{algebra, algebra.zero(), algebra.zero(), {}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (F.at(static_cast<size_t>(i), static_cast<size_t>(j)).isZero()) continue;
            SuperPoly fij =
                transportByName(F.at(static_cast<size_t>(i), static_cast<size_t>(j)),
                                algebra.table());
            int epsEtaJ = algebra.table()->at(algebra.x(3, j)).parity;
            Rational coef(1, 2);
            if ((epsEtaJ * epsilon) & 1) coef = -coef;
            bridge.beta2 += algebra.xPoly(3, i) * fij * algebra.xPoly(3, j) * coef;
        }

    if (!bridge.beta2.isZero()) {
        HomotopyResult h = biPoincareHomotopy(algebra, bridge.beta2);
        bridge.B = -h.eta;
        bridge.blocks = std::move(h.blocks);
        // beta2 = d^2 d^1 B since d^2 d^1 = -d^1 d^2 on the zero-form B
        SuperPoly check = dA(algebra, 2, dA(algebra, 1, bridge.B)) - bridge.beta2;
        if (!check.isZero())
            throw Error("HomotopyPostcondition", "beta2 != d2 d1 B, residual " + check.str());
    }
    return bridge;
}

}  // namespace trip
