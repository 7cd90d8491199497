#ifndef TRIP_PARAHYPER_HPP
#define TRIP_PARAHYPER_HPP

#include <string>
#include <vector>

#include "trip/matrix.hpp"

namespace trip {

// (1,1)-tensor on the base N with coordinates xi = (p_1..p_n; c_1..c_n).
// comp[I][J] is the component array in the convention P(d_J) = d_I P^I_J;
// composition of tensors is the ordinary matrix product of the arrays.
struct ParityStructure {
    std::vector<VarId> xi;  // p ids then c ids
    FnMatrix comp;

    size_t dim() const { return xi.size(); }
};

ParityStructure buildSigma(const std::vector<VarId>& pIds, const std::vector<VarId>& cIds,
                           const TablePtr& table);
// off-diagonal structure carrying Etilde (p rows) and E (c rows), with the
// transposed-array sign twists of the graded formulation
ParityStructure buildPfromE(const PolyMatrix& E, const std::vector<VarId>& pIds,
                            const std::vector<VarId>& cIds);
ParityStructure composeStructures(const ParityStructure& a, const ParityStructure& b);  // a.b
ParityStructure buildJ(const ParityStructure& p, const ParityStructure& sigma);  // J = P Sigma

bool isIdentityStructure(const ParityStructure& s);
bool squaresTo(const ParityStructure& s, const Rational& scalar);  // s^2 = scalar Id
bool anticommute(const ParityStructure& a, const ParityStructure& b);

// dim ker(P +- Id) on the even body at a point
std::pair<int, int> kernelDimensions(const ParityStructure& s,
                                     const std::map<VarId, Rational>& point);

// N^K_IJ = [(P^K_I d^r/dxi^M) P^M_J - P^K_M (P^M_I d^r/dxi^J)] - (-1)^(e_I e_J)(I<->J)
struct NijenhuisTensor {
    std::vector<FnMatrix> comp;  // comp[K].at(I, J)
    bool isZero() const;
    // chiral parts via 8 N_+- = N(X,Y) +- N(X,PY)
    std::vector<FnMatrix> chiralPlus, chiralMinus;
};

NijenhuisTensor nijenhuis(const ParityStructure& p);

// torsion-free connection preserving Sigma and P; Christoffels are block
// diagonal in the p/c split. gammaP[i].at(j,m) stores Gamma_{p_i}{}^{p_j}{}_{p_m}
// (the combination entering the covariant-derivative formula), and gammaC
// the c-sector analogue.
struct ObataConnection {
    std::vector<VarId> pIds, cIds;
    TablePtr table;
    std::vector<FnMatrix> gammaP, gammaC;
};

ObataConnection obataConnection(const PolyMatrix& E, const std::vector<VarId>& pIds,
                                const std::vector<VarId>& cIds);

// covariant derivative of a (1,1) tensor along xi^I per the graded formula;
// used to verify nabla Sigma = nabla P = 0
FnMatrix covariantDerivative(const ObataConnection& conn, size_t I, const ParityStructure& s);

struct ObataCurvature {
    bool isFlat = true;
    std::vector<std::string> nonzeroWitness;  // labels of nonzero components
    // components[(I,J)] as matrices in (K,L); only stored when nonzero
    std::vector<std::pair<std::string, RationalFn>> componentList;
};

ObataCurvature obataCurvature(const ObataConnection& conn);

struct BiDarbouxStructures {
    ParityStructure id, P, J, Sigma;
};

// structures built from the split-quaternion generators t_0..t_3 tensored
// over the momentum doublets; optional GL(2) conjugation of the generators
BiDarbouxStructures biDarbouxStructures(const std::vector<VarId>& pIds,
                                        const std::vector<VarId>& cIds, const TablePtr& table,
                                        const RatMatrix* conjugate = nullptr);

}  // namespace trip

#endif
