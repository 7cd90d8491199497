#ifndef TRIP_POISSON_HPP
#define TRIP_POISSON_HPP

#include <optional>
#include <string>
#include <vector>

#include "trip/matrix.hpp"
#include "trip/parser.hpp"
#include "trip/superpoly.hpp"

namespace trip {

// Ordered coordinate system z^A with a common intrinsic bracket parity.
struct Chart {
    TablePtr table;
    std::vector<VarId> coords;  // the z^A, in order
    int epsilon = 0;            // intrinsic Grassmann parity of the brackets
    std::optional<int> trunc;

    size_t dim() const { return coords.size(); }
    SuperPoly coord(size_t a) const { return SuperPoly::variable(table, coords[a], trunc); }
    int coordParity(size_t a) const { return table->at(coords[a]).parity; }
};

// Fundamental bracket matrix Pi^{AB} = {z^A, z^B}. Construction verifies the
// graded antisymmetry and the parity rule eps(Pi^{AB}) = eps_A + eps + eps_B.
class PoissonStructure {
  public:
    PoissonStructure(Chart chart, PolyMatrix pi);

    const Chart& chart() const { return chart_; }
    const PolyMatrix& pi() const { return pi_; }
    int epsilon() const { return chart_.epsilon; }

    PoissonStructure withPi(PolyMatrix pi) const { return PoissonStructure(chart_, std::move(pi)); }

  private:
    Chart chart_;
    PolyMatrix pi_;
};

struct PoissonPencil {
    PoissonStructure first, second;
};

// {f,g} = (f d^r/dz^A) Pi^{AB} (d^l/dz^B g)
SuperPoly bracket(const SuperPoly& f, const SuperPoly& g, const PoissonStructure& s);
// same contraction for rational-function arguments
RationalFn bracketFn(const RationalFn& f, const RationalFn& g, const PoissonStructure& s);

struct JacobiViolation {
    size_t A, B, C;  // coordinate indices
    int a, b;        // bracket labels in {1,2}; a == b for a plain Jacobi check
    SuperPoly residual;
};

struct JacobiReport {
    std::vector<JacobiViolation> violations;
    bool pass() const { return violations.empty(); }
};

// cyclic sum of the (symmetrized) Jacobi identity over all coordinate triples
JacobiReport checkJacobi(const PoissonStructure& s);
JacobiReport checkSymmetrizedJacobi(const PoissonPencil& p);

// residual of the symmetrized identity for arbitrary homogeneous arguments
SuperPoly symmetrizedJacobiResidual(const SuperPoly& f, const SuperPoly& g, const SuperPoly& h,
                                    const PoissonStructure& sa, const PoissonStructure& sb,
                                    int epsilon);

bool isCasimir(const SuperPoly& f, const PoissonStructure& s);

struct InvolutivityReport {
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

// casimirs1 are Casimirs of the second bracket (the p's; reversed labeling),
// casimirs2 of the first (the c's); afterwards checks {xi,xi'}^c = 0 for all
// pairs under both brackets
InvolutivityReport checkMutualInvolutivity(const PoissonPencil& p,
                                           const std::vector<SuperPoly>& casimirs1,
                                           const std::vector<SuperPoly>& casimirs2);

// {.,.}'^b = {.,.}^a (g^-1)_a{}^b, a left GL(2) action on the pencil
PoissonPencil gl2Rotate(const PoissonPencil& p, const RatMatrix& g);

// linear combination l1 Pi^1 + l2 Pi^2 as a single structure
PoissonStructure linearCombination(const PoissonPencil& p, const Rational& l1, const Rational& l2);

// rank over Q of Pi evaluated on the even body at the given point
int bodyRank(const PoissonStructure& s, const std::map<VarId, Rational>& point);

}  // namespace trip

#endif
