#ifndef TRIP_TRIPLECTIC_HPP
#define TRIP_TRIPLECTIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "trip/homotopy.hpp"
#include "trip/matrix.hpp"
#include "trip/poisson.hpp"

namespace trip {

struct ChartSpec {
    int n = 1;
    int epsilon = 0;
    std::vector<int> positionParities;  // eps_i = eps(q^i)
    std::optional<int> truncationDegree;
    // set when the chart came out of a truncated power-series stage: axiom
    // residuals are zero-tested after truncation to this degree
    std::optional<int> checkDegree;
};

// Chart {q^i; p_j; c_k} with the first bracket in Darboux form. The second
// bracket is determined by E^i_j = {q^i,c_j}^2 and F^{ij} = {q^i,q^j}^2.
// Construction re-verifies every chart axiom (Darboux form, Casimir
// structure, q-independence, E invertibility, graded antisymmetry of F).
class TriplecticChart {
  public:
    static TriplecticChart canonical(const ChartSpec& spec);
    TriplecticChart withEF(PolyMatrix E, PolyMatrix F) const;

    // assemble from raw bracket matrices over an externally built table;
    // throws NotSemiCanonical / QDependent / ESingular when the axioms fail
    static TriplecticChart fromPencil(ChartSpec spec, TablePtr table, std::vector<VarId> q,
                                      std::vector<VarId> p, std::vector<VarId> c,
                                      PolyMatrix pi1, PolyMatrix pi2);

    // same, but with the second bracket given through its E and F blocks
    static TriplecticChart fromEF(ChartSpec spec, TablePtr table, std::vector<VarId> q,
                                  std::vector<VarId> p, std::vector<VarId> c, PolyMatrix E,
                                  PolyMatrix F);

    const ChartSpec& spec() const { return spec_; }
    int n() const { return spec_.n; }
    int epsilon() const { return spec_.epsilon; }
    const TablePtr& table() const { return table_; }
    const PoissonPencil& pencil() const { return *pencil_; }

    const std::vector<VarId>& qIds() const { return q_; }
    const std::vector<VarId>& pIds() const { return p_; }
    const std::vector<VarId>& cIds() const { return c_; }

    SuperPoly qPoly(int i) const { return SuperPoly::variable(table_, q_[static_cast<size_t>(i)], spec_.truncationDegree); }
    SuperPoly pPoly(int i) const { return SuperPoly::variable(table_, p_[static_cast<size_t>(i)], spec_.truncationDegree); }
    SuperPoly cPoly(int i) const { return SuperPoly::variable(table_, c_[static_cast<size_t>(i)], spec_.truncationDegree); }

    const PolyMatrix& E() const { return E_; }
    const PolyMatrix& F() const { return F_; }

    bool isCanonicalBiDarboux() const;  // E = Id and F = 0

    // empty until assigned from one of the factory functions
    TriplecticChart() = default;

  private:
    ChartSpec spec_;
    TablePtr table_;
    std::vector<VarId> q_, p_, c_;
    std::shared_ptr<const PoissonPencil> pencil_;
    PolyMatrix E_, F_;
};

struct EFMatrices {
    PolyMatrix E, F;
};

// verify the semi-canonical axioms of the pencil and extract E and F
EFMatrices extractEF(const TriplecticChart& chart);

struct ClosednessReport {
    bool pass = true;
    std::vector<std::string> residuals;
    std::vector<SuperPoly> potentialA;  // E^i_j = d^l/dp_i A_j
    // potentials for Etilde in c, when Etilde is polynomial
    std::optional<std::vector<SuperPoly>> potentialAtilde;
};

ClosednessReport checkClosedness(const TriplecticChart& chart);
// raw-matrix variant (used for constructed violations that cannot form a chart)
ClosednessReport checkClosednessOf(const PolyMatrix& e, const std::vector<VarId>& pIds,
                                   const std::vector<VarId>& cIds,
                                   std::optional<int> checkDegree = std::nullopt);

using BodyPoint = std::map<VarId, Rational>;

// deterministic search for a base point where det E is nonzero on the body
BodyPoint defaultBasePoint(const TriplecticChart& chart);

struct Factorization {
    PolyMatrix P, C;  // E(p,c) = P(p) C(c)
};

struct FactorizationAttempt {
    PolyMatrix P, C;
    PolyMatrix residual;  // P C - E
    bool exact = false;
};

// candidate P(p) = E(p,c0), C(c) = E(p0,c0)^-1 E(p0,c) and its residual
FactorizationAttempt factorizeCandidate(const TriplecticChart& chart, const BodyPoint& base);

// the candidate when the product reproduces E exactly, nullopt otherwise
std::optional<Factorization> factorize(const TriplecticChart& chart, const BodyPoint& base);

// d/dp_i [ (d/dc_j Etilde) E ] = 0 as an exact rational-function identity
bool checkDifferentialFactorization(const TriplecticChart& chart);

// polynomials phi_j with d^l/dv_i phi_j = M^i_j and phi(0) = 0
std::vector<SuperPoly> integrateJacobian(const PolyMatrix& m, const std::vector<VarId>& vars,
                                         const TablePtr& table);

struct F3Generator {
    std::vector<SuperPoly> A;  // A_j = A_j(p); -F_3 = A_j q'^j + B
    SuperPoly B;               // B = B(p,c)
};

struct PolyMap {
    std::vector<VarId> vars;          // the variables being remapped
    std::vector<SuperPoly> forward;   // new values in terms of old symbols
    std::vector<SuperPoly> inverse;   // old values in terms of new symbols
    bool exactInverse = true;         // inverse composition is exactly the identity
    int verifiedDegree = -1;          // order to which the composition was checked
};

// inverse of the polynomial map v -> forward(v) with forward(0)=0, as a
// truncated power series of the requested degree; exactInverse is set when
// the composition closes exactly in the polynomial ring
PolyMap invertPolyMap(const std::vector<SuperPoly>& forward, const std::vector<VarId>& vars,
                      const TablePtr& table, int degree);

struct F3Result {
    TriplecticChart chart;
    bool exact = true;
    int verifiedDegree = -1;
    // transformation data, all over the source chart's symbols
    std::vector<SuperPoly> newMomenta;      // p'_j = A_j(p)
    std::vector<RationalFn> newPositions;   // q'^j in old coordinates
    PolyMatrix jacobian;                    // M^i_j = d^l/dp_i A_j
    // fundamental brackets of the primed coordinates, still written in the
    // old coordinates (exact regardless of series inversion)
    FnMatrix EPrimeOld, FPrimeOld;
};

F3Result applyF3(const TriplecticChart& chart, const F3Generator& gen, int inverseDegree);

// c-sector reparametrization c'_j = gamma_j(c) from the groupoid that fixes
// q and p; gamma must have gamma(0)=0 and an invertible Jacobian
F3Result applyCasimirReparam(const TriplecticChart& chart, const std::vector<SuperPoly>& gamma,
                             int inverseDegree);

struct KillFResult {
    TriplecticChart chart;     // F' = 0
    SuperPoly gaugeB;          // B(p,c) with F from (q,{q,B}^1)^2 brackets
    std::vector<BlockCertificate> blocks;
};

// gauge away F on a chart with E = Id via the homotopy operator
KillFResult killF(const TriplecticChart& chart);

struct StageRecord {
    std::string stage;
    std::string detail;
};

struct PipelineResult {
    bool success = false;
    std::string obstruction;              // empty on success
    std::string obstructionStage;
    std::optional<TriplecticChart> chart;  // bi-Darboux chart on success
    std::optional<Factorization> factors;
    SuperPoly gaugeB;
    bool exact = true;
    int verifiedDegree = -1;
    std::vector<StageRecord> stages;
    // on obstruction: factorization residual and curvature witness
    std::optional<PolyMatrix> factorizationResidual;
    std::vector<std::string> curvatureWitness;
};

PipelineResult biDarbouxPipeline(const TriplecticChart& chart,
                                 std::optional<BodyPoint> basePoint, int degree);

// map between two bi-Darboux charts, written as new coordinates in terms of
// the old chart's symbols
struct BiCanonicalMap {
    std::vector<SuperPoly> qNew, pNew, cNew;
};

struct BiCanonicalReport {
    bool pass = true;
    std::vector<std::string> failures;
    std::optional<RatMatrix> jacobian;
    bool pureGauge = false;
    std::optional<SuperPoly> gaugeB1, gaugeB2;
};

BiCanonicalReport checkBiCanonical(const TriplecticChart& chart, const BiCanonicalMap& map);

// Para-Dolbeault differentials and the presymplectic data live on the chart
// table extended by form generators dq^i, dp_j, dc_k of form degree 1.
class FormCalculus {
  public:
    explicit FormCalculus(const TriplecticChart& chart);

    const TablePtr& table() const { return ext_; }
    const TriplecticChart& chart() const { return chart_; }

    SuperPoly lift(const SuperPoly& f) const { return f.onTable(ext_); }
    SuperPoly dq(int i) const { return SuperPoly::variable(ext_, dq_[static_cast<size_t>(i)]); }
    SuperPoly dp(int i) const { return SuperPoly::variable(ext_, dp_[static_cast<size_t>(i)]); }
    SuperPoly dc(int i) const { return SuperPoly::variable(ext_, dc_[static_cast<size_t>(i)]); }

    // de Rham differential sum_A dz^A d^l/dz^A over q, p, c
    RationalFn deRham(const RationalFn& f) const;

    // para-Dolbeault operators: which in {1,2}, tilde for the second family
    RationalFn paraDolbeault(int which, bool tilde, const RationalFn& f) const;

    RationalFn presymplecticPotential() const;  // theta = -dp_j q^j
    RationalFn presymplecticTwoForm() const;    // omega = d theta
    RationalFn restrictedTwoForm() const;       // F = -1/2 dp_j dp_i F^{ij}

  private:
    TriplecticChart chart_;
    TablePtr ext_;
    std::vector<VarId> dq_, dp_, dc_;
    FnMatrix E_, Etilde_;
};

}  // namespace trip

#endif
