#ifndef TRIP_HOMOTOPY_HPP
#define TRIP_HOMOTOPY_HPP

#include <string>
#include <vector>

#include "trip/matrix.hpp"
#include "trip/superpoly.hpp"

namespace trip {

// The tri-graded algebra of Appendix-style triples x^i_alpha, alpha in
// {1,2,3}, with eps(x^i_alpha) = eps_i + delta^3_alpha. The x^i_3 generators
// are "one-forms" only in name; they carry form-degree 0.
class TriAlgebra {
  public:
    static TriAlgebra make(int n, const std::vector<int>& parities,
                           std::optional<int> trunc = std::nullopt,
                           const std::vector<std::string>* names1 = nullptr,
                           const std::vector<std::string>* names2 = nullptr,
                           const std::vector<std::string>* names3 = nullptr);

    int n() const { return n_; }
    const TablePtr& table() const { return table_; }
    std::optional<int> truncation() const { return trunc_; }
    VarId x(int alpha, int i) const { return x_[static_cast<size_t>(alpha - 1)][static_cast<size_t>(i)]; }
    SuperPoly xPoly(int alpha, int i) const {
        return SuperPoly::variable(table_, x(alpha, i), trunc_);
    }

    int degAlpha(const Monomial& m, int alpha) const;
    SuperPoly zero() const { return SuperPoly(table_, trunc_); }
    SuperPoly constant(const Rational& c) const {
        return SuperPoly::constant(table_, c, trunc_);
    }

  private:
    int n_ = 0;
    TablePtr table_;
    std::optional<int> trunc_;
    std::vector<VarId> x_[3];
};

// Grassmann-odd differentials and their duals
SuperPoly dA(const TriAlgebra& a, int which, const SuperPoly& f);  // d^a = x3 d/dx_a
SuperPoly iA(const TriAlgebra& a, int which, const SuperPoly& f);  // i_a = x_a d/dx3

// scriptL(a,b) = [i_b, d^a]; trace, second-order d and i, L = [d,i], Lambda
SuperPoly scriptL(const TriAlgebra& a, int upper, int lower, const SuperPoly& f);
SuperPoly traceL(const TriAlgebra& a, const SuperPoly& f);
SuperPoly dOp(const TriAlgebra& a, const SuperPoly& f);  // d^1 d^2
SuperPoly iOp(const TriAlgebra& a, const SuperPoly& f);  // i_2 i_1
SuperPoly LOp(const TriAlgebra& a, const SuperPoly& f);  // [d, i]
// rational anticommutator form of Lambda (no complex scalars)
SuperPoly Lambda(const TriAlgebra& a, const SuperPoly& f);
SuperPoly LambdaPrime(const TriAlgebra& a, const SuperPoly& f);  // Lambda - L + 2
SuperPoly ROp(const TriAlgebra& a, int lower, const SuperPoly& f);

struct BlockCertificate {
    int n1, n2, n3;
    size_t dim;
    Rational det;
};

// exact matrix of Lambda on the monomial basis of the direct sum of the
// blocks with n1 + n2 = n12 and the given n3
struct GradedBlockOperator {
    int n12, n3;
    std::vector<Monomial> basis;
    RatMatrix matrix;
    Rational det;
};

GradedBlockOperator lambdaBlock(const TriAlgebra& a, int n12, int n3);

struct HomotopyResult {
    SuperPoly eta;
    std::vector<BlockCertificate> blocks;  // invertibility certificates
};

// For closed omega with deg3 >= 2 everywhere: eta = i Lambda^-1 omega with
// d^1 d^2 eta = omega, solved blockwise by exact elimination.
// Errors: NotClosed, DegreeTooLow.
HomotopyResult biPoincareHomotopy(const TriAlgebra& a, const SuperPoly& omega);

// Bridge used by the chart-level gauge fix: variables (p; c; eta) become
// (x1; x2; x3). F is the n x n graded-antisymmetric matrix of {q^i,q^j}^2 in
// the p/c generators named by pNames/cNames; epsilon is the bracket parity.
struct ChartBridge {
    TriAlgebra algebra;
    SuperPoly beta2;  // (1/2) eta_i F^{ij} eta_j (-1)^(eps(eta_j) eps)
    SuperPoly B;      // zero-form with beta2 = d^2 d^1 B
    std::vector<BlockCertificate> blocks;
};

ChartBridge bridgeToChart(const PolyMatrix& F, const std::vector<std::string>& pNames,
                          const std::vector<std::string>& cNames,
                          const std::vector<int>& positionParities, int epsilon);

// rebuild a polynomial over a table that lists (at least) generators with the
// same names and gradings, multiplying generators in the source word order
SuperPoly transportByName(const SuperPoly& f, const TablePtr& target);

}  // namespace trip

#endif
