#ifndef TRIP_LIEGROUP_HPP
#define TRIP_LIEGROUP_HPP

#include <array>
#include <string>
#include <vector>

#include "trip/matrix.hpp"

namespace trip::lie {

// Minkowski metric diag(1,-1,1) in 2+1 dimensions; the middle slot is the
// temporal one, matching the split-quaternion generator that squares to -1.
RatMatrix minkowskiMetric();
std::array<RatMatrix, 4> tGenerators();  // t0 = Id, t1, t2, t3
std::array<RatMatrix, 3> TGenerators();  // so(2,1) generators T1, T2, T3

struct CheckReport {
    bool pass = true;
    std::vector<std::string> failures;
};

// t_a t_b = eta_ab Id + eps_abc eta^cd t_d on all index pairs, t0 central
CheckReport paraQuaternionTable();

bool isLorentz(const RatMatrix& lambda);
bool isRestrictedLorentz(const RatMatrix& lambda);

// g t_b g^-1 = t_a Lambda^a_b for det g = 1; lands in SO+(2,1).
// Throws NotUnitDeterminant.
RatMatrix adjointMap(const RatMatrix& g);

// [T_a,T_b] = eps_abc eta^cd T_d, the T_a -> t_a/2 isomorphism, and the
// epsilon contraction identity
CheckReport lieAlgebraCheck();

// order-by-order agreement of Ad(exp(x^a t_a / 2)) with exp(x^a T_a) in a
// formal parameter, through the given order
bool adjointSeriesAgree(const std::array<Rational, 3>& direction, int order);

}  // namespace trip::lie

#endif
