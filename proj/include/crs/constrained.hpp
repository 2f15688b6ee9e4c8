#ifndef CRS_CONSTRAINED_HPP
#define CRS_CONSTRAINED_HPP

#include <utility>

#include "crs/event_model.hpp"

namespace crs {

// Joint maximizer of log L1(alpha1) + log L2(alpha2) subject to
// |alpha1[state] - alpha2[state]| = delta. Coordinates other than `state`
// separate in the summed log-likelihood and equal the unconstrained MLEs.
//
// Note: the sum of log-likelihoods is *maximized* here; the constrained
// estimates sit on the margin of the per-state null hypothesis and drive
// the bootstrap data generation.
struct ConstrainedFit {
  IntensityVector alpha1;
  IntensityVector alpha2;
  int state = 1;       // constrained coordinate, 1-based
  double delta = 0.0;  // margin value
  double constrained_loglik = 0.0;
  int sign = +1;  // sign of alpha1[state] - alpha2[state]
};

// Closed-form solution. For each sign s of the constraint the substitution
// a2 = a1 - s*delta turns the stationarity condition
// N1/a + N2/(a - s*delta) = S1 + S2 into a quadratic in a; the feasible
// root is evaluated for both signs and the better one returned. Ties are
// broken toward the sign of the unconstrained difference, then toward +1.
// Zero counts put the optimum on the boundary (a coordinate may sit at 0).
ConstrainedFit constrained_mle(const SufficientStats& stats1,
                               const SufficientStats& stats2, int state,
                               double delta);

// Intensities used to generate bootstrap data for the test on `state`:
// the unconstrained MLEs when they already satisfy the null
// (|difference| >= delta), otherwise the constrained fit.
std::pair<IntensityVector, IntensityVector> select_bootstrap_intensities(
    const SufficientStats& stats1, const SufficientStats& stats2, int state,
    double delta);

}  // namespace crs

#endif
