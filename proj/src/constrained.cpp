#include "crs/constrained.hpp"

#include <cmath>
#include <stdexcept>

namespace crs {

namespace {

// Feasible maximizer of the profile for one sign of the constraint:
// f(a) = N1*log(a) + N2*log(a - b) - a*S1 - (a - b)*S2, with b = s*delta,
// on a > max(0, b) (boundary admissible where the count is zero).
double profile_argmax(double n1, double n2, double s1, double s2, double b) {
  const double lower = b > 0.0 ? b : 0.0;
  const double s = s1 + s2;
  if (n1 == 0.0 && n2 == 0.0) return lower;  // f is linear and decreasing
  // Stationarity N1/a + N2/(a-b) = S gives S*a^2 - (S*b + N1 + N2)*a + N1*b = 0.
  // The larger root is the feasible one; the discriminant is written in a
  // form that is exactly non-negative.
  const double disc = (s * b + n2 - n1) * (s * b + n2 - n1) + 4.0 * n1 * n2;
  double a = ((s * b + n1 + n2) + std::sqrt(disc)) / (2.0 * s);
  if (a < lower) a = lower;
  return a;
}

}  // namespace

ConstrainedFit constrained_mle(const SufficientStats& stats1,
                               const SufficientStats& stats2, int state,
                               double delta) {
  if (stats1.counts.size() != stats2.counts.size())
    throw std::invalid_argument("dimension mismatch");
  if (state < 1 || static_cast<std::size_t>(state) > stats1.counts.size())
    throw std::invalid_argument("state index out of range");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");

  const auto j = static_cast<std::size_t>(state - 1);
  const IntensityVector free1 = mle(stats1);
  const IntensityVector free2 = mle(stats2);
  const auto n1 = static_cast<double>(stats1.counts[j]);
  const auto n2 = static_cast<double>(stats2.counts[j]);

  ConstrainedFit best;
  bool have_best = false;
  double best_ll = 0.0;
  for (int sign : {+1, -1}) {
    const double b = sign * delta;
    const double a = profile_argmax(n1, n2, stats1.exposure, stats2.exposure, b);
    ConstrainedFit fit;
    fit.alpha1 = free1;
    fit.alpha2 = free2;
    fit.alpha1[j] = a;
    fit.alpha2[j] = a - b;
    fit.state = state;
    fit.delta = delta;
    fit.sign = sign;
    fit.constrained_loglik =
        log_likelihood(fit.alpha1, stats1) + log_likelihood(fit.alpha2, stats2);
    const double ll = fit.constrained_loglik;
    const bool tie = have_best && ll == best_ll;
    if (tie) {
      // Prefer the sign of the unconstrained difference, then +1.
      const double d = free1[j] - free2[j];
      const int preferred = d < 0.0 ? -1 : +1;
      if (sign == preferred) best = fit;
    } else if (!have_best || ll > best_ll) {
      best = fit;
      best_ll = ll;
      have_best = true;
    }
  }
  return best;
}

std::pair<IntensityVector, IntensityVector> select_bootstrap_intensities(
    const SufficientStats& stats1, const SufficientStats& stats2, int state,
    double delta) {
  const IntensityVector free1 = mle(stats1);
  const IntensityVector free2 = mle(stats2);
  const auto j = static_cast<std::size_t>(state - 1);
  const double d = std::abs(free1[j] - free2[j]);
  if (d >= delta) return {free1, free2};
  ConstrainedFit fit = constrained_mle(stats1, stats2, state, delta);
  return {std::move(fit.alpha1), std::move(fit.alpha2)};
}

}  // namespace crs
