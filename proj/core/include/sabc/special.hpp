#pragma once

namespace sabc {

double normal_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS241, ~1e-16 relative accuracy).
/// Returns -inf / +inf at p == 0 / p == 1; NaN outside [0, 1].
double normal_quantile(double p);

double log_beta(double a, double b);

/// log(n choose k) for integer-valued arguments.
double log_choose(double n, double k);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace sabc
