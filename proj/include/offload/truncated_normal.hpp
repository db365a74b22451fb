#pragma once

#include "offload/rng.hpp"

namespace offload {

/// Normal(mean, stddev) conditioned on [lo, hi].
///
/// Rejection from the untruncated normal while the window holds at least 1%
/// of the mass; narrower windows go through the inverse CDF instead, so the
/// draw count stays bounded. Throws ConfigError unless lo < hi and stddev > 0.
double truncated_normal_sample(double mean, double stddev, double lo, double hi, Rng& rng);

/// Analytic mean and CDF, used by tests and the CLI diagnostics.
double truncated_normal_mean(double mean, double stddev, double lo, double hi);
double truncated_normal_cdf(double x, double mean, double stddev, double lo, double hi);

}  // namespace offload
