#include "offload/truncated_normal.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "offload/errors.hpp"

namespace offload {

namespace {

void check_window(double stddev, double lo, double hi) {
    if (!(stddev > 0.0)) throw ConfigError("truncated normal needs stddev > 0");
    if (!(lo < hi)) throw ConfigError("truncated normal needs lo < hi");
}

constexpr double kMinMass = 0.01;

}  // namespace

double truncated_normal_sample(double mean, double stddev, double lo, double hi, Rng& rng) {
    check_window(stddev, lo, hi);
    // Work in the lower tail, where the CDF keeps its relative precision.
    if (lo > mean) return 2.0 * mean - truncated_normal_sample(mean, stddev, 2.0 * mean - hi,
                                                              2.0 * mean - lo, rng);
    const boost::math::normal_distribution<double> unit;
    const double a = boost::math::cdf(unit, (lo - mean) / stddev);
    const double b = boost::math::cdf(unit, (hi - mean) / stddev);
    if (b - a >= kMinMass) {
        while (true) {
            const double x = mean + stddev * rng.normal();
            if (x >= lo && x <= hi) return x;
        }
    }
    // Beyond ~38 sd both CDF values underflow; the window is then effectively a point.
    if (!(b > a)) return 0.5 * (lo + hi);
    const double u = a + (b - a) * rng.uniform();
    const double p = std::clamp(u, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
    return std::clamp(mean + stddev * boost::math::quantile(unit, p), lo, hi);
}

double truncated_normal_mean(double mean, double stddev, double lo, double hi) {
    check_window(stddev, lo, hi);
    const boost::math::normal_distribution<double> unit;
    const double alpha = (lo - mean) / stddev;
    const double beta = (hi - mean) / stddev;
    const double z = boost::math::cdf(unit, beta) - boost::math::cdf(unit, alpha);
    return mean + stddev * (boost::math::pdf(unit, alpha) - boost::math::pdf(unit, beta)) / z;
}

double truncated_normal_cdf(double x, double mean, double stddev, double lo, double hi) {
    check_window(stddev, lo, hi);
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const boost::math::normal_distribution<double> dist(mean, stddev);
    const double a = boost::math::cdf(dist, lo);
    return (boost::math::cdf(dist, x) - a) / (boost::math::cdf(dist, hi) - a);
}

}  // namespace offload
