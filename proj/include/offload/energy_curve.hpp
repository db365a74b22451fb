#pragma once

#include <span>
#include <utility>

namespace offload {

/// Download energy per Mbit as a function of throughput (Mbps):
/// epsilon(x) = amplitude * exp(-decay * x).
struct EnergyCurve {
    double amplitude = 1.4274;  // joule/Mbit
    double decay = 0.063;       // per Mbps

    double operator()(double throughput) const;
    bool operator==(const EnergyCurve&) const = default;
};

inline constexpr EnergyCurve kCurveF1{1.4274, 0.063};
inline constexpr EnergyCurve kCurveF2{1.4, 0.09};

struct EnergySample {
    double throughput;  // Mbps
    double joule_per_mbit;
};

struct EnergyFit {
    EnergyCurve curve;
    double residual = 0.0;  // sum of squared log residuals
};

/// Least squares on log(eps) = log(A) - d * x. Needs two samples with
/// distinct throughputs; throws DomainError on a non-positive value.
EnergyFit fit_energy_curve(std::span<const EnergySample> samples);

}  // namespace offload
