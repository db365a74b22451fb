#include "offload/energy_curve.hpp"

#include <cmath>
#include <string>

#include "offload/errors.hpp"

namespace offload {

double EnergyCurve::operator()(double throughput) const {
    return amplitude * std::exp(-decay * throughput);
}

EnergyFit fit_energy_curve(std::span<const EnergySample> samples) {
    if (samples.size() < 2) throw DomainError("energy fit needs at least 2 samples");
    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : samples) {
        if (!(s.throughput > 0.0) || !(s.joule_per_mbit > 0.0)) {
            throw DomainError("energy sample (" + std::to_string(s.throughput) + ", " +
                              std::to_string(s.joule_per_mbit) + ") is not positive");
        }
        sx += s.throughput;
        sy += std::log(s.joule_per_mbit);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        const double dx = s.throughput - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(s.joule_per_mbit) - my);
    }
    if (sxx <= 0.0) throw DomainError("energy fit needs two distinct throughputs");
    const double slope = sxy / sxx;
    EnergyFit fit;
    fit.curve = {std::exp(my - slope * mx), -slope};
    for (const auto& s : samples) {
        const double r = std::log(s.joule_per_mbit) - (my + slope * (s.throughput - mx));
        fit.residual += r * r;
    }
    return fit;
}

}  // namespace offload
