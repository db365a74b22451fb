#pragma once

#include <utility>
#include <vector>

#include "offload/model.hpp"

namespace offload::testing {

inline LocationProfile cell(LocationId id, Quanta cellular, Quanta wlan = 0,
                            double cellular_energy = 0.7107, double wlan_energy = 0.484) {
    LocationProfile p;
    p.id = id;
    p.cellular_rate = cellular;
    p.cellular_throughput = 10.0;
    p.cellular_energy = cellular_energy;
    if (wlan > 0) {
        p.wlan_available = true;
        p.wlan_rate = wlan;
        p.wlan_throughput = 15.0;
        p.wlan_energy = wlan_energy;
    }
    return p;
}

inline std::vector<double> identity_matrix(int n) {
    std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i * n + i)] = 1.0;
    return m;
}

/// Flows must already be sorted by deadline.
inline Scenario make_scenario(std::vector<LocationProfile> cells, int width, int height,
                              std::vector<double> matrix, std::vector<FlowSpec> flows,
                              double theta = 0.0, double sigma = 1.0) {
    Scenario sc;
    sc.grid_width = width;
    sc.grid_height = height;
    sc.locations = std::move(cells);
    sc.mobility = MobilityModel(width, height, std::move(matrix));
    sc.flows = std::move(flows);
    sc.horizon = sc.flows.back().deadline;
    sc.costs.energy_preference = theta;
    sc.sigma = sigma;
    sc.validate();
    return sc;
}

/// Single cell with identity mobility.
inline Scenario one_cell(LocationProfile c, std::vector<FlowSpec> flows, double theta = 0.0,
                         double sigma = 1.0) {
    return make_scenario({c}, 1, 1, {1.0}, std::move(flows), theta, sigma);
}

}  // namespace offload::testing
