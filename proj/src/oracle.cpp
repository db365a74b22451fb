#include "offload/oracle.hpp"

#include <limits>
#include <string>
#include <vector>

#include "offload/errors.hpp"

namespace offload {

namespace {

class Recursion {
public:
    Recursion(const Scenario& sc, std::size_t max_nodes) : sc_(sc), max_nodes_(max_nodes) {}

    double value(Epoch t, LocationId l, const std::vector<Quanta>& b) {
        if (++nodes_ > max_nodes_) {
            throw SizingError("brute-force oracle exceeded " + std::to_string(max_nodes_) +
                              " expanded nodes; instance too large");
        }
        double due = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (sc_.flows[j].deadline == t - 1) {
                due += sc_.costs.penalty_coefficient * sc_.sigma * b[j];
            }
        }
        if (t > sc_.horizon) return due;

        const LocationProfile& loc = sc_.locations[static_cast<std::size_t>(l)];
        double best = std::numeric_limits<double>::infinity();

        // Idle.
        best = std::min(best, future(t, l, b));

        for (int net = 1; net <= 2; ++net) {
            const bool cellular = net == 2;
            if (!cellular && !loc.wlan_available) continue;
            const Quanta cap = cellular ? loc.cellular_rate : loc.wlan_rate;
            std::vector<Quanta> hi(b.size(), 0);
            for (std::size_t j = 0; j < b.size(); ++j) {
                hi[j] = (t <= sc_.flows[j].deadline) ? std::min(b[j], cap) : 0;
            }
            // Odometer over the full product box, keeping 1 <= sum <= cap.
            std::vector<Quanta> a(b.size(), 0);
            while (true) {
                std::size_t k = 0;
                while (k < a.size() && a[k] == hi[k]) a[k++] = 0;
                if (k == a.size()) break;
                ++a[k];
                Quanta sum = 0;
                for (Quanta x : a) sum += x;
                if (sum > cap) continue;
                const double mbit = sum * sc_.sigma;
                const double rate = cellular ? loc.cellular_energy : loc.wlan_energy;
                double cost = sc_.costs.theta_at(t) * rate * mbit;
                if (cellular) cost += sc_.costs.price_per_mbit * mbit;
                std::vector<Quanta> next(b);
                for (std::size_t j = 0; j < b.size(); ++j) next[j] -= a[j];
                best = std::min(best, cost + future(t, l, next));
            }
        }
        return due + best;
    }

private:
    double future(Epoch t, LocationId l, const std::vector<Quanta>& b) {
        double e = 0.0;
        for (LocationId k = 0; k < sc_.location_count(); ++k) {
            const double p = sc_.mobility.probability(l, k);
            if (p > 0.0) e += p * value(t + 1, k, b);
        }
        return e;
    }

    const Scenario& sc_;
    std::size_t max_nodes_;
    std::size_t nodes_ = 0;
};

}  // namespace

double brute_force_value(const Scenario& scenario, LocationId start, std::size_t max_nodes) {
    scenario.validate();
    if (start < 0 || start >= scenario.location_count()) {
        throw ConfigError("start location " + std::to_string(start) + " out of range");
    }
    Recursion r(scenario, max_nodes);
    return r.value(1, start, scenario.total_sizes());
}

}  // namespace offload
