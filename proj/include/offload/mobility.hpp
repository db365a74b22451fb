#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "offload/rng.hpp"

namespace offload {

/// Row-major cell index on the grid, 0-based.
using LocationId = std::int32_t;

enum class Adjacency { VonNeumann, Moore };

struct Transition {
    LocationId to;
    double probability;
};

/// Location Markov chain. Entry (from, to) is the probability of moving from
/// cell `from` to cell `to` in one slot. Immutable after construction.
class MobilityModel {
public:
    MobilityModel() = default;

    /// Takes a dense row-major L x L matrix; rows must be stochastic to 1e-12.
    MobilityModel(int grid_width, int grid_height, std::vector<double> matrix);

    int grid_width() const { return width_; }
    int grid_height() const { return height_; }
    int size() const { return width_ * height_; }

    double probability(LocationId from, LocationId to) const {
        return matrix_[static_cast<std::size_t>(from) * size() + to];
    }

    /// Nonzero entries of row `from`, in ascending destination order.
    std::span<const Transition> row(LocationId from) const { return rows_[from]; }

    const std::vector<double>& matrix() const { return matrix_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> matrix_;
    std::vector<std::vector<Transition>> rows_;
};

/// Grid random walk: stay with `stay_prob`, otherwise move to one of the
/// adjacent cells with equal probability.
MobilityModel build_grid_mobility(int width, int height, double stay_prob,
                                  Adjacency adjacency = Adjacency::VonNeumann);

LocationId next_location(const MobilityModel& model, LocationId current, Rng& rng);

/// trace[0] = start, trace[k+1] drawn from row trace[k].
std::vector<LocationId> sample_trace(const MobilityModel& model, LocationId start,
                                     int horizon, Rng& rng);

}  // namespace offload
