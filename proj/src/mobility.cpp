#include "offload/mobility.hpp"

#include <cmath>
#include <string>

#include "offload/errors.hpp"

namespace offload {

MobilityModel::MobilityModel(int grid_width, int grid_height, std::vector<double> matrix)
    : width_(grid_width), height_(grid_height), matrix_(std::move(matrix)) {
    if (width_ < 1 || height_ < 1) {
        throw ConfigError("mobility grid must be at least 1x1");
    }
    const auto n = static_cast<std::size_t>(size());
    if (matrix_.size() != n * n) {
        throw ConfigError("mobility matrix must be " + std::to_string(n) + "x" +
                          std::to_string(n));
    }
    rows_.resize(n);
    for (std::size_t from = 0; from < n; ++from) {
        double sum = 0.0;
        for (std::size_t to = 0; to < n; ++to) {
            const double p = matrix_[from * n + to];
            if (!(p >= 0.0) || p > 1.0) {
                throw ConfigError("mobility entry out of [0,1] in row " + std::to_string(from));
            }
            if (p > 0.0) {
                rows_[from].push_back({static_cast<LocationId>(to), p});
                sum += p;
            }
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw ConfigError("mobility row " + std::to_string(from) + " sums to " +
                              std::to_string(sum));
        }
    }
}

MobilityModel build_grid_mobility(int width, int height, double stay_prob,
                                  Adjacency adjacency) {
    if (width < 1 || height < 1) {
        throw ConfigError("grid must be at least 1x1");
    }
    if (!(stay_prob >= 0.0 && stay_prob <= 1.0)) {
        throw ConfigError("stay probability must lie in [0,1]");
    }
    const int n = width * height;
    std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);

    std::vector<LocationId> neighbours;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const LocationId from = y * width + x;
            neighbours.clear();
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (adjacency == Adjacency::VonNeumann && dx != 0 && dy != 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
                    neighbours.push_back(ny * width + nx);
                }
            }
            auto row = matrix.begin() + static_cast<std::ptrdiff_t>(from) * n;
            if (neighbours.empty()) {
                if (stay_prob < 1.0) {
                    throw ConfigError(
                        "single-cell grid needs stay probability 1 (no neighbour to move to)");
                }
                row[from] = 1.0;
                continue;
            }
            row[from] = stay_prob;
            const double move = (1.0 - stay_prob) / static_cast<double>(neighbours.size());
            for (LocationId to : neighbours) row[to] = move;
        }
    }
    return MobilityModel(width, height, std::move(matrix));
}

LocationId next_location(const MobilityModel& model, LocationId current, Rng& rng) {
    const auto row = model.row(current);
    const double u = rng.uniform();
    double acc = 0.0;
    for (const auto& t : row) {
        acc += t.probability;
        if (u < acc) return t.to;
    }
    // u fell in the rounding gap at the top of the row.
    return row.back().to;
}

std::vector<LocationId> sample_trace(const MobilityModel& model, LocationId start,
                                     int horizon, Rng& rng) {
    if (horizon < 1) throw ConfigError("trace horizon must be >= 1");
    std::vector<LocationId> trace;
    trace.reserve(static_cast<std::size_t>(horizon));
    trace.push_back(start);
    for (int k = 1; k < horizon; ++k) {
        trace.push_back(next_location(model, trace.back(), rng));
    }
    return trace;
}

}  // namespace offload
