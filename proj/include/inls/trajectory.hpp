#pragma once

#include <stdexcept>
#include <vector>

#include "inls/grid.hpp"

namespace inls {

/// Time-indexed snapshots on a fixed grid over the uniform mesh t_k = k T / n_t.
struct Trajectory {
    GridSpec grid;
    double horizon = 0;  // T
    int n_t = 0;
    std::vector<ComplexField> snapshots;  // length n_t + 1
    bool blew_up = false;

    Trajectory() = default;
    Trajectory(const GridSpec& g, double T, int nt) : grid(g), horizon(T), n_t(nt) {
        if (!(T > 0)) throw std::invalid_argument("horizon must be positive");
        if (nt < 1) throw std::invalid_argument("n_t must be >= 1");
        snapshots.reserve(nt + 1);
    }

    double dt() const { return horizon / n_t; }
    double time(int k) const { return k * dt(); }

    double sup_l2_distance(const Trajectory& other) const {
        if (snapshots.size() != other.snapshots.size())
            throw std::invalid_argument("trajectory length mismatch");
        double m = 0;
        for (std::size_t k = 0; k < snapshots.size(); ++k)
            m = std::max(m, (snapshots[k] - other.snapshots[k]).l2_norm());
        return m;
    }
};

}  // namespace inls
