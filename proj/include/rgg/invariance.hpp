#pragma once

#include "rgg/analysis.hpp"
#include "rgg/reversibility.hpp"

namespace rgg {

struct InvarianceConfig {
    std::string generator;        // ambient family, e.g. "lattice:z2"
    double epsilon = 0.1;
    std::vector<int> n_grid;      // profile scales; dynamics window sized from the max
    int replicas = 8;
    std::uint64_t seed = 1;
    double ambient_factor = 1.5;  // window radius = ceil(max N * factor) + margin + 1
    double c_step = 0.05;         // sandwich constant search grid
    std::uint64_t event_cap = 1'000'000;
};

struct ReplicaInvariance {
    std::uint64_t seed = 0;
    double slope_initial = 0;     // at the origin in G(0)
    double slope_final = 0;       // at v(omega) in G(epsilon)
    double slope_diff = 0;
    VertexId v_omega = 0;
    int r_omega = 0;              // distance from the origin to v(omega)
    double c_min = 0;             // smallest sandwich constant that works
    bool c_found = false;
    int usable_radius = 0;        // profile radius before shell contact
    std::size_t events = 0;
    std::size_t touched = 0;
};

struct InvarianceReport {
    InvarianceConfig config;
    int window_radius = 0;
    std::vector<ReplicaInvariance> replicas;
    double median_slope_diff = 0;
    double c_empirical = 0;       // max over replicas of c_min
    bool all_c_found = false;
};

// Per replica: run the window dynamics, locate v(omega) = the untouched vertex
// nearest the origin (ties to the smallest id), compare dimension profiles of
// G(0) at the origin and G(epsilon) at v(omega), and search the smallest C
// with |O_{N/C}(eps)| < |O_N(0)| < |O_{NC}(eps)| over the upper half of the
// N grid.
InvarianceReport invariance_experiment(const Grammar& grammar, const InvarianceConfig& cfg);

}  // namespace rgg
