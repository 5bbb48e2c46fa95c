#pragma once

#include <cstdint>

#include "rgg/generators.hpp"
#include "rgg/grammar.hpp"
#include "rgg/matcher.hpp"

namespace rgg {

struct SimConfig {
    double horizon = 0.1;                  // epsilon: simulated time span
    std::uint64_t seed = 1;
    std::uint64_t event_cap = 1'000'000;
    int margin = -1;                       // -1: max(1, max lhs radius)
    bool strict_connectivity = false;
    bool strict_degree = false;            // throw instead of guarding cap-unsafe embeddings
    std::uint64_t cross_check_every = 0;   // debug: full index rebuild comparison cadence
};

struct Event {
    double time;
    std::uint32_t rule;
    std::vector<VertexId> image;   // psi of lhs indices, in index order
    std::vector<VertexId> fresh;   // ids created by the event
};

struct Trajectory {
    SpinGraph initial;
    SpinGraph final_graph;
    VertexId origin = 0;
    int window_radius = 0;
    int margin = 0;
    double horizon = 0;
    std::uint64_t seed = 0;
    std::vector<Event> events;
    std::vector<VertexId> touched;    // Q: touched vertices of G(0), sorted
    std::vector<VertexId> untouched;  // R = V(G(0)) \ Q, sorted
    VertexId first_fresh_id = 0;      // ids >= this were created mid-run
    bool event_cap_hit = false;
    std::unordered_set<VertexId> forbidden_shell;  // frozen margin vertices
};

// Gillespie direct-method dynamics xi^N on a window. Embeddings whose image
// touches the margin shell, or whose application would exceed the degree cap,
// are ineligible (the runtime guard for statically undecidable boundedness).
Trajectory run_window(const GeneratedWindow& window, const Grammar& grammar,
                      const SimConfig& cfg);

// Connected components B_k of the regular subgraph of G(0) induced by Q,
// ordered by smallest vertex id.
std::vector<std::vector<VertexId>> touched_clusters(const Trajectory& traj);

struct ConditionalRun {
    Trajectory trajectory;
    std::uint64_t attempts = 0;
    double acceptance_rate = 0;
};

// zeta(t, B): the process on B u dB conditioned on exactly B being touched.
// Rejection sampling; throws AcceptanceTooLow after max_attempts rejections.
ConditionalRun conditional_cluster_process(const SpinGraph& g0, std::span<const VertexId> B,
                                           const Grammar& grammar, const SimConfig& cfg,
                                           std::uint64_t max_attempts = 200000);

// Vertex count of the final graph restricted to descendants of B: surviving
// B vertices plus everything created during the run.
std::size_t growth_count(const Trajectory& traj, std::span<const VertexId> B);

// Event -> final-cluster assignment. Events are chained through the vertices
// they touch (including mid-run fresh vertices), then keyed to the touched
// cluster holding their initial vertices. Index into touched_clusters(traj),
// or -1 for events with no surviving ancestry (does not occur for connected
// rule images).
std::vector<int> event_cluster_assignment(const Trajectory& traj,
                                          const std::vector<std::vector<VertexId>>& clusters);

}  // namespace rgg
