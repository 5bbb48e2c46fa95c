#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rgg/graph.hpp"

namespace rgg {

// A finite window O_R(origin) of an (ideally infinite) graph family. Vertex ids
// are assigned in BFS-level order from the origin, so level_of[id] is the exact
// graph distance to the origin in the pristine window.
struct GeneratedWindow {
    SpinGraph graph;
    VertexId origin = 0;
    int radius = 0;
    std::string spec;
    std::vector<int> level_of;  // indexed by vertex id (generated windows only)

    // Vertices within `margin` of the outer shell: level > radius - margin.
    std::unordered_set<VertexId> shell_set(int margin) const;
};

// Spec strings, URI-like:
//   lattice:z1:radius=512[:spin=a]
//   lattice:z2:radius=100[:spin=a]
//   lattice:z3:radius=32[:spin=a]
//   tree:binary:depth=12[:spin=a]
//   file:<path>[:origin=<id>]
// Spin tokens must belong to `alphabet`.
GeneratedWindow generate_window(std::string_view spec, const Alphabet& alphabet);

// Closed-form ball sizes for the ideal (unwindowed) families, where known:
// z1, z2, z3 and the infinite rooted binary tree. Throws ConfigError otherwise.
bool has_analytic_profile(std::string_view spec);
BallProfile analytic_profile(std::string_view spec, int n_max);

}  // namespace rgg
