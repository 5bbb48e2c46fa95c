#pragma once

#include <string>
#include <string_view>

#include "rgg/graph.hpp"

namespace rgg {

struct NamedGraph {
    std::string name;
    SpinGraph graph;
};

// Line-oriented text format:
//   graph <name> degreecap <n>
//   v <id> <spin>
//   e <id1> <id2>
// Blank lines and lines starting with '#' are ignored.
NamedGraph read_graph(std::string_view text);

std::string write_graph(const NamedGraph& g);

}  // namespace rgg
