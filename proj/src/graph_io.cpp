#include "rgg/graph_io.hpp"

#include <sstream>

namespace rgg {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] void syntax(const std::string& msg, int line) {
    throw ParseError(ParseError::Kind::Syntax, msg, line, 1);
}

}  // namespace

NamedGraph read_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::string name;
    int cap = 16;
    Alphabet alphabet;
    std::vector<std::pair<VertexId, std::string>> vertices;
    std::vector<std::pair<VertexId, VertexId>> edges;

    while (std::getline(in, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "graph") {
            if (toks.size() != 4 || toks[2] != "degreecap")
                syntax("expected 'graph <name> degreecap <n>'", line_no);
            name = toks[1];
            cap = std::stoi(toks[3]);
            have_header = true;
        } else if (toks[0] == "v") {
            if (toks.size() != 3) syntax("expected 'v <id> <spin>'", line_no);
            vertices.emplace_back(static_cast<VertexId>(std::stoul(toks[1])), toks[2]);
        } else if (toks[0] == "e") {
            if (toks.size() != 3) syntax("expected 'e <id1> <id2>'", line_no);
            edges.emplace_back(static_cast<VertexId>(std::stoul(toks[1])),
                               static_cast<VertexId>(std::stoul(toks[2])));
        } else {
            syntax("unknown directive '" + toks[0] + "'", line_no);
        }
    }
    if (!have_header) syntax("missing 'graph' header", 1);

    for (const auto& [id, spin] : vertices) alphabet.add(spin);
    SpinGraph g(cap, alphabet);
    for (const auto& [id, spin] : vertices) g.add_vertex_with_id(id, *alphabet.find(spin));
    for (const auto& [a, b] : edges) g.add_edge(a, b);
    return NamedGraph{name, std::move(g)};
}

std::string write_graph(const NamedGraph& ng) {
    std::ostringstream out;
    out << "graph " << ng.name << " degreecap " << ng.graph.degree_cap() << "\n";
    for (VertexId id : ng.graph.vertices_sorted())
        out << "v " << id << " " << ng.graph.alphabet().name(ng.graph.spin(id)) << "\n";
    for (VertexId id : ng.graph.vertices_sorted())
        for (VertexId nb : ng.graph.neighbors(id))
            if (nb > id) out << "e " << id << " " << nb << "\n";
    return out.str();
}

}  // namespace rgg
