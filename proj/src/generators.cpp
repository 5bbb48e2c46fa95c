#include "rgg/generators.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "rgg/graph_io.hpp"

namespace rgg {

namespace {

struct SpecParts {
    std::string family;               // "lattice", "tree", "file"
    std::string variant;              // "z2", "binary", or file path
    std::map<std::string, std::string> params;
};

SpecParts split_spec(std::string_view spec) {
    SpecParts out;
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t colon = spec.find(':', start);
        if (colon == std::string_view::npos) {
            parts.emplace_back(spec.substr(start));
            break;
        }
        parts.emplace_back(spec.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() < 2) throw ConfigError("generator spec too short: " + std::string(spec));
    out.family = parts[0];
    out.variant = parts[1];
    for (std::size_t i = 2; i < parts.size(); ++i) {
        std::size_t eq = parts[i].find('=');
        if (eq == std::string::npos)
            throw ConfigError("generator spec parameter without '=': " + parts[i]);
        out.params[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
    return out;
}

long get_long(const SpecParts& p, const std::string& key) {
    auto it = p.params.find(key);
    if (it == p.params.end())
        throw ConfigError("generator spec missing parameter '" + key + "'");
    return std::strtol(it->second.c_str(), nullptr, 10);
}

long get_long_or(const SpecParts& p, const std::string& key, long fallback) {
    auto it = p.params.find(key);
    return it == p.params.end() ? fallback : std::strtol(it->second.c_str(), nullptr, 10);
}

std::string get_str(const SpecParts& p, const std::string& key, const std::string& fallback) {
    auto it = p.params.find(key);
    return it == p.params.end() ? fallback : it->second;
}

Spin resolve_spin(const SpecParts& p, const Alphabet& alphabet) {
    std::string token = get_str(p, "spin", "a");
    auto s = alphabet.find(token);
    if (!s)
        throw ConfigError("generator spin '" + token + "' is not in the alphabet");
    return *s;
}

int lattice_dim(const std::string& variant) {
    if (variant == "z1") return 1;
    if (variant == "z2") return 2;
    if (variant == "z3") return 3;
    throw ConfigError("unknown lattice variant '" + variant + "'");
}

// Z^d window as the graph ball of the requested radius. Points enumerated
// level by level, lexicographically within a level, so ids are BFS-ordered.
GeneratedWindow make_lattice(int dim, int radius, Spin spin, const Alphabet& alphabet,
                             int degree_cap) {
    GeneratedWindow w;
    w.radius = radius;
    w.origin = 0;
    SpinGraph g(degree_cap, alphabet);

    using Coord = std::array<int, 3>;
    std::map<Coord, VertexId> id_of;
    std::vector<Coord> points;

    auto emit = [&](int x, int y, int z, int level) {
        Coord c{x, y, z};
        VertexId id = g.add_vertex(spin);
        id_of[c] = id;
        points.push_back(c);
        w.level_of.push_back(level);
    };

    for (int level = 0; level <= radius; ++level) {
        // lexicographic enumeration of |x|+|y|+|z| == level within the dimension
        int xlo = dim >= 1 ? -level : 0, xhi = dim >= 1 ? level : 0;
        for (int x = xlo; x <= xhi; ++x) {
            int rx = level - std::abs(x);
            if (dim == 1) {
                if (rx == 0) emit(x, 0, 0, level);
                continue;
            }
            int ylo = -rx, yhi = rx;
            for (int y = ylo; y <= yhi; ++y) {
                int ry = rx - std::abs(y);
                if (dim == 2) {
                    if (ry == 0) emit(x, y, 0, level);
                    continue;
                }
                for (int z : {-ry, ry}) {
                    emit(x, y, z, level);
                    if (ry == 0) break;
                }
            }
        }
    }

    for (const Coord& c : points) {
        VertexId a = id_of[c];
        for (int axis = 0; axis < dim; ++axis) {
            Coord nb = c;
            nb[axis] += 1;
            auto it = id_of.find(nb);
            if (it != id_of.end()) g.add_edge(a, it->second);
        }
    }
    w.graph = std::move(g);
    return w;
}

GeneratedWindow make_binary_tree(int depth, Spin spin, const Alphabet& alphabet,
                                 int degree_cap) {
    if (depth < 0 || depth > 25) throw ConfigError("tree depth out of range");
    GeneratedWindow w;
    w.radius = depth;
    w.origin = 0;
    SpinGraph g(degree_cap, alphabet);
    std::uint64_t total = (2ull << depth) - 1;  // heap ids 0..total-1 are BFS-ordered
    for (std::uint64_t i = 0; i < total; ++i) {
        g.add_vertex(spin);
        int level = 0;
        for (std::uint64_t v = i; v > 0; v = (v - 1) / 2) ++level;
        w.level_of.push_back(level);
    }
    for (std::uint64_t i = 1; i < total; ++i)
        g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>((i - 1) / 2));
    w.graph = std::move(g);
    return w;
}

GeneratedWindow load_file_window(const std::string& path, VertexId origin,
                                 const Alphabet& alphabet) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    NamedGraph ng = read_graph(buf.str());
    // re-express spins in the caller's alphabet
    SpinGraph g(ng.graph.degree_cap(), alphabet);
    for (VertexId id : ng.graph.vertices_sorted()) {
        const std::string& token = ng.graph.alphabet().name(ng.graph.spin(id));
        auto s = alphabet.find(token);
        if (!s) throw ConfigError("graph file uses spin '" + token + "' not in the alphabet");
        g.add_vertex_with_id(id, *s);
    }
    for (VertexId id : ng.graph.vertices_sorted())
        for (VertexId nb : ng.graph.neighbors(id))
            if (nb > id) g.add_edge(id, nb);

    GeneratedWindow w;
    w.origin = origin;
    if (!g.has_vertex(origin)) throw ConfigError("file window origin vertex missing");
    auto dist = bfs_distances(g, origin);
    if (dist.size() != g.vertex_count())
        throw ConfigError("file window must be connected from the origin");
    VertexId max_id = 0;
    int max_level = 0;
    for (const auto& [id, d] : dist) {
        max_id = std::max(max_id, id);
        max_level = std::max(max_level, d);
    }
    w.level_of.assign(max_id + 1, -1);
    for (const auto& [id, d] : dist) w.level_of[id] = d;
    w.radius = max_level;
    w.graph = std::move(g);
    return w;
}

}  // namespace

std::unordered_set<VertexId> GeneratedWindow::shell_set(int margin) const {
    std::unordered_set<VertexId> shell;
    if (margin <= 0) return shell;
    for (std::size_t id = 0; id < level_of.size(); ++id) {
        if (level_of[id] > radius - margin) shell.insert(static_cast<VertexId>(id));
    }
    return shell;
}

GeneratedWindow generate_window(std::string_view spec, const Alphabet& alphabet) {
    SpecParts p = split_spec(spec);
    GeneratedWindow w;
    if (p.family == "lattice") {
        int dim = lattice_dim(p.variant);
        int radius = static_cast<int>(get_long(p, "radius"));
        if (radius < 1) throw ConfigError("lattice radius must be >= 1");
        int cap = static_cast<int>(get_long_or(p, "degreecap", 2 * dim + 4));
        w = make_lattice(dim, radius, resolve_spin(p, alphabet), alphabet, cap);
    } else if (p.family == "tree" && p.variant == "binary") {
        int depth = static_cast<int>(get_long(p, "depth"));
        int cap = static_cast<int>(get_long_or(p, "degreecap", 3));
        w = make_binary_tree(depth, resolve_spin(p, alphabet), alphabet, cap);
    } else if (p.family == "file") {
        w = load_file_window(p.variant, static_cast<VertexId>(get_long_or(p, "origin", 0)),
                             alphabet);
    } else {
        throw ConfigError("unknown generator family '" + p.family + "'");
    }
    w.spec = std::string(spec);
    return w;
}

bool has_analytic_profile(std::string_view spec) {
    SpecParts p = split_spec(spec);
    if (p.family == "lattice") return true;
    return p.family == "tree" && p.variant == "binary";
}

BallProfile analytic_profile(std::string_view spec, int n_max) {
    SpecParts p = split_spec(spec);
    BallProfile profile;
    profile.center = 0;
    profile.sizes.reserve(static_cast<std::size_t>(n_max) + 1);
    if (p.family == "lattice") {
        int dim = lattice_dim(p.variant);
        for (int n = 0; n <= n_max; ++n) {
            std::uint64_t v = static_cast<std::uint64_t>(n);
            std::uint64_t size = 0;
            switch (dim) {
                case 1: size = 2 * v + 1; break;
                case 2: size = 2 * v * v + 2 * v + 1; break;
                case 3: size = (4 * v * v * v + 6 * v * v + 8 * v + 3) / 3; break;
            }
            profile.sizes.push_back(size);
        }
        return profile;
    }
    if (p.family == "tree" && p.variant == "binary") {
        if (n_max > 62) throw ConfigError("binary tree profile overflows past n = 62");
        for (int n = 0; n <= n_max; ++n)
            profile.sizes.push_back((2ull << n) - 1);
        return profile;
    }
    throw ConfigError("no analytic profile for spec: " + std::string(spec));
}

}  // namespace rgg
