#include "rgg/graph.hpp"

#include <deque>

namespace rgg {

std::optional<int> distance(const SpinGraph& g, VertexId x, VertexId y) {
    if (!g.has_vertex(x)) throw UnknownVertex("distance: unknown vertex " + std::to_string(x));
    if (!g.has_vertex(y)) throw UnknownVertex("distance: unknown vertex " + std::to_string(y));
    if (x == y) return 0;
    std::unordered_map<VertexId, int> dist;
    dist.reserve(64);
    dist.emplace(x, 0);
    std::deque<VertexId> queue{x};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        int d = dist[v];
        for (VertexId nb : g.neighbors(v)) {
            if (dist.count(nb)) continue;
            if (nb == y) return d + 1;
            dist.emplace(nb, d + 1);
            queue.push_back(nb);
        }
    }
    return std::nullopt;
}

std::unordered_map<VertexId, int> bfs_distances(const SpinGraph& g, VertexId src,
                                                int depth_cap) {
    if (!g.has_vertex(src)) throw UnknownVertex("bfs: unknown vertex " + std::to_string(src));
    std::unordered_map<VertexId, int> dist;
    dist.emplace(src, 0);
    std::deque<VertexId> queue{src};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        int d = dist[v];
        if (depth_cap >= 0 && d >= depth_cap) continue;
        for (VertexId nb : g.neighbors(v)) {
            if (dist.emplace(nb, d + 1).second) queue.push_back(nb);
        }
    }
    return dist;
}

ProfileScan scan_ball_profile(const SpinGraph& g, VertexId v, int n_max,
                              const std::unordered_set<VertexId>* stop_set) {
    if (!g.has_vertex(v)) throw UnknownVertex("ball profile: unknown vertex " + std::to_string(v));
    ProfileScan out;
    out.profile.center = v;
    out.profile.sizes.reserve(static_cast<std::size_t>(n_max) + 1);

    std::unordered_set<VertexId> seen{v};
    std::vector<VertexId> frontier{v};
    std::uint64_t total = 1;
    if (stop_set && stop_set->count(v)) out.shell_contact_level = 0;
    out.profile.sizes.push_back(total);

    for (int level = 1; level <= n_max; ++level) {
        std::vector<VertexId> next;
        for (VertexId u : frontier) {
            for (VertexId nb : g.neighbors(u)) {
                if (!seen.insert(nb).second) continue;
                next.push_back(nb);
                if (stop_set && out.shell_contact_level < 0 && stop_set->count(nb))
                    out.shell_contact_level = level;
            }
        }
        if (next.empty()) {
            out.exhausted = true;
            // ball is the whole component from here on
            for (int r = level; r <= n_max; ++r) out.profile.sizes.push_back(total);
            return out;
        }
        total += next.size();
        out.profile.sizes.push_back(total);
        frontier = std::move(next);
    }
    return out;
}

SpinGraph ball(const SpinGraph& g, VertexId v, int n) {
    auto dist = bfs_distances(g, v, n);
    std::vector<VertexId> members;
    members.reserve(dist.size());
    for (const auto& [id, _] : dist) members.push_back(id);
    return induced_subgraph(g, members);
}

SpinGraph induced_subgraph(const SpinGraph& g, std::span<const VertexId> vs) {
    SpinGraph sub(g.degree_cap(), g.alphabet());
    std::vector<VertexId> members(vs.begin(), vs.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (VertexId id : members) sub.add_vertex_with_id(id, g.spin(id));
    for (VertexId id : members) {
        for (VertexId nb : g.neighbors(id)) {
            if (nb > id && sub.has_vertex(nb)) sub.add_edge(id, nb);
        }
    }
    return sub;
}

std::vector<std::vector<VertexId>> connected_components(const SpinGraph& g) {
    std::vector<VertexId> ids = g.vertices_sorted();
    std::unordered_set<VertexId> seen;
    std::vector<std::vector<VertexId>> blocks;
    for (VertexId root : ids) {
        if (seen.count(root)) continue;
        std::vector<VertexId> block{root};
        seen.insert(root);
        std::deque<VertexId> queue{root};
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (VertexId nb : g.neighbors(v)) {
                if (seen.insert(nb).second) {
                    block.push_back(nb);
                    queue.push_back(nb);
                }
            }
        }
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
    }
    return blocks;  // roots taken in ascending order => blocks ordered by smallest id
}

bool is_connected(const SpinGraph& g) {
    if (g.vertex_count() == 0) return true;
    auto ids = g.vertices_sorted();
    auto dist = bfs_distances(g, ids.front());
    return dist.size() == g.vertex_count();
}

std::vector<VertexId> external_boundary(const SpinGraph& g, std::span<const VertexId> vs) {
    std::unordered_set<VertexId> inside;
    inside.reserve(vs.size());
    for (VertexId v : vs) {
        if (!g.has_vertex(v)) throw UnknownVertex("boundary: unknown vertex " + std::to_string(v));
        inside.insert(v);
    }
    std::unordered_set<VertexId> bnd;
    for (VertexId v : vs) {
        for (VertexId nb : g.neighbors(v)) {
            if (!inside.count(nb)) bnd.insert(nb);
        }
    }
    std::vector<VertexId> out(bnd.begin(), bnd.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rgg
