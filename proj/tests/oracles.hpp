#pragma once

// Test-side oracles, deliberately independent of the library's implementation
// paths: plain edge-list BFS, union-find components, a literal re-reading of
// the substitution definition, brute-force embedding enumeration, and a
// detailed-balance solver for rate graphs.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rgg/grammar.hpp"
#include "rgg/reversibility.hpp"

namespace oracle {

using rgg::Spin;
using rgg::VertexId;

// ----------------------------------------------------------- edge-list BFS

struct FlatGraph {
    std::vector<VertexId> verts;
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::map<VertexId, Spin> spins;

    static FlatGraph from(const rgg::SpinGraph& g) {
        FlatGraph f;
        f.verts = g.vertices_sorted();
        for (VertexId v : f.verts) {
            f.spins[v] = g.spin(v);
            for (VertexId nb : g.neighbors(v))
                if (nb > v) f.edges.emplace_back(v, nb);
        }
        return f;
    }

    std::vector<VertexId> neighbors(VertexId v) const {
        std::vector<VertexId> out;
        for (auto [a, b] : edges) {
            if (a == v) out.push_back(b);
            if (b == v) out.push_back(a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline std::optional<int> bfs_distance(const FlatGraph& g, VertexId x, VertexId y) {
    std::map<VertexId, int> dist{{x, 0}};
    std::deque<VertexId> queue{x};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        if (v == y) return dist[v];
        for (VertexId nb : g.neighbors(v)) {
            if (!dist.count(nb)) {
                dist[nb] = dist[v] + 1;
                queue.push_back(nb);
            }
        }
    }
    return std::nullopt;
}

inline std::set<VertexId> bfs_ball(const FlatGraph& g, VertexId x, int n) {
    std::map<VertexId, int> dist{{x, 0}};
    std::deque<VertexId> queue{x};
    std::set<VertexId> ball{x};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        if (dist[v] == n) continue;
        for (VertexId nb : g.neighbors(v)) {
            if (!dist.count(nb)) {
                dist[nb] = dist[v] + 1;
                ball.insert(nb);
                queue.push_back(nb);
            }
        }
    }
    return ball;
}

// ------------------------------------------------------------- union-find

class UnionFind {
public:
    void ensure(VertexId v) {
        if (!parent_.count(v)) parent_[v] = v;
    }
    VertexId find(VertexId v) {
        ensure(v);
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    void unite(VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;  // union by smaller id
    }
    std::vector<std::vector<VertexId>> blocks() {
        std::map<VertexId, std::vector<VertexId>> groups;
        for (auto& [v, _] : parent_) groups[find(v)].push_back(v);
        std::vector<std::vector<VertexId>> out;
        for (auto& [root, members] : groups) {
            std::sort(members.begin(), members.end());
            out.push_back(members);
        }
        return out;  // keyed by smallest member = root
    }

private:
    std::map<VertexId, VertexId> parent_;
};

inline std::vector<std::vector<VertexId>> components(const FlatGraph& g) {
    UnionFind uf;
    for (VertexId v : g.verts) uf.ensure(v);
    for (auto [a, b] : g.edges) uf.unite(a, b);
    return uf.blocks();
}

// ----------------------------------------- Definition-1 substitution oracle

// A literal transcription: form the disjoint union with a fresh copy of the
// rhs, delete psi-images of lhs edges, delete psi(V \ V0) with incident links,
// identify glue pairs, then re-read spins. Fresh ids count up from
// alpha.next_vertex_id() in rhs index order, matching the library convention.
inline FlatGraph apply_rule(const rgg::SpinGraph& alpha, const rgg::SubstitutionRule& rule,
                            const std::vector<VertexId>& psi) {
    FlatGraph g = FlatGraph::from(alpha);

    // delete images of lhs edges
    for (auto [i, j] : rule.lhs.edges) {
        VertexId a = std::min(psi[i], psi[j]), b = std::max(psi[i], psi[j]);
        g.edges.erase(std::remove(g.edges.begin(), g.edges.end(), std::make_pair(a, b)),
                      g.edges.end());
    }
    // delete non-anchor images with all incident links
    std::set<VertexId> removed;
    for (int i = 0; i < rule.lhs.size(); ++i)
        if (!rule.is_anchor(i)) removed.insert(psi[i]);
    g.verts.erase(std::remove_if(g.verts.begin(), g.verts.end(),
                                 [&](VertexId v) { return removed.count(v) != 0; }),
                  g.verts.end());
    g.edges.erase(std::remove_if(g.edges.begin(), g.edges.end(),
                                 [&](auto e) {
                                     return removed.count(e.first) || removed.count(e.second);
                                 }),
                  g.edges.end());
    for (VertexId v : removed) g.spins.erase(v);

    // fresh rhs vertices, ids in rhs index order from next_vertex_id
    std::vector<VertexId> rhs_image(rule.rhs.size(), rgg::kInvalidVertex);
    for (std::size_t k = 0; k < rule.anchor_lhs.size(); ++k)
        rhs_image[rule.glue_rhs[k]] = psi[rule.anchor_lhs[k]];
    VertexId next = alpha.next_vertex_id();
    for (int w : rule.rhs_fresh) {
        rhs_image[w] = next;
        g.verts.push_back(next);
        ++next;
    }
    // spins on V(Gamma') from Gamma'
    for (int w = 0; w < rule.rhs.size(); ++w) g.spins[rhs_image[w]] = rule.rhs.spins[w];
    // rhs edges, deduplicated against surviving alpha edges
    for (auto [i, j] : rule.rhs.edges) {
        VertexId a = std::min(rhs_image[i], rhs_image[j]);
        VertexId b = std::max(rhs_image[i], rhs_image[j]);
        if (std::find(g.edges.begin(), g.edges.end(), std::make_pair(a, b)) == g.edges.end())
            g.edges.emplace_back(a, b);
    }
    std::sort(g.verts.begin(), g.verts.end());
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

// canonical serialization for bit-identical comparison
inline std::string serialize(const FlatGraph& g) {
    std::string out;
    for (VertexId v : g.verts)
        out += "v" + std::to_string(v) + ":" + std::to_string(g.spins.at(v)) + ";";
    std::vector<std::pair<VertexId, VertexId>> edges = g.edges;
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) out += "e" + std::to_string(a) + "-" + std::to_string(b) + ";";
    return out;
}

inline std::string serialize(const rgg::SpinGraph& g) { return serialize(FlatGraph::from(g)); }

// ---------------------------------------------- brute-force embeddings

// every injective map V(lhs) -> V(alpha) filtered by the embedding invariants
inline std::vector<std::vector<VertexId>> all_embeddings(const rgg::SpinGraph& alpha,
                                                         const rgg::RuleGraph& lhs) {
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> verts = alpha.vertices_sorted();
    std::vector<VertexId> map(lhs.size());
    std::vector<bool> used(verts.size(), false);
    std::function<void(int)> rec = [&](int idx) {
        if (idx == lhs.size()) {
            for (auto [i, j] : lhs.edges)
                if (!alpha.has_edge(map[i], map[j])) return;
            out.push_back(map);
            return;
        }
        for (std::size_t c = 0; c < verts.size(); ++c) {
            if (used[c] || alpha.spin(verts[c]) != lhs.spins[idx]) continue;
            used[c] = true;
            map[idx] = verts[c];
            rec(idx + 1);
            used[c] = false;
        }
    };
    if (lhs.size() > 0) rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------- detailed-balance linear algebra

// Existence of positive weights pi with pi_i l_ij = pi_j l_ji: propagate a
// potential along a spanning forest of the support and verify every edge.
inline bool detailed_balance_solvable(const rgg::RateGraph& chain, double tol = 1e-9) {
    for (const auto& [key, rate] : chain.rates) {
        auto [i, j] = key;
        if (rate > 0 && chain.rate(j, i) == 0) return false;
    }
    std::vector<double> logpi(chain.num_states, 0.0);
    std::vector<int> state(chain.num_states, 0);  // 0 unseen, 1 assigned
    for (std::uint32_t root = 0; root < chain.num_states; ++root) {
        if (state[root]) continue;
        state[root] = 1;
        std::deque<std::uint32_t> queue{root};
        while (!queue.empty()) {
            std::uint32_t i = queue.front();
            queue.pop_front();
            for (std::uint32_t j = 0; j < chain.num_states; ++j) {
                double fwd = chain.rate(i, j);
                if (fwd <= 0 || state[j]) continue;
                logpi[j] = logpi[i] + std::log(fwd / chain.rate(j, i));
                state[j] = 1;
                queue.push_back(j);
            }
        }
    }
    for (const auto& [key, rate] : chain.rates) {
        auto [i, j] = key;
        double lhs = logpi[i] + std::log(rate);
        double rhs = logpi[j] + std::log(chain.rate(j, i));
        if (std::abs(lhs - rhs) > tol) return false;
    }
    return true;
}

// ------------------------------------------------- small-graph enumeration

// all connected spin graphs on exactly n labeled vertices (ids 0..n-1) over an
// alphabet of `spin_count` spins
inline std::vector<rgg::SpinGraph> connected_spin_graphs(int n, int spin_count,
                                                         const rgg::Alphabet& alphabet,
                                                         int degree_cap = 8) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    std::vector<rgg::SpinGraph> out;
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        // connectivity check on the edge subset
        UnionFind uf;
        for (int v = 0; v < n; ++v) uf.ensure(static_cast<VertexId>(v));
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask & (1u << s))
                uf.unite(static_cast<VertexId>(slots[s].first),
                         static_cast<VertexId>(slots[s].second));
        if (uf.blocks().size() != 1) continue;
        std::uint64_t spin_words = 1;
        for (int i = 0; i < n; ++i) spin_words *= spin_count;
        for (std::uint64_t word = 0; word < spin_words; ++word) {
            rgg::SpinGraph g(degree_cap, alphabet);
            std::uint64_t w = word;
            for (int v = 0; v < n; ++v) {
                g.add_vertex(static_cast<Spin>(w % spin_count));
                w /= spin_count;
            }
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (mask & (1u << s))
                    g.add_edge(static_cast<VertexId>(slots[s].first),
                               static_cast<VertexId>(slots[s].second));
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace oracle
