#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rgg/errors.hpp"

namespace rgg {

using VertexId = std::uint32_t;
using Spin = std::uint16_t;

inline constexpr VertexId kInvalidVertex = 0xffffffffu;

// Finite spin alphabet. Tokens are interned; a Spin is an index into it.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::initializer_list<std::string_view> tokens) {
        for (auto t : tokens) add(t);
    }

    Spin add(std::string_view token) {
        if (auto s = find(token)) return *s;
        tokens_.emplace_back(token);
        return static_cast<Spin>(tokens_.size() - 1);
    }

    std::optional<Spin> find(std::string_view token) const {
        for (std::size_t i = 0; i < tokens_.size(); ++i)
            if (tokens_[i] == token) return static_cast<Spin>(i);
        return std::nullopt;
    }

    const std::string& name(Spin s) const { return tokens_.at(s); }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> tokens_;
};

// Mutable bounded-degree simple undirected graph with vertex spins: the state
// alpha = (G, s). Vertex ids are stable and never reused; next_vertex_id() is
// monotone across deletions so identities survive a whole trajectory.
class SpinGraph {
public:
    explicit SpinGraph(int degree_cap = 16, Alphabet alphabet = {})
        : degree_cap_(degree_cap), alphabet_(std::move(alphabet)) {
        spin_census_.resize(alphabet_.size(), 0);
    }

    // --- vertices ---
    VertexId add_vertex(Spin s) {
        VertexId id = next_id_++;
        insert_vertex(id, s);
        return id;
    }

    // For parsers and generators that carry explicit ids. Keeps next_id_ above
    // every id ever seen.
    void add_vertex_with_id(VertexId id, Spin s) {
        if (verts_.count(id)) throw UnknownVertex("duplicate vertex id " + std::to_string(id));
        insert_vertex(id, s);
        if (id >= next_id_) next_id_ = id + 1;
    }

    void remove_vertex(VertexId id) {
        auto it = verts_.find(id);
        if (it == verts_.end()) throw UnknownVertex("remove_vertex: unknown id " + std::to_string(id));
        for (VertexId nb : it->second.nbrs) {
            auto& other = verts_.at(nb).nbrs;
            other.erase(std::lower_bound(other.begin(), other.end(), id));
            --edge_count_;
        }
        --spin_census_[it->second.spin];
        verts_.erase(it);
    }

    bool has_vertex(VertexId id) const { return verts_.count(id) != 0; }

    Spin spin(VertexId id) const { return data(id).spin; }

    void set_spin(VertexId id, Spin s) {
        auto& d = mutable_data(id);
        --spin_census_[d.spin];
        d.spin = s;
        ensure_census(s);
        ++spin_census_[s];
    }

    std::size_t vertex_count() const { return verts_.size(); }

    std::vector<VertexId> vertices_sorted() const {
        std::vector<VertexId> ids;
        ids.reserve(verts_.size());
        for (const auto& [id, _] : verts_) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    template <class F>
    void for_each_vertex(F&& f) const {  // unspecified order
        for (const auto& [id, d] : verts_) f(id, d.spin);
    }

    // --- edges ---
    // Returns false when the edge is already present (merge steps deduplicate).
    bool add_edge(VertexId a, VertexId b) {
        if (a == b) throw DegreeCapViolation("self-loop rejected at vertex " + std::to_string(a));
        auto& da = mutable_data(a);
        auto& db = mutable_data(b);
        auto pos = std::lower_bound(da.nbrs.begin(), da.nbrs.end(), b);
        if (pos != da.nbrs.end() && *pos == b) return false;
        if (static_cast<int>(da.nbrs.size()) >= degree_cap_ ||
            static_cast<int>(db.nbrs.size()) >= degree_cap_)
            throw DegreeCapViolation("degree cap " + std::to_string(degree_cap_) +
                                     " exceeded adding edge " + std::to_string(a) + "-" +
                                     std::to_string(b));
        da.nbrs.insert(pos, b);
        db.nbrs.insert(std::lower_bound(db.nbrs.begin(), db.nbrs.end(), a), a);
        ++edge_count_;
        return true;
    }

    bool remove_edge(VertexId a, VertexId b) {
        auto& da = mutable_data(a);
        auto& db = mutable_data(b);
        auto pos = std::lower_bound(da.nbrs.begin(), da.nbrs.end(), b);
        if (pos == da.nbrs.end() || *pos != b) return false;
        da.nbrs.erase(pos);
        db.nbrs.erase(std::lower_bound(db.nbrs.begin(), db.nbrs.end(), a));
        --edge_count_;
        return true;
    }

    bool has_edge(VertexId a, VertexId b) const {
        const auto& nbrs = data(a).nbrs;
        return std::binary_search(nbrs.begin(), nbrs.end(), b);
    }

    std::size_t edge_count() const { return edge_count_; }

    const std::vector<VertexId>& neighbors(VertexId id) const { return data(id).nbrs; }

    int degree(VertexId id) const { return static_cast<int>(data(id).nbrs.size()); }

    // --- meta ---
    int degree_cap() const { return degree_cap_; }
    VertexId next_vertex_id() const { return next_id_; }
    const Alphabet& alphabet() const { return alphabet_; }
    Alphabet& alphabet() { return alphabet_; }

    std::size_t spin_count(Spin s) const {
        return s < spin_census_.size() ? spin_census_[s] : 0;
    }

    bool operator==(const SpinGraph& other) const {
        if (degree_cap_ != other.degree_cap_ || verts_.size() != other.verts_.size() ||
            edge_count_ != other.edge_count_)
            return false;
        for (const auto& [id, d] : verts_) {
            auto it = other.verts_.find(id);
            if (it == other.verts_.end() || it->second.spin != d.spin ||
                it->second.nbrs != d.nbrs)
                return false;
        }
        return true;
    }

private:
    struct VertexData {
        Spin spin;
        std::vector<VertexId> nbrs;  // sorted
    };

    void insert_vertex(VertexId id, Spin s) {
        ensure_census(s);
        verts_.emplace(id, VertexData{s, {}});
        ++spin_census_[s];
    }

    void ensure_census(Spin s) {
        if (s >= spin_census_.size()) spin_census_.resize(s + 1, 0);
    }

    const VertexData& data(VertexId id) const {
        auto it = verts_.find(id);
        if (it == verts_.end()) throw UnknownVertex("unknown vertex id " + std::to_string(id));
        return it->second;
    }

    VertexData& mutable_data(VertexId id) {
        auto it = verts_.find(id);
        if (it == verts_.end()) throw UnknownVertex("unknown vertex id " + std::to_string(id));
        return it->second;
    }

    int degree_cap_;
    VertexId next_id_ = 0;
    std::size_t edge_count_ = 0;
    std::unordered_map<VertexId, VertexData> verts_;
    std::vector<std::size_t> spin_census_;
    Alphabet alphabet_;
};

// Ball-growth census around one vertex. sizes[r] = |O_r(center)| for r = 0..n_max.
struct BallProfile {
    VertexId center = kInvalidVertex;
    std::vector<std::uint64_t> sizes;

    int max_radius() const { return static_cast<int>(sizes.size()) - 1; }
    std::uint64_t size_at(int r) const { return sizes.at(static_cast<std::size_t>(r)); }
};

struct ProfileScan {
    BallProfile profile;
    bool exhausted = false;          // frontier died before n_max
    int shell_contact_level = -1;    // first level containing a stop-set vertex, -1 if none
};

// Shortest-path hop count; nullopt when x and y are in different components.
std::optional<int> distance(const SpinGraph& g, VertexId x, VertexId y);

// BFS distance map from src, optionally depth-capped (depth_cap < 0 = unbounded).
std::unordered_map<VertexId, int> bfs_distances(const SpinGraph& g, VertexId src,
                                                int depth_cap = -1);

// Cumulative ball sizes |O_0|..|O_n_max| from v. If stop_set is given, records
// the first BFS level at which a stop-set vertex appears (used for detecting
// contact with a window's frozen shell).
ProfileScan scan_ball_profile(const SpinGraph& g, VertexId v, int n_max,
                              const std::unordered_set<VertexId>* stop_set = nullptr);

// Regular (induced) subgraph on {u : d(v,u) <= n}: all inherited edges, spins kept.
SpinGraph ball(const SpinGraph& g, VertexId v, int n);

// Partition of V(g) by reachability. Blocks ordered by smallest member id,
// members sorted ascending. Empty graph -> empty partition.
std::vector<std::vector<VertexId>> connected_components(const SpinGraph& g);

bool is_connected(const SpinGraph& g);

// External boundary of vs: vertices outside vs at distance exactly 1 from it.
std::vector<VertexId> external_boundary(const SpinGraph& g, std::span<const VertexId> vs);

// Regular subgraph induced by the given vertex set.
SpinGraph induced_subgraph(const SpinGraph& g, std::span<const VertexId> vs);

}  // namespace rgg
