#include "rgg/simulator.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace rgg {

namespace {

std::vector<VertexId> sorted_unique(std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Trajectory run_core(SpinGraph alpha, VertexId origin, int window_radius,
                    std::unordered_set<VertexId> forbidden, const Grammar& grammar,
                    const SimConfig& cfg, int margin) {
    Trajectory traj;
    traj.initial = alpha;
    traj.origin = origin;
    traj.window_radius = window_radius;
    traj.margin = margin;
    traj.horizon = cfg.horizon;
    traj.seed = cfg.seed;
    traj.first_fresh_id = alpha.next_vertex_id();
    traj.forbidden_shell = std::move(forbidden);

    const auto* shell = &traj.forbidden_shell;
    const bool guard_degree = !cfg.strict_degree;
    EligibilityFn eligible = [shell, guard_degree, &grammar](const SpinGraph& g,
                                                             std::uint32_t rule_index,
                                                             std::span<const VertexId> map) {
        if (!shell->empty()) {
            for (VertexId v : map)
                if (shell->count(v)) return false;
        }
        if (guard_degree && !cap_safe(g, grammar.rule(rule_index), map)) return false;
        return true;
    };

    MatchIndex index(grammar, alpha, eligible);
    Rng rng(cfg.seed);
    double t = 0;

    while (true) {
        double lambda = index.total_rate();
        if (!(lambda > 0)) break;
        t += rng.exponential(lambda);
        if (t > cfg.horizon) break;
        if (traj.events.size() >= cfg.event_cap) {
            traj.event_cap_hit = true;
            break;
        }
        auto pick = index.sample(rng);
        Embedding emb = index.embedding(pick);
        ApplyDelta delta = apply_substitution_inplace(alpha, grammar.rule(pick.rule), emb.map,
                                                      cfg.strict_connectivity);
        auto touched_now = delta.touched();
        index.on_event(alpha, touched_now);
        traj.events.push_back(Event{t, pick.rule, std::move(delta.image), std::move(delta.fresh)});
        if (cfg.cross_check_every > 0 && traj.events.size() % cfg.cross_check_every == 0)
            index.cross_check(alpha);
    }

    traj.final_graph = std::move(alpha);

    std::vector<VertexId> q;
    for (const Event& ev : traj.events)
        for (VertexId v : ev.image)
            if (v < traj.first_fresh_id) q.push_back(v);
    traj.touched = sorted_unique(std::move(q));
    std::vector<VertexId> all = traj.initial.vertices_sorted();
    traj.untouched.reserve(all.size() - traj.touched.size());
    std::set_difference(all.begin(), all.end(), traj.touched.begin(), traj.touched.end(),
                        std::back_inserter(traj.untouched));
    return traj;
}

}  // namespace

Trajectory run_window(const GeneratedWindow& window, const Grammar& grammar,
                      const SimConfig& cfg) {
    if (!is_connected(window.graph))
        throw ConfigError("run_window requires a connected initial window");
    int margin = cfg.margin >= 0 ? cfg.margin : std::max(1, grammar.max_lhs_radius());
    std::unordered_set<VertexId> forbidden = window.shell_set(margin);
    return run_core(window.graph, window.origin, window.radius, std::move(forbidden), grammar,
                    cfg, margin);
}

std::vector<std::vector<VertexId>> touched_clusters(const Trajectory& traj) {
    // components of the induced subgraph of G(0) on Q
    std::unordered_set<VertexId> in_q(traj.touched.begin(), traj.touched.end());
    std::unordered_set<VertexId> seen;
    std::vector<std::vector<VertexId>> blocks;
    for (VertexId root : traj.touched) {
        if (seen.count(root)) continue;
        std::vector<VertexId> block{root};
        seen.insert(root);
        std::deque<VertexId> queue{root};
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (VertexId nb : traj.initial.neighbors(v)) {
                if (in_q.count(nb) && seen.insert(nb).second) {
                    block.push_back(nb);
                    queue.push_back(nb);
                }
            }
        }
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
    }
    return blocks;
}

ConditionalRun conditional_cluster_process(const SpinGraph& g0, std::span<const VertexId> B,
                                           const Grammar& grammar, const SimConfig& cfg,
                                           std::uint64_t max_attempts) {
    std::vector<VertexId> b(B.begin(), B.end());
    std::sort(b.begin(), b.end());
    auto boundary = external_boundary(g0, b);
    std::vector<VertexId> support = b;
    support.insert(support.end(), boundary.begin(), boundary.end());
    SpinGraph base = induced_subgraph(g0, support);

    SimConfig attempt_cfg = cfg;
    attempt_cfg.margin = 0;  // conditioning replaces the margin policy here

    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        attempt_cfg.seed = Rng::for_replica(cfg.seed, attempt, 0x5eedULL).next_u64();
        Trajectory traj = run_core(base, b.front(), 0, {}, grammar, attempt_cfg, 0);
        if (traj.touched == b) {
            ConditionalRun out;
            out.trajectory = std::move(traj);
            out.attempts = attempt + 1;
            out.acceptance_rate = 1.0 / static_cast<double>(out.attempts);
            return out;
        }
    }
    throw AcceptanceTooLow("no accepted trajectory for |B|=" + std::to_string(b.size()) +
                           " after " + std::to_string(max_attempts) + " attempts");
}

std::size_t growth_count(const Trajectory& traj, std::span<const VertexId> B) {
    std::unordered_set<VertexId> in_b(B.begin(), B.end());
    std::size_t n = 0;
    traj.final_graph.for_each_vertex([&](VertexId id, Spin) {
        if (id >= traj.first_fresh_id || in_b.count(id)) ++n;
    });
    return n;
}

std::vector<int> event_cluster_assignment(const Trajectory& traj,
                                          const std::vector<std::vector<VertexId>>& clusters) {
    std::unordered_map<VertexId, int> cluster_of;
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c)
        for (VertexId v : clusters[c]) cluster_of.emplace(v, c);

    // fresh vertices inherit the cluster of the event that created or later
    // touched them; rule images are connected in the current graph, so one
    // event never spans two final clusters
    std::unordered_map<VertexId, int> fresh_cluster;
    auto lookup = [&](VertexId v) -> int {
        if (v < traj.first_fresh_id) {
            auto it = cluster_of.find(v);
            return it == cluster_of.end() ? -1 : it->second;
        }
        auto it = fresh_cluster.find(v);
        return it == fresh_cluster.end() ? -1 : it->second;
    };

    std::vector<int> assignment(traj.events.size(), -1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < traj.events.size(); ++e) {
            int c = assignment[e];
            for (VertexId v : traj.events[e].image) {
                int found = lookup(v);
                if (found >= 0) {
                    c = found;
                    break;
                }
            }
            if (c != assignment[e]) {
                assignment[e] = c;
                changed = true;
            }
            if (c < 0) continue;
            for (VertexId v : traj.events[e].fresh) {
                if (fresh_cluster.emplace(v, c).second) changed = true;
            }
            for (VertexId v : traj.events[e].image) {
                if (v >= traj.first_fresh_id && fresh_cluster.emplace(v, c).second)
                    changed = true;
            }
        }
    }
    return assignment;
}

}  // namespace rgg
