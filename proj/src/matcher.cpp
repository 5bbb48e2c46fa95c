#include "rgg/matcher.hpp"

#include <algorithm>
#include <deque>

namespace rgg {

namespace {

// Search order over pattern indices: start at `root`, then breadth-first,
// preferring already-connected extensions; disconnected leftovers (non-local
// grammars) are appended and matched by full scans.
std::vector<int> search_order(const RuleGraph& lhs, int root) {
    std::vector<int> order{root};
    std::vector<bool> placed(lhs.size(), false);
    placed[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int nb : lhs.adj[v]) {
            if (!placed[nb]) {
                placed[nb] = true;
                order.push_back(nb);
                queue.push_back(nb);
            }
        }
    }
    for (int v = 0; v < lhs.size(); ++v)
        if (!placed[v]) order.push_back(v);
    return order;
}

// Extends a partial map along `order` starting at position `depth`.
void extend(const SpinGraph& alpha, const RuleGraph& lhs, const std::vector<int>& order,
            std::size_t depth, std::vector<VertexId>& map,
            std::vector<Embedding>& out, std::uint32_t rule_index) {
    if (depth == order.size()) {
        out.push_back(Embedding{rule_index, map});
        return;
    }
    int p = order[depth];
    // candidates: neighbors of an already-placed pattern neighbor when one
    // exists, otherwise every vertex (rare; disconnected patterns only)
    int placed_nb = -1;
    for (int nb : lhs.adj[p]) {
        if (map[nb] != kInvalidVertex) {
            placed_nb = nb;
            break;
        }
    }
    auto try_candidate = [&](VertexId cand) {
        if (alpha.spin(cand) != lhs.spins[p]) return;
        for (int q = 0; q < lhs.size(); ++q)
            if (map[q] == cand) return;  // injectivity
        for (int nb : lhs.adj[p]) {
            if (map[nb] != kInvalidVertex && !alpha.has_edge(cand, map[nb])) return;
        }
        map[p] = cand;
        extend(alpha, lhs, order, depth + 1, map, out, rule_index);
        map[p] = kInvalidVertex;
    };
    if (placed_nb >= 0) {
        for (VertexId cand : alpha.neighbors(map[placed_nb])) try_candidate(cand);
    } else {
        for (VertexId cand : alpha.vertices_sorted()) try_candidate(cand);
    }
}

int rarest_spin_anchor(const SpinGraph& alpha, const RuleGraph& lhs) {
    int best = 0;
    std::size_t best_count = alpha.spin_count(lhs.spins[0]);
    for (int i = 1; i < lhs.size(); ++i) {
        std::size_t c = alpha.spin_count(lhs.spins[i]);
        if (c < best_count) {
            best = i;
            best_count = c;
        }
    }
    return best;
}

}  // namespace

std::vector<Embedding> enumerate_embeddings(const SpinGraph& alpha, const Grammar& grammar,
                                            std::uint32_t rule_index) {
    const RuleGraph& lhs = grammar.rule(rule_index).lhs;
    std::vector<Embedding> out;
    if (lhs.size() == 0) return out;
    int root = rarest_spin_anchor(alpha, lhs);
    auto order = search_order(lhs, root);
    std::vector<VertexId> map(lhs.size(), kInvalidVertex);
    for (VertexId cand : alpha.vertices_sorted()) {
        if (alpha.spin(cand) != lhs.spins[root]) continue;
        map[root] = cand;
        extend(alpha, lhs, order, 1, map, out, rule_index);
        map[root] = kInvalidVertex;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------------ MatchIndex

MatchIndex::MatchIndex(const Grammar& grammar, const SpinGraph& alpha, EligibilityFn eligible)
    : grammar_(&grammar), eligible_(std::move(eligible)) {
    rules_.resize(grammar.rule_count());
    build(alpha);
}

void MatchIndex::build(const SpinGraph& alpha) {
    for (std::uint32_t r = 0; r < rules_.size(); ++r) {
        for (auto& emb : enumerate_embeddings(alpha, *grammar_, r))
            insert(alpha, r, std::move(emb.map));
    }
}

std::size_t MatchIndex::total_count() const {
    std::size_t n = 0;
    for (const auto& pr : rules_) n += pr.elig.size();
    return n;
}

double MatchIndex::total_rate() const {
    double lam = 0;
    for (std::uint32_t r = 0; r < rules_.size(); ++r)
        lam += grammar_->rule(r).rate * static_cast<double>(rules_[r].elig.size());
    return lam;
}

MatchIndex::Pick MatchIndex::sample(Rng& rng) const {
    double lam = total_rate();
    if (!(lam > 0)) throw std::logic_error("sample from empty match index");
    double target = rng.next_unit() * lam;
    double cum = 0;
    std::uint32_t chosen = 0;
    for (std::uint32_t r = 0; r < rules_.size(); ++r) {
        double w = grammar_->rule(r).rate * static_cast<double>(rules_[r].elig.size());
        if (w <= 0) continue;
        cum += w;
        chosen = r;  // last nonempty rule wins if fp rounding leaves target >= cum
        if (target < cum) break;
    }
    std::uint32_t pos = static_cast<std::uint32_t>(rng.index(rules_[chosen].elig.size()));
    return Pick{chosen, pos};
}

Embedding MatchIndex::embedding(const Pick& pick) const {
    const PerRule& pr = rules_[pick.rule];
    return Embedding{pick.rule, pr.slots[pr.elig[pick.elig_pos]].map};
}

void MatchIndex::insert(const SpinGraph& alpha, std::uint32_t rule, std::vector<VertexId> map) {
    if (eligible_ && !eligible_(alpha, rule, map)) return;
    PerRule& pr = rules_[rule];
    std::uint32_t slot;
    if (!pr.free_list.empty()) {
        slot = pr.free_list.back();
        pr.free_list.pop_back();
    } else {
        slot = static_cast<std::uint32_t>(pr.slots.size());
        pr.slots.emplace_back();
    }
    Slot& s = pr.slots[slot];
    s.map = std::move(map);
    s.alive = true;
    s.elig_pos = static_cast<std::uint32_t>(pr.elig.size());
    pr.elig.push_back(slot);
    std::uint64_t handle = (static_cast<std::uint64_t>(rule) << 32) | slot;
    for (VertexId v : s.map) by_vertex_[v].push_back(handle);
}

void MatchIndex::remove_slot(std::uint32_t rule, std::uint32_t slot) {
    PerRule& pr = rules_[rule];
    Slot& s = pr.slots[slot];
    if (!s.alive) return;
    std::uint64_t handle = (static_cast<std::uint64_t>(rule) << 32) | slot;
    for (VertexId v : s.map) {
        auto it = by_vertex_.find(v);
        if (it == by_vertex_.end()) continue;
        auto& list = it->second;
        auto pos = std::find(list.begin(), list.end(), handle);
        if (pos != list.end()) {
            *pos = list.back();
            list.pop_back();
        }
        if (list.empty()) by_vertex_.erase(it);
    }
    // swap-remove from the eligible vector
    std::uint32_t moved = pr.elig.back();
    pr.elig[s.elig_pos] = moved;
    pr.slots[moved].elig_pos = s.elig_pos;
    pr.elig.pop_back();
    s.alive = false;
    s.map.clear();
    pr.free_list.push_back(slot);
}

void MatchIndex::on_event(const SpinGraph& alpha_after, std::span<const VertexId> touched) {
    // 1. drop every indexed embedding whose image intersects the touched set
    for (VertexId v : touched) {
        auto it = by_vertex_.find(v);
        if (it == by_vertex_.end()) continue;
        std::vector<std::uint64_t> handles = it->second;  // copy: removal mutates
        for (std::uint64_t h : handles)
            remove_slot(static_cast<std::uint32_t>(h >> 32),
                        static_cast<std::uint32_t>(h & 0xffffffffu));
    }

    // 2. re-derive embeddings containing a touched vertex. Every created or
    // destroyed embedding must contain one: all spin and edge changes happen
    // at touched vertices.
    std::vector<VertexId> seeds;
    for (VertexId v : touched)
        if (alpha_after.has_vertex(v)) seeds.push_back(v);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    if (seeds.empty()) return;

    for (std::uint32_t r = 0; r < rules_.size(); ++r) {
        const RuleGraph& lhs = grammar_->rule(r).lhs;
        std::vector<Embedding> found;
        std::vector<VertexId> map(lhs.size(), kInvalidVertex);
        for (int p = 0; p < lhs.size(); ++p) {
            auto order = search_order(lhs, p);
            for (VertexId seed : seeds) {
                if (alpha_after.spin(seed) != lhs.spins[p]) continue;
                map[p] = seed;
                extend(alpha_after, lhs, order, 1, map, found, r);
                map[p] = kInvalidVertex;
            }
        }
        // the same embedding is reachable from every touched vertex it contains
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        for (auto& emb : found) insert(alpha_after, r, std::move(emb.map));
    }
}

std::vector<Embedding> MatchIndex::snapshot(std::uint32_t rule) const {
    std::vector<Embedding> out;
    const PerRule& pr = rules_[rule];
    out.reserve(pr.elig.size());
    for (std::uint32_t slot : pr.elig) out.push_back(Embedding{rule, pr.slots[slot].map});
    std::sort(out.begin(), out.end());
    return out;
}

void MatchIndex::cross_check(const SpinGraph& alpha) const {
    for (std::uint32_t r = 0; r < rules_.size(); ++r) {
        std::vector<Embedding> fresh;
        for (auto& emb : enumerate_embeddings(alpha, *grammar_, r)) {
            if (!eligible_ || eligible_(alpha, r, emb.map)) fresh.push_back(std::move(emb));
        }
        std::vector<Embedding> held = snapshot(r);
        if (fresh != held)
            throw IndexDesync("match index desync on rule " + grammar_->rule(r).name + ": " +
                              std::to_string(held.size()) + " held vs " +
                              std::to_string(fresh.size()) + " recomputed");
    }
}

}  // namespace rgg
