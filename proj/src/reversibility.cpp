#include "rgg/reversibility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "rgg/matcher.hpp"

namespace rgg {

void RateGraph::add_rate(std::uint32_t i, std::uint32_t j, double lambda) {
    if (i == j || lambda <= 0) return;
    rates[{i, j}] += lambda;
    num_states = std::max<std::size_t>(num_states, std::max(i, j) + 1);
}

double RateGraph::rate(std::uint32_t i, std::uint32_t j) const {
    auto it = rates.find({i, j});
    return it == rates.end() ? 0.0 : it->second;
}

namespace {

struct Support {
    std::vector<std::vector<std::uint32_t>> adj;              // sorted
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j, sorted
    std::size_t components = 0;

    int edge_index(std::uint32_t a, std::uint32_t b) const {
        if (a > b) std::swap(a, b);
        auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b));
        return static_cast<int>(it - edges.begin());
    }
};

Support build_support(const RateGraph& chain) {
    Support s;
    s.adj.resize(chain.num_states);
    for (const auto& [key, rate] : chain.rates) {
        auto [i, j] = key;
        if (i < j) s.edges.push_back({i, j});
    }
    std::sort(s.edges.begin(), s.edges.end());
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
    for (auto [i, j] : s.edges) {
        s.adj[i].push_back(j);
        s.adj[j].push_back(i);
    }
    for (auto& a : s.adj) std::sort(a.begin(), a.end());

    std::vector<bool> seen(chain.num_states, false);
    for (std::uint32_t v = 0; v < chain.num_states; ++v) {
        if (seen[v]) continue;
        ++s.components;
        std::deque<std::uint32_t> queue{v};
        seen[v] = true;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto nb : s.adj[u])
                if (!seen[nb]) {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
        }
    }
    return s;
}

// Simple cycles of length <= n0, each undirected cycle visited once: smallest
// state first, canonical direction fixed by second < last.
template <class F>
void enumerate_cycles(const Support& s, int n0, F&& emit) {
    std::size_t n = s.adj.size();
    std::vector<std::uint32_t> path;
    std::vector<bool> on_path(n, false);

    for (std::uint32_t start = 0; start < n; ++start) {
        path = {start};
        on_path[start] = true;

        // 2-cycles: one per support edge at its smaller endpoint
        for (auto nb : s.adj[start])
            if (nb > start) emit(std::vector<std::uint32_t>{start, nb});

        std::function<void()> dfs = [&]() {
            std::uint32_t u = path.back();
            for (auto nb : s.adj[u]) {
                if (nb == start && path.size() >= 3) {
                    if (path[1] < path.back()) emit(path);
                    continue;
                }
                if (nb <= start || on_path[nb]) continue;
                if (static_cast<int>(path.size()) >= n0) continue;
                path.push_back(nb);
                on_path[nb] = true;
                dfs();
                on_path[nb] = false;
                path.pop_back();
            }
        };
        if (n0 >= 3) dfs();
        on_path[start] = false;
    }
}

}  // namespace

ReversibilityReport check_reversibility(const RateGraph& chain, int n0, double tolerance) {
    ReversibilityReport rep;
    rep.n0 = n0;
    rep.num_states = chain.num_states;
    rep.num_transitions = chain.rates.size();

    for (const auto& [key, rate] : chain.rates) {
        auto [i, j] = key;
        if (rate > 0 && chain.rate(j, i) == 0) {
            rep.verdict = ReversibilityReport::Verdict::NotReversible;
            rep.asymmetric_witness = {i, j};
            return rep;
        }
    }

    Support support = build_support(chain);
    rep.cycle_space_dim = support.edges.size() + support.components - chain.num_states;

    // rank accumulation for the span test: oriented edge-incidence vectors
    std::vector<std::vector<double>> basis;  // row-echelon rows
    auto try_absorb = [&](std::vector<double> row) {
        for (auto& b : basis) {
            // eliminate on b's pivot
            std::size_t pivot = 0;
            while (pivot < b.size() && std::abs(b[pivot]) < 1e-12) ++pivot;
            if (pivot < row.size() && std::abs(row[pivot]) > 1e-12)
                for (std::size_t c = 0; c < row.size(); ++c) row[c] -= b[c] * row[pivot] / b[pivot];
        }
        for (double v : row) {
            if (std::abs(v) > 1e-9) {
                basis.push_back(std::move(row));
                return;
            }
        }
    };

    enumerate_cycles(support, n0, [&](const std::vector<std::uint32_t>& cycle) {
        ++rep.cycles_checked;
        double product = 1.0;
        std::vector<double> row(support.edges.size(), 0.0);
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            std::uint32_t a = cycle[k];
            std::uint32_t b = cycle[(k + 1) % cycle.size()];
            product *= chain.rate(a, b) / chain.rate(b, a);
            row[support.edge_index(a, b)] += a < b ? 1.0 : -1.0;
        }
        if (std::abs(product - 1.0) > tolerance * std::max(1.0, std::abs(product))) {
            CycleRecord rec;
            rec.cycle = cycle;
            rec.product = product;
            rec.ok = false;
            rep.violations.push_back(std::move(rec));
        }
        if (cycle.size() >= 3) try_absorb(std::move(row));
    });

    rep.short_cycles_generate = basis.size() == rep.cycle_space_dim;
    if (!rep.violations.empty()) rep.verdict = ReversibilityReport::Verdict::NotReversible;
    return rep;
}

// ------------------------------------------------------------ canonical form

std::string canonical_form(const SpinGraph& g) {
    std::vector<VertexId> ids = g.vertices_sorted();
    std::size_t n = ids.size();
    if (n > 10)
        throw StateSpaceExplosion("canonical_form limited to 10 vertices, got " +
                                  std::to_string(n));
    if (n == 0) return "empty";

    std::unordered_map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[ids[i]] = i;

    // iterated color refinement narrows the permutation classes
    std::vector<std::uint64_t> color(n);
    for (std::size_t i = 0; i < n; ++i)
        color[i] = (static_cast<std::uint64_t>(g.spin(ids[i])) << 8) |
                   static_cast<std::uint64_t>(g.degree(ids[i]));
    for (int round = 0; round < 3; ++round) {
        std::vector<std::pair<std::vector<std::uint64_t>, std::size_t>> sig(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint64_t> s{color[i]};
            for (VertexId nb : g.neighbors(ids[i])) s.push_back(color[pos[nb]]);
            std::sort(s.begin() + 1, s.end());
            sig[i] = {std::move(s), i};
        }
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::uint64_t> next(n);
        std::uint64_t c = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0 && sorted[k].first != sorted[k - 1].first) ++c;
            next[sorted[k].second] = c;
        }
        if (next == color) break;
        color = std::move(next);
    }

    // permutations that break the color-class sequence cannot be minimal
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    auto cls = [&](std::size_t i) { return color[i]; };
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return cls(a) < cls(b) || (cls(a) == cls(b) && a < b);
    });
    std::vector<std::uint64_t> class_seq(n);
    for (std::size_t i = 0; i < n; ++i) class_seq[i] = cls(perm[i]);

    auto encode = [&](const std::vector<std::size_t>& p) {
        std::string enc;
        enc.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i)
            enc += std::to_string(g.spin(ids[p[i]])) + ",";
        enc += "|";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                enc += g.has_edge(ids[p[i]], ids[p[j]]) ? '1' : '0';
        return enc;
    };

    std::string best = encode(perm);
    std::vector<std::size_t> p = perm;
    while (std::next_permutation(p.begin(), p.end())) {
        bool class_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (cls(p[i]) != class_seq[i]) {
                class_ok = false;
                break;
            }
        }
        if (!class_ok) continue;
        std::string enc = encode(p);
        if (enc < best) best = enc;
    }
    return best;
}

RateGraph enumerate_state_space(const Grammar& grammar, const SpinGraph& start,
                                std::size_t max_vertices, std::size_t max_states) {
    RateGraph chain;
    std::unordered_map<std::string, std::uint32_t> state_of;
    std::vector<SpinGraph> reps;

    std::string start_c = canonical_form(start);
    state_of.emplace(start_c, 0);
    reps.push_back(start);
    chain.labels.push_back(start_c);
    chain.num_states = 1;

    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        std::uint32_t i = queue.front();
        queue.pop_front();
        const SpinGraph current = reps[i];  // copy: reps may reallocate below
        for (std::uint32_t r = 0; r < grammar.rule_count(); ++r) {
            const auto& rule = grammar.rule(r);
            for (const Embedding& emb : enumerate_embeddings(current, grammar, r)) {
                std::size_t result_vertices = current.vertex_count() -
                                              (rule.lhs.size() - rule.anchor_lhs.size()) +
                                              (rule.rhs.size() - rule.glue_rhs.size());
                if (result_vertices > max_vertices) continue;
                SpinGraph next = current;
                try {
                    apply_substitution_inplace(next, rule, emb.map);
                } catch (const DegreeCapViolation&) {
                    continue;  // restricted to the degree-capped state space
                }
                std::string c = canonical_form(next);
                auto [it, inserted] = state_of.emplace(c, static_cast<std::uint32_t>(reps.size()));
                if (inserted) {
                    if (reps.size() >= max_states)
                        throw StateSpaceExplosion("state space exceeds " +
                                                  std::to_string(max_states) + " states");
                    reps.push_back(std::move(next));
                    chain.labels.push_back(c);
                    chain.num_states = reps.size();
                    queue.push_back(it->second);
                }
                if (it->second != i) chain.add_rate(i, it->second, rule.rate);
            }
        }
    }
    return chain;
}

}  // namespace rgg
