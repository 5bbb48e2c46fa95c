#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rgg/simulator.hpp"
#include "rule_suite.hpp"

using namespace rgg;

namespace {

GeneratedWindow path_window(int n, const Alphabet& alphabet) {
    // bespoke connected window: a path with margin-free boundary
    GeneratedWindow w;
    SpinGraph g(8, alphabet);
    for (int i = 0; i < n; ++i) g.add_vertex(0);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    w.graph = std::move(g);
    w.origin = 0;
    w.radius = n - 1;
    w.level_of.resize(n);
    for (int i = 0; i < n; ++i) w.level_of[i] = i;
    return w;
}

}  // namespace

TEST_CASE("frozen grammar produces no events") {
    Grammar g = parse_grammar(suite::kFrozen);
    GeneratedWindow w = path_window(10, g.alphabet());
    SimConfig cfg;
    cfg.horizon = 5.0;
    cfg.seed = 3;
    cfg.margin = 0;
    Trajectory traj = run_window(w, g, cfg);
    CHECK(traj.events.empty());
    CHECK(traj.touched.empty());
    CHECK(traj.untouched.size() == 10);
}

TEST_CASE("one-way spin flips: per-vertex Bernoulli(1 - exp(-lambda t))") {
    Grammar g = parse_grammar(suite::kSpinFlipOneWay);
    const int n = 40;
    GeneratedWindow w = path_window(n, g.alphabet());
    const double t = 0.7;
    const int replicas = 4000;
    std::vector<int> flips(n, 0);
    std::uint64_t total_events = 0;
    for (int r = 0; r < replicas; ++r) {
        SimConfig cfg;
        cfg.horizon = t;
        cfg.seed = Rng::for_replica(42, r, 0).next_u64();
        cfg.margin = 0;
        Trajectory traj = run_window(w, g, cfg);
        total_events += traj.events.size();
        CHECK(traj.events.size() <= static_cast<std::size_t>(n));  // each vertex at most once
        for (VertexId v : traj.touched) flips[v] += 1;
    }
    const double p = 1 - std::exp(-t);
    for (int v = 0; v < n; v += 7) {
        double observed = static_cast<double>(flips[v]) / replicas;
        CHECK(std::abs(observed - p) < 5 * std::sqrt(p * (1 - p) / replicas));
    }
    // mean event count = n * p
    double mean = static_cast<double>(total_events) / replicas;
    CHECK(std::abs(mean - n * p) < 0.5);
}

TEST_CASE("two-way spin flips: Poisson(K lambda t) event counts") {
    Grammar g = parse_grammar(suite::kSpinFlipBoth);
    const int n = 30;
    GeneratedWindow w = path_window(n, g.alphabet());
    const double t = 0.5;
    const int replicas = 3000;
    double sum = 0, sum2 = 0;
    for (int r = 0; r < replicas; ++r) {
        SimConfig cfg;
        cfg.horizon = t;
        cfg.seed = Rng::for_replica(7, r, 0).next_u64();
        cfg.margin = 0;
        Trajectory traj = run_window(w, g, cfg);
        double k = static_cast<double>(traj.events.size());
        sum += k;
        sum2 += k * k;
    }
    double mean = sum / replicas;
    double var = sum2 / replicas - mean * mean;
    double expect = n * t;  // rate K*lambda with lambda = 1
    CHECK(std::abs(mean - expect) < 4 * std::sqrt(expect / replicas));
    CHECK(var / mean > 0.85);  // index of dispersion near 1
    CHECK(var / mean < 1.15);
}

TEST_CASE("event times strictly increase and stay within the horizon") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=8", g.alphabet());
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.seed = 11;
    Trajectory traj = run_window(w, g, cfg);
    REQUIRE(traj.events.size() > 1);
    for (std::size_t i = 1; i < traj.events.size(); ++i)
        CHECK(traj.events[i].time > traj.events[i - 1].time);
    CHECK(traj.events.back().time <= cfg.horizon);
}

TEST_CASE("Q and R partition the initial window") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=8", g.alphabet());
    SimConfig cfg;
    cfg.horizon = 0.3;
    cfg.seed = 13;
    Trajectory traj = run_window(w, g, cfg);
    std::vector<VertexId> all;
    std::merge(traj.touched.begin(), traj.touched.end(), traj.untouched.begin(),
               traj.untouched.end(), std::back_inserter(all));
    CHECK(all == traj.initial.vertices_sorted());
    // untouched vertices keep spin and identity through the horizon
    for (VertexId v : traj.untouched) {
        CHECK(traj.final_graph.has_vertex(v));
        CHECK(traj.final_graph.spin(v) == traj.initial.spin(v));
    }
    // every Q vertex is in some event's image
    std::unordered_set<VertexId> seen;
    for (const auto& ev : traj.events)
        for (VertexId v : ev.image)
            if (v < traj.first_fresh_id) seen.insert(v);
    for (VertexId v : traj.touched) CHECK(seen.count(v) == 1);
}

TEST_CASE("margin policy freezes the shell") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=6", g.alphabet());
    SimConfig cfg;
    cfg.horizon = 2.0;
    cfg.seed = 17;
    cfg.margin = 2;
    Trajectory traj = run_window(w, g, cfg);
    for (VertexId v : traj.touched) CHECK(w.level_of[v] <= 4);
}

TEST_CASE("touched clusters equal the union-find oracle") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=7", g.alphabet());
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        SimConfig cfg;
        cfg.horizon = 0.25;
        cfg.seed = seed;
        Trajectory traj = run_window(w, g, cfg);
        auto clusters = touched_clusters(traj);

        oracle::UnionFind uf;
        std::unordered_set<VertexId> q(traj.touched.begin(), traj.touched.end());
        for (VertexId v : traj.touched) uf.ensure(v);
        for (VertexId v : traj.touched)
            for (VertexId nb : traj.initial.neighbors(v))
                if (q.count(nb)) uf.unite(v, nb);
        CHECK(clusters == uf.blocks());
    }
}

TEST_CASE("trivial cluster layouts") {
    Grammar g = parse_grammar(suite::kFrozen);
    GeneratedWindow w = path_window(6, g.alphabet());
    SimConfig cfg;
    cfg.horizon = 1.0;
    cfg.margin = 0;
    Trajectory traj = run_window(w, g, cfg);
    CHECK(touched_clusters(traj).empty());

    // fake a two-vertex adjacent Q by hand
    traj.touched = {2, 3};
    auto clusters = touched_clusters(traj);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0] == std::vector<VertexId>{2, 3});
}

TEST_CASE("determinism: same config, bit-identical trajectory") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=7", g.alphabet());
    SimConfig cfg;
    cfg.horizon = 0.4;
    cfg.seed = 2024;
    Trajectory a = run_window(w, g, cfg);
    Trajectory b = run_window(w, g, cfg);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].rule == b.events[i].rule);
        CHECK(a.events[i].image == b.events[i].image);
        CHECK(a.events[i].fresh == b.events[i].fresh);
    }
    CHECK(a.touched == b.touched);
    CHECK(oracle::serialize(a.final_graph) == oracle::serialize(b.final_graph));
}

TEST_CASE("event locality: touched sets have bounded diameter") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=7", g.alphabet());
    SimConfig cfg;
    cfg.horizon = 0.3;
    cfg.seed = 31;
    Trajectory traj = run_window(w, g, cfg);
    int bound = 0;
    for (const auto& r : g.rules())
        bound = std::max(bound, r.lhs.diameter() + r.rhs.diameter() + 1);
    for (const auto& ev : traj.events) {
        // touched vertices of one event stay within the locality bound in G(0)
        for (VertexId a : ev.image) {
            for (VertexId b : ev.image) {
                if (a >= b || a >= traj.first_fresh_id || b >= traj.first_fresh_id) continue;
                auto d = distance(traj.initial, a, b);
                REQUIRE(d.has_value());
                CHECK(*d <= bound);
            }
        }
    }
}

TEST_CASE("conditional process: closed-form acceptance for one-shot flips") {
    // B = single vertex with an irreversible flip; accept iff its clock fires
    // and none of the d boundary clocks do: (1 - e^-lt) * e^-dlt
    Grammar g = parse_grammar(suite::kSpinFlipOneWay);
    GeneratedWindow w = generate_window("lattice:z2:radius=4", g.alphabet());
    std::vector<VertexId> b{w.origin};
    const double t = 0.4;
    const int runs = 400;
    double inv_rate_sum = 0;
    for (int r = 0; r < runs; ++r) {
        SimConfig cfg;
        cfg.horizon = t;
        cfg.seed = Rng::for_replica(5150, r, 0).next_u64();
        ConditionalRun run = conditional_cluster_process(w.graph, b, g, cfg);
        // validator re-check: the accepted trajectory satisfies the condition
        CHECK(run.trajectory.touched == b);
        inv_rate_sum += static_cast<double>(run.attempts);
    }
    double mean_attempts = inv_rate_sum / runs;
    const int d = 4;  // boundary degree of the origin in Z^2
    double accept = (1 - std::exp(-t)) * std::exp(-d * t);
    // attempts are geometric with mean 1/accept
    CHECK(std::abs(mean_attempts - 1 / accept) < 5 * std::sqrt((1 - accept) / (accept * accept * runs)));
}

TEST_CASE("conditional process with no matching spin never accepts") {
    Grammar g = parse_grammar(
        "alphabet a b\nrule f rate 1\n lhs\n v 0 b\n rhs\n v 0 a\n anchor 0\n glue 0 -> 0\nend\n");
    GeneratedWindow w = generate_window("lattice:z2:radius=3", g.alphabet());
    std::vector<VertexId> b{w.origin};
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.seed = 8;
    CHECK_THROWS_AS(conditional_cluster_process(w.graph, b, g, cfg, 50), AcceptanceTooLow);
}

TEST_CASE("growth_count: zero events and append-only counting") {
    Grammar frozen = parse_grammar(suite::kFrozen);
    GeneratedWindow w = path_window(5, frozen.alphabet());
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.margin = 0;
    Trajectory traj = run_window(w, frozen, cfg);
    std::vector<VertexId> b{1, 2};
    CHECK(growth_count(traj, b) == 2);

    // pure append-leaf dynamics: |B| + one per event, cross-checked by census
    Grammar append = parse_grammar(suite::kAppendLeafOnly);
    GeneratedWindow w2 = path_window(5, append.alphabet());
    SimConfig cfg2;
    cfg2.horizon = 0.4;
    cfg2.seed = 77;
    cfg2.margin = 0;
    Trajectory traj2 = run_window(w2, append, cfg2);
    std::vector<VertexId> all{0, 1, 2, 3, 4};
    CHECK(growth_count(traj2, all) == 5 + traj2.events.size());

    std::size_t census = 0;
    traj2.final_graph.for_each_vertex([&](VertexId id, Spin) {
        if (id >= traj2.first_fresh_id ||
            std::binary_search(all.begin(), all.end(), id))
            ++census;
    });
    CHECK(growth_count(traj2, all) == census);
}

TEST_CASE("event cap is reported, not silently truncated") {
    Grammar g = parse_grammar(suite::kSpinFlipBoth);
    GeneratedWindow w = path_window(10, g.alphabet());
    SimConfig cfg;
    cfg.horizon = 100.0;
    cfg.seed = 4;
    cfg.margin = 0;
    cfg.event_cap = 25;
    Trajectory traj = run_window(w, g, cfg);
    CHECK(traj.event_cap_hit);
    CHECK(traj.events.size() == 25);
}
