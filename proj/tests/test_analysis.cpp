#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rgg/analysis.hpp"
#include "rgg/generators.hpp"
#include "rule_suite.hpp"

using namespace rgg;

TEST_CASE("dimension of the line: D_100 from the closed-form ball count") {
    Alphabet alphabet{"a"};
    auto w = generate_window("lattice:z1:radius=100", alphabet);
    MacrodimensionEstimate est = dim_profile(w.graph, w.origin, 100);
    CHECK(est.dim_sequence[100] == doctest::Approx(std::log(201.0) / std::log(100.0)));
    CHECK(est.dim_sequence[100] == doctest::Approx(1.1516).epsilon(1e-3));
    CHECK(est.slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dimension of the plane over the spec fit window") {
    Alphabet alphabet{"a"};
    auto w = generate_window("lattice:z2:radius=100", alphabet);
    MacrodimensionEstimate est = dim_profile(w.graph, w.origin, 100, FitWindow{16, 100});
    CHECK(std::abs(est.slope - 2.0) < 0.1);
    CHECK(est.liminf_proxy - est.proxy_tolerance <= est.slope);
    CHECK(est.slope <= est.limsup_proxy + est.proxy_tolerance);
}

TEST_CASE("binary tree dimension grows without bound") {
    Alphabet alphabet{"a"};
    auto w = generate_window("tree:binary:depth=14", alphabet);
    MacrodimensionEstimate est = dim_profile(w.graph, w.origin, 14);
    // monotone growth from n = 4 on (the log denominator dominates below that)
    for (int n = 4; n <= 14; ++n) CHECK(est.dim_sequence[n] > est.dim_sequence[n - 1]);

    // closed-form profile reaches the paper's D_50 scale
    MacrodimensionEstimate ideal =
        dim_profile_from_sizes(analytic_profile("tree:binary", 50), FitWindow{12, 50});
    CHECK(ideal.dim_sequence[50] ==
          doctest::Approx(51 * std::log(2.0) / std::log(50.0)).epsilon(1e-9));
    CHECK(ideal.dim_sequence[50] > 5.0);
}

TEST_CASE("degenerate constant profile fits slope zero") {
    BallProfile p;
    p.center = 0;
    p.sizes.assign(12, 5);
    p.sizes[0] = 1;
    MacrodimensionEstimate est = dim_profile_from_sizes(p, FitWindow{3, 11});
    CHECK(est.slope == doctest::Approx(0.0));
}

TEST_CASE("dim_profile flags exhausted windows") {
    Alphabet alphabet{"a"};
    SpinGraph g(4, alphabet);
    for (int i = 0; i < 4; ++i) g.add_vertex(0);
    for (int i = 0; i + 1 < 4; ++i) g.add_edge(i, i + 1);
    CHECK_THROWS_AS(dim_profile(g, 0, 10), WindowTooSmall);
}

TEST_CASE("basepoint sandwich: trivial and closed-form cases") {
    Alphabet alphabet{"a"};
    auto w = generate_window("lattice:z2:radius=20", alphabet);
    CHECK(!basepoint_invariance_check(w.graph, w.origin, w.origin, 12));
    // neighbors: 2(n-1)^2+2(n-1)+1 <= 2n^2+2n+1 <= 2(n+1)^2+2(n+1)+1
    VertexId nbr = w.graph.neighbors(w.origin)[0];
    CHECK(!basepoint_invariance_check(w.graph, w.origin, nbr, 12));
    CHECK(!basepoint_invariance_check(w.graph, 5, 17, 12));
}

TEST_CASE("basepoint sandwich on random mid-trajectory graphs") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=10", g.alphabet());
    Rng rng(404);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SimConfig cfg;
        cfg.horizon = 0.3;
        cfg.seed = seed;
        Trajectory traj = run_window(w, g, cfg);
        auto ids = traj.final_graph.vertices_sorted();
        for (int trial = 0; trial < 20; ++trial) {
            VertexId x = ids[rng.index(ids.size())];
            VertexId y = ids[rng.index(ids.size())];
            if (!distance(traj.final_graph, x, y)) continue;
            CHECK(!basepoint_invariance_check(traj.final_graph, x, y, 8));
        }
    }
}

TEST_CASE("cluster tail: frozen grammar never touches the anchor") {
    Grammar g = parse_grammar(suite::kFrozen);
    GeneratedWindow w = generate_window("lattice:z2:radius=5", g.alphabet());
    ClusterTailAccumulator acc(w.origin);
    for (int r = 0; r < 50; ++r) {
        SimConfig cfg;
        cfg.horizon = 0.5;
        cfg.seed = r + 1;
        acc.add(run_window(w, g, cfg));
    }
    ClusterTailFit fit = acc.fit();
    CHECK(fit.anchor_untouched == 50);
    CHECK(fit.pmf.empty());
    CHECK(!fit.fit_ok);
}

TEST_CASE("cluster tail pmf equals a direct census") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=6", g.alphabet());
    ClusterTailAccumulator acc(w.origin);
    std::map<std::size_t, int> census;
    const int replicas = 300;
    for (int r = 0; r < replicas; ++r) {
        SimConfig cfg;
        cfg.horizon = 0.2;
        cfg.seed = Rng::for_replica(99, r, 0).next_u64();
        Trajectory traj = run_window(w, g, cfg);
        acc.add(traj);
        // census oracle: find the anchor in the component list
        std::size_t size = 0;
        for (const auto& cl : touched_clusters(traj)) {
            if (std::binary_search(cl.begin(), cl.end(), w.origin)) {
                size = cl.size();
                break;
            }
        }
        census[size] += 1;
    }
    ClusterTailFit fit = acc.fit(1);
    CHECK(fit.anchor_untouched == static_cast<std::uint64_t>(census[0]));
    for (const auto& b : fit.pmf)
        CHECK(b.count == static_cast<std::uint64_t>(census[b.m]));
}

TEST_CASE("pure growth: closed form at lambda t = ln 2") {
    const double lt = std::log(2.0);
    CHECK(yule_pmf(1.0, lt, 1) == doctest::Approx(0.5));
    CHECK(yule_pmf(1.0, lt, 2) == doctest::Approx(0.25));
    // t -> 0: no birth in zero time
    CHECK(yule_pmf(1.0, 1e-12, 1) == doctest::Approx(1.0));

    PureGrowthReport rep = pure_growth_check(1.0, lt, 3, 10, 30000, 12345);
    CHECK(rep.tv < 0.02);
    CHECK(rep.tv_m < 0.03);
    // the paper's convolution expression equals the closed product form
    CHECK(rep.conv_identity_gap < 1e-12);
}

TEST_CASE("growth tail: frozen grammar has empty tails") {
    std::vector<std::size_t> counts(40, 3);  // |B| = 3, no growth
    const int grid[] = {1, 2, 3};
    GrowthTailReport rep = growth_tail_check(counts, 3, grid);
    for (const auto& row : rep.rows) CHECK(row.p == 0.0);
    CHECK(!rep.fit_ok);
    CHECK_THROWS_AS(growth_tail_check({}, 1, grid), InsufficientData);
}

TEST_CASE("growth tail: append-leaf decay is at least geometric") {
    Grammar g = parse_grammar(suite::kAppendLeafOnly);
    // tiny window: one vertex plus its boundary
    GeneratedWindow w = generate_window("lattice:z2:radius=3", g.alphabet());
    std::vector<VertexId> b{w.origin};
    std::vector<std::size_t> counts;
    for (int r = 0; r < 300; ++r) {
        SimConfig cfg;
        cfg.horizon = 0.5;
        cfg.seed = Rng::for_replica(31337, r, 0).next_u64();
        ConditionalRun run = conditional_cluster_process(w.graph, b, g, cfg);
        counts.push_back(growth_count(run.trajectory, b));
    }
    const int grid[] = {1, 2, 3, 4, 5};
    GrowthTailReport rep = growth_tail_check(counts, 1, grid);
    // Yule tree conditioned on its first birth (the acceptance event):
    // P(growth > k) = q^(k-1) with q = 1 - e^(-lambda t)
    double q = 1 - std::exp(-0.5);
    for (const auto& row : rep.rows) {
        double expect = std::pow(q, row.k - 1);
        CHECK(std::abs(row.p - expect) <=
              4 * std::sqrt(expect * (1 - expect) / 300) + 0.03);
    }
    CHECK(rep.fit_ok);
    CHECK(std::abs(rep.delta1 - q) < 0.1);
}

TEST_CASE("distortion: spin-only dynamics never moves a distance") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=6", g.alphabet());
    SimConfig cfg;
    cfg.horizon = 0.3;
    cfg.seed = 21;
    Trajectory traj = run_window(w, g, cfg);
    REQUIRE(traj.events.size() > 3);
    DistortionReport rep = distance_distortion(traj, g, 8, 5);
    CHECK(rep.max_increase == 0.0);
    CHECK(rep.max_decrease == 0.0);
    CHECK(rep.max_total_drift == 0.0);
    CHECK(rep.unreachable_events == 0);
}

TEST_CASE("distortion: deleting a cycle edge stretches crossing pairs by two") {
    Grammar g = parse_grammar(suite::kSixRules);
    std::uint32_t del = 0;
    for (std::uint32_t i = 0; i < g.rule_count(); ++i)
        if (g.rule(i).name == "delete_link") del = i;

    // 8-cycle, one delete event at edge {3,4}; untouched source at vertex 2
    SpinGraph cyc(8, g.alphabet());
    for (int i = 0; i < 8; ++i) cyc.add_vertex(0);
    for (int i = 0; i < 8; ++i) cyc.add_edge(i, (i + 1) % 8);

    Trajectory traj;
    traj.initial = cyc;
    traj.final_graph = cyc;
    traj.final_graph.remove_edge(3, 4);
    traj.origin = 2;
    traj.horizon = 1.0;
    traj.first_fresh_id = 8;
    traj.events.push_back(Event{0.5, del, {3, 4}, {}});
    traj.touched = {3, 4};
    traj.untouched = {0, 1, 2, 5, 6, 7};

    DistortionReport rep = distance_distortion(traj, g, 6, 1);
    CHECK(rep.max_increase == 2.0);   // (2,5): 3 hops -> 5 hops
    CHECK(rep.max_decrease == 0.0);
    REQUIRE(rep.increase_witness.has_value());
    CHECK(rep.increase_witness->before == 3);
    CHECK(rep.increase_witness->after == 5);
    CHECK(rep.max_total_drift == 2.0);
}

TEST_CASE("correlation: trivial sets and the independent-clock closed form") {
    Grammar g = parse_grammar(suite::kSpinFlipOneWay);
    const double t = 0.3;
    std::vector<std::pair<std::string, std::vector<VertexId>>> sets;
    sets.push_back({"empty", {}});
    sets.push_back({"origin", {0}});
    CorrelationAccumulator acc(sets);
    for (int radius : {4, 8}) {
        GeneratedWindow w =
            generate_window("lattice:z2:radius=" + std::to_string(radius), g.alphabet());
        for (int r = 0; r < 1500; ++r) {
            SimConfig cfg;
            cfg.horizon = t;
            cfg.seed = Rng::for_replica(808, r, radius).next_u64();
            acc.add(radius, run_window(w, g, cfg));
        }
    }
    CorrelationTable table = acc.table();
    double p = 1 - std::exp(-t);
    for (const auto& cell : table.cells) {
        if (cell.set_name == "empty") {
            CHECK(cell.mean == 1.0);  // empty product
        } else {
            CHECK(std::abs(cell.mean - p) < 4 * cell.se + 1e-9);
        }
    }
    REQUIRE(!table.diffs.empty());
    for (const auto& d : table.diffs)
        if (d.set_name == "origin") CHECK(d.delta < 3 * d.combined_se + 1e-9);
}

TEST_CASE("correlation: frozen grammar gives zero for nonempty sets") {
    Grammar g = parse_grammar(suite::kFrozen);
    GeneratedWindow w = generate_window("lattice:z2:radius=4", g.alphabet());
    CorrelationAccumulator acc({{"origin", {w.origin}}});
    for (int r = 0; r < 20; ++r) {
        SimConfig cfg;
        cfg.horizon = 1.0;
        cfg.seed = r + 1;
        acc.add(4, run_window(w, g, cfg));
    }
    CHECK(acc.table().cells[0].mean == 0.0);
}

TEST_CASE("correlation monotone-set inequality") {
    Grammar g = parse_grammar(suite::kContact);
    GeneratedWindow w = generate_window("lattice:z2:radius=6", g.alphabet());
    VertexId nbr = w.graph.neighbors(w.origin)[0];
    std::vector<std::pair<std::string, std::vector<VertexId>>> sets;
    sets.push_back({"s1", {w.origin}});
    sets.push_back({"s2", {nbr}});
    sets.push_back({"union", {w.origin, nbr}});
    CorrelationAccumulator acc(sets);
    for (int r = 0; r < 1200; ++r) {
        SimConfig cfg;
        cfg.horizon = 0.25;
        cfg.seed = Rng::for_replica(606, r, 0).next_u64();
        acc.add(6, run_window(w, g, cfg));
    }
    CorrelationTable table = acc.table();
    double m1 = 0, m2 = 0, mu = 0, se = 0;
    for (const auto& c : table.cells) {
        if (c.set_name == "s1") m1 = c.mean;
        if (c.set_name == "s2") m2 = c.mean;
        if (c.set_name == "union") {
            mu = c.mean;
            se = c.se;
        }
    }
    CHECK(mu <= std::min(m1, m2) + 2 * se + 1e-9);
}

TEST_CASE("factorization: independent clocks give covariances near zero") {
    Grammar g = parse_grammar(suite::kSpinFlipBoth);
    GeneratedWindow w = generate_window("lattice:z2:radius=6", g.alphabet());
    // anchors far apart: origin and two boundary-adjacent interior vertices
    std::vector<VertexId> anchors{w.origin};
    for (VertexId v = 0; v < static_cast<VertexId>(w.level_of.size()); ++v) {
        if (w.level_of[v] == 4) {
            anchors.push_back(v);
            if (anchors.size() == 3) break;
        }
    }
    FactorizationAccumulator acc(anchors);
    for (int r = 0; r < 800; ++r) {
        SimConfig cfg;
        cfg.horizon = 0.15;
        cfg.seed = Rng::for_replica(715, r, 0).next_u64();
        acc.add(run_window(w, g, cfg));
    }
    FactorizationReport rep = acc.report();
    CHECK(rep.same_cluster_variance > 0.0);
    for (const auto& pr : rep.pairs) {
        if (pr.observations >= 30) CHECK(pr.covers_zero);
    }
}
