#include "rgg/harness.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace rgg {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

// --format json|csv mirrors the machine-readable artifact on stdout
void emit_stdout(const HarnessOptions& opt, const Json& doc, const std::string& csv = {}) {
    if (opt.format == "json")
        std::cout << doc.dump(2) << "\n";
    else if (opt.format == "csv" && !csv.empty())
        std::cout << csv;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// deterministic connected vertex set around the origin: BFS by (level, id)
std::vector<VertexId> bfs_set(const SpinGraph& g, VertexId origin, std::size_t size) {
    std::vector<VertexId> out{origin};
    std::unordered_set<VertexId> seen{origin};
    std::size_t next = 0;
    while (out.size() < size && next < out.size()) {
        for (VertexId nb : g.neighbors(out[next])) {
            if (out.size() >= size) break;
            if (seen.insert(nb).second) out.push_back(nb);
        }
        ++next;
    }
    return out;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

Grammar load_grammar_file(const std::string& path) { return parse_grammar(read_file(path)); }

void for_each_replica(int replicas, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || replicas <= 1) {
        for (int r = 0; r < replicas; ++r) body(r);
        return;
    }
    std::atomic<int> counter{0};
    std::vector<std::thread> pool;
    int workers = std::min(threads, replicas);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                int r = counter.fetch_add(1);
                if (r >= replicas) return;
                body(r);
            }
        });
    }
    for (auto& t : pool) t.join();
}

int cmd_simulate(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Grammar grammar = load_grammar_file(opt.grammar_path);
        GeneratedWindow window = generate_window(opt.generator, grammar.alphabet());

        Json summaries = Json::array();
        std::vector<Json> slots(opt.replicas);
        std::vector<std::string> logs(opt.replicas);
        for_each_replica(opt.replicas, opt.threads, [&](int r) {
            SimConfig cfg;
            cfg.horizon = opt.epsilons.front();
            cfg.seed = Rng::for_replica(opt.seed, r, 0).next_u64();
            cfg.event_cap = opt.event_cap;
            cfg.strict_connectivity = opt.strict_connectivity;
            Trajectory traj = run_window(window, grammar, cfg);
            slots[r] = trajectory_summary(traj);
            slots[r]["replica"] = r;
            logs[r] = event_log(traj, grammar);
        });
        for (int r = 0; r < opt.replicas; ++r) {
            summaries.push_back(slots[r]);
            write_file(fs::path(opt.out_dir) / ("replica_" + std::to_string(r) + ".events.txt"),
                       logs[r]);
        }
        Json doc{{"command", "simulate"},
                 {"generator", opt.generator},
                 {"epsilon", opt.epsilons.front()},
                 {"seed", opt.seed},
                 {"replicas", summaries}};
        write_json(fs::path(opt.out_dir) / "summary.json", doc);
        emit_stdout(opt, doc);
        std::cout << "simulate: " << opt.replicas << " replicas -> " << opt.out_dir << "\n";
        return 0;
    });
}

int cmd_dimension(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Alphabet alphabet{"a"};
        if (!opt.grammar_path.empty())
            alphabet = load_grammar_file(opt.grammar_path).alphabet();
        std::vector<std::string> specs = opt.generators;
        if (specs.empty() && !opt.generator.empty()) specs.push_back(opt.generator);
        if (specs.empty()) throw ConfigError("dimension: no generator given");

        Json docs = Json::array();
        std::string csv;
        for (const auto& spec : specs) {
            GeneratedWindow window = generate_window(spec, alphabet);
            int n_max = window.radius;
            MacrodimensionEstimate est = dim_profile(window.graph, window.origin, n_max);
            Json j = to_json(est);
            j["generator"] = spec;
            if (has_analytic_profile(spec)) {
                MacrodimensionEstimate ideal =
                    dim_profile_from_sizes(analytic_profile(spec, n_max), est.window);
                j["analytic_slope"] = ideal.slope;
            }
            docs.push_back(j);
            csv += "# " + spec + "\n" + dimension_csv(est);
            std::cout << "dimension " << spec << ": slope " << est.slope << " over ["
                      << est.window.n_min << "," << est.window.n_max << "]\n";
        }
        Json doc{{"command", "dimension"}, {"reports", docs}};
        write_json(fs::path(opt.out_dir) / "dimension.json", doc);
        write_file(fs::path(opt.out_dir) / "dimension.csv", csv);
        emit_stdout(opt, doc, csv);
        return 0;
    });
}

int cmd_clusters(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Grammar grammar = load_grammar_file(opt.grammar_path);
        GeneratedWindow window = generate_window(opt.generator, grammar.alphabet());

        Json by_eps = Json::array();
        std::string csv;
        std::vector<double> deltas;
        for (std::size_t e = 0; e < opt.epsilons.size(); ++e) {
            ClusterTailAccumulator acc(window.origin);
            std::vector<std::size_t> sizes(opt.replicas);
            for_each_replica(opt.replicas, opt.threads, [&](int r) {
                SimConfig cfg;
                cfg.horizon = opt.epsilons[e];
                cfg.seed = Rng::for_replica(opt.seed, r, e + 1).next_u64();
                cfg.event_cap = opt.event_cap;
                Trajectory traj = run_window(window, grammar, cfg);
                sizes[r] = anchor_cluster_size(traj, window.origin);
            });
            for (std::size_t s : sizes) acc.add_size(s);
            ClusterTailFit fit = acc.fit();
            deltas.push_back(fit.delta);
            Json j = to_json(fit);
            j["epsilon"] = opt.epsilons[e];
            by_eps.push_back(j);
            csv += "# epsilon=" + std::to_string(opt.epsilons[e]) + "\n" + cluster_csv(fit);
            std::cout << "clusters eps=" << opt.epsilons[e] << ": delta " << fit.delta
                      << " r2 " << fit.r2 << "\n";
        }
        Json doc{{"command", "clusters"}, {"reports", by_eps}};
        write_json(fs::path(opt.out_dir) / "clusters.json", doc);
        write_file(fs::path(opt.out_dir) / "clusters.csv", csv);
        emit_stdout(opt, doc, csv);
        return 0;
    });
}

int cmd_distortion(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Grammar grammar = load_grammar_file(opt.grammar_path);
        GeneratedWindow window = generate_window(opt.generator, grammar.alphabet());
        SimConfig cfg;
        cfg.horizon = opt.epsilons.front();
        cfg.seed = Rng::for_replica(opt.seed, 0, 0).next_u64();
        cfg.event_cap = opt.event_cap;
        Trajectory traj = run_window(window, grammar, cfg);
        DistortionReport rep = distance_distortion(traj, grammar, opt.pair_sample, opt.seed);
        Json j = to_json(rep);
        j["threshold"] = opt.distortion_threshold;
        j["within_threshold"] = std::max(rep.max_increase, rep.max_decrease) <=
                                opt.distortion_threshold;
        write_json(fs::path(opt.out_dir) / "distortion.json", j);
        emit_stdout(opt, j);
        std::cout << "distortion: max increase " << rep.max_increase << ", max decrease "
                  << rep.max_decrease << " over " << rep.events_replayed << " events\n";
        return 0;
    });
}

int cmd_verify(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Grammar grammar = load_grammar_file(opt.grammar_path);
        LocalityReport local = validate_local(grammar);
        BoundednessReport bounded = validate_locally_bounded(grammar);

        Json rules = Json::array();
        for (std::size_t i = 0; i < grammar.rule_count(); ++i) {
            const auto& r = grammar.rule(i);
            rules.push_back(Json{{"name", r.name},
                                 {"rate", r.rate},
                                 {"lhs_radius", r.lhs.radius()},
                                 {"lhs_connected", r.lhs.connected()}});
        }
        Json findings = Json::array();
        for (const auto& f : bounded.findings)
            findings.push_back(Json{
                {"rule", grammar.rule(f.rule).name},
                {"verdict", f.verdict == BoundednessVerdict::Fail ? "fail" : "warning"},
                {"detail", f.detail}});

        Json doc{{"command", "verify"},
                 {"local", local.pass},
                 {"locally_bounded", bounded.verdict == BoundednessVerdict::Pass      ? "pass"
                                     : bounded.verdict == BoundednessVerdict::Warning ? "warning"
                                                                                      : "fail"},
                 {"boundedness_findings", findings},
                 {"all_radii_le_1", grammar.all_radii_le_1()},
                 {"rules", rules}};

        bool hard_fail = !local.pass || bounded.verdict == BoundednessVerdict::Fail;
        if (!opt.generator.empty()) {
            GeneratedWindow window = generate_window(opt.generator, grammar.alphabet());
            SpinGraph seed_graph = ball(window.graph, window.origin, opt.state_seed_radius);
            RateGraph chain = enumerate_state_space(grammar, seed_graph,
                                                    static_cast<std::size_t>(opt.state_cap));
            ReversibilityReport rev = check_reversibility(chain, opt.n0);
            doc["reversibility"] = to_json(rev);
            if (rev.verdict != ReversibilityReport::Verdict::Reversible) hard_fail = true;
        }
        write_json(fs::path(opt.out_dir) / "verify.json", doc);
        emit_stdout(opt, doc);
        std::cout << "verify: local=" << (local.pass ? "pass" : "fail")
                  << " bounded=" << doc["locally_bounded"].get<std::string>() << "\n";
        return hard_fail ? 2 : 0;
    });
}

int cmd_reversibility(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Grammar grammar = load_grammar_file(opt.grammar_path);
        GeneratedWindow window = generate_window(opt.generator, grammar.alphabet());
        SpinGraph seed_graph = ball(window.graph, window.origin, opt.state_seed_radius);
        RateGraph chain =
            enumerate_state_space(grammar, seed_graph, static_cast<std::size_t>(opt.state_cap));
        ReversibilityReport rep = check_reversibility(chain, opt.n0);
        Json doc = to_json(rep);
        write_json(fs::path(opt.out_dir) / "reversibility.json", doc);
        emit_stdout(opt, doc);
        std::cout << "reversibility: "
                  << (rep.verdict == ReversibilityReport::Verdict::Reversible
                          ? "reversible"
                          : "not reversible")
                  << " over " << rep.num_states << " states, " << rep.cycles_checked
                  << " cycles\n";
        return rep.verdict == ReversibilityReport::Verdict::Reversible ? 0 : 2;
    });
}

int cmd_experiment(const HarnessOptions& opt) {
    return run_guarded([&]() {
        Grammar grammar = load_grammar_file(opt.grammar_path);

        LocalityReport local = validate_local(grammar);
        BoundednessReport bounded = validate_locally_bounded(grammar);
        if (!local.pass || bounded.verdict == BoundednessVerdict::Fail) {
            std::cerr << "experiment: grammar fails local/bounded validation\n";
            return 2;
        }

        InvarianceConfig inv_cfg;
        inv_cfg.generator = opt.generator;
        inv_cfg.epsilon = opt.epsilons.front();
        inv_cfg.n_grid = opt.radii;
        inv_cfg.replicas = opt.replicas;
        inv_cfg.seed = opt.seed;
        inv_cfg.ambient_factor = opt.ambient_factor;
        inv_cfg.event_cap = opt.event_cap;
        InvarianceReport inv = invariance_experiment(grammar, inv_cfg);

        Json doc{{"command", "experiment"}, {"invariance", to_json(inv)}};

        // side reports share the largest requested window
        int side_radius = *std::max_element(opt.radii.begin(), opt.radii.end());
        GeneratedWindow window = generate_window(
            opt.generator + ":radius=" + std::to_string(side_radius), grammar.alphabet());

        // delta(eps): anchor-cluster tail over the epsilon grid
        Json tails = Json::array();
        for (std::size_t e = 0; e < opt.epsilons.size(); ++e) {
            ClusterTailAccumulator acc(window.origin);
            for (int r = 0; r < opt.replicas; ++r) {
                SimConfig cfg;
                cfg.horizon = opt.epsilons[e];
                cfg.seed = Rng::for_replica(opt.seed, r, 100 + e).next_u64();
                cfg.event_cap = opt.event_cap;
                acc.add(run_window(window, grammar, cfg));
            }
            Json j = to_json(acc.fit());
            j["epsilon"] = opt.epsilons[e];
            tails.push_back(j);
        }
        doc["cluster_tails"] = tails;

        // delta1(eps): conditional growth tails
        Json growth = Json::array();
        std::vector<VertexId> b_set =
            bfs_set(window.graph, window.origin, opt.cluster_set_size);
        const int k_grid_arr[] = {1, 2, 3, 4, 6, 8};
        for (std::size_t e = 0; e < opt.epsilons.size(); ++e) {
            Json j;
            j["epsilon"] = opt.epsilons[e];
            try {
                std::vector<std::size_t> counts;
                for (int r = 0; r < opt.replicas; ++r) {
                    SimConfig cfg;
                    cfg.horizon = opt.epsilons[e];
                    cfg.seed = Rng::for_replica(opt.seed, r, 200 + e).next_u64();
                    cfg.event_cap = opt.event_cap;
                    ConditionalRun run = conditional_cluster_process(
                        window.graph, b_set, grammar, cfg, opt.conditional_attempts);
                    counts.push_back(growth_count(run.trajectory, b_set));
                }
                j["report"] = to_json(growth_tail_check(counts, b_set.size(), k_grid_arr));
            } catch (const AcceptanceTooLow& err) {
                j["error"] = err.what();
            }
            growth.push_back(j);
        }
        doc["growth_tails"] = growth;

        // distortion on one long trajectory
        {
            SimConfig cfg;
            cfg.horizon = opt.epsilons.front();
            cfg.seed = Rng::for_replica(opt.seed, 0, 300).next_u64();
            cfg.event_cap = opt.event_cap;
            Trajectory traj = run_window(window, grammar, cfg);
            doc["distortion"] = to_json(distance_distortion(traj, grammar, opt.pair_sample,
                                                            opt.seed));
        }

        // correlation convergence across the radius grid
        {
            std::vector<std::pair<std::string, std::vector<VertexId>>> t_sets;
            t_sets.push_back({"origin", {window.origin}});
            if (!window.graph.neighbors(window.origin).empty())
                t_sets.push_back(
                    {"origin_pair", {window.origin, window.graph.neighbors(window.origin)[0]}});
            CorrelationAccumulator corr(t_sets);
            for (int radius : opt.radii) {
                GeneratedWindow w = generate_window(
                    opt.generator + ":radius=" + std::to_string(radius), grammar.alphabet());
                for (int r = 0; r < opt.replicas; ++r) {
                    SimConfig cfg;
                    cfg.horizon = opt.epsilons.front();
                    cfg.seed = Rng::for_replica(opt.seed, r, 400 + radius).next_u64();
                    cfg.event_cap = opt.event_cap;
                    corr.add(radius, run_window(w, grammar, cfg));
                }
            }
            CorrelationTable table = corr.table();
            doc["correlation"] = to_json(table);
            write_file(fs::path(opt.out_dir) / "correlation.csv", correlation_csv(table));
        }

        // factorization across well-separated anchors
        {
            std::vector<VertexId> anchors;
            int step = std::max(1, side_radius / 3);
            auto levels = window.level_of;
            for (int target = 0; target + step <= side_radius; target += step) {
                for (VertexId v = 0; v < static_cast<VertexId>(levels.size()); ++v) {
                    if (levels[v] == target) {
                        anchors.push_back(v);
                        break;
                    }
                }
            }
            FactorizationAccumulator fact(anchors);
            for (int r = 0; r < opt.replicas; ++r) {
                SimConfig cfg;
                cfg.horizon = opt.epsilons.front();
                cfg.seed = Rng::for_replica(opt.seed, r, 500).next_u64();
                cfg.event_cap = opt.event_cap;
                fact.add(run_window(window, grammar, cfg));
            }
            doc["factorization"] = to_json(fact.report());
        }

        write_json(fs::path(opt.out_dir) / "experiment.json", doc);
        emit_stdout(opt, doc);
        std::cout << "experiment: median slope diff " << inv.median_slope_diff << ", C "
                  << inv.c_empirical << "\n";
        return 0;
    });
}

}  // namespace rgg
