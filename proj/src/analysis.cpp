#include "rgg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace rgg {

// ------------------------------------------------------------ macrodimension

namespace {

MacrodimensionEstimate finish_estimate(BallProfile profile, FitWindow window) {
    MacrodimensionEstimate est;
    const int n_max = profile.max_radius();
    if (window.n_min < 0 || window.n_max < 0) window = FitWindow{std::max(2, n_max / 4), n_max};
    if (window.n_min < 2) window.n_min = 2;
    if (window.n_max > n_max || window.n_min > window.n_max)
        throw WindowTooSmall("fit window [" + std::to_string(window.n_min) + "," +
                             std::to_string(window.n_max) + "] exceeds profile radius " +
                             std::to_string(n_max));

    est.window = window;
    est.dim_sequence.assign(static_cast<std::size_t>(n_max) + 1,
                            std::numeric_limits<double>::quiet_NaN());
    for (int n = 2; n <= n_max; ++n)
        est.dim_sequence[n] =
            std::log(static_cast<double>(profile.size_at(n))) / std::log(static_cast<double>(n));

    std::vector<double> xs, ys;
    est.limsup_proxy = -std::numeric_limits<double>::infinity();
    est.liminf_proxy = std::numeric_limits<double>::infinity();
    for (int n = window.n_min; n <= window.n_max; ++n) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(static_cast<double>(profile.size_at(n))));
        est.limsup_proxy = std::max(est.limsup_proxy, est.dim_sequence[n]);
        est.liminf_proxy = std::min(est.liminf_proxy, est.dim_sequence[n]);
    }
    LinearFit fit = linear_fit(xs, ys);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.r2 = fit.r2;
    est.proxy_tolerance =
        std::abs(fit.intercept) / std::log(static_cast<double>(std::max(2, window.n_min)));
    est.profile = std::move(profile);
    return est;
}

}  // namespace

MacrodimensionEstimate dim_profile(const SpinGraph& g, VertexId x, int n_max,
                                   FitWindow window) {
    ProfileScan scan = scan_ball_profile(g, x, n_max);
    if (scan.exhausted)
        throw WindowTooSmall("graph exhausted before radius " + std::to_string(n_max) +
                             " around vertex " + std::to_string(x));
    return finish_estimate(std::move(scan.profile), window);
}

MacrodimensionEstimate dim_profile_from_sizes(BallProfile profile, FitWindow window) {
    return finish_estimate(std::move(profile), window);
}

std::optional<SandwichViolation> basepoint_invariance_check(const SpinGraph& g, VertexId x,
                                                            VertexId y, int n_max) {
    auto d = distance(g, x, y);
    if (!d) throw UnknownVertex("basepoint check: vertices in different components");
    const int a = *d;
    BallProfile px = scan_ball_profile(g, x, n_max).profile;
    BallProfile py = scan_ball_profile(g, y, n_max).profile;
    for (int n = a + 1; n <= n_max - a; ++n) {
        std::uint64_t lower = py.size_at(n - a);
        std::uint64_t mid = px.size_at(n);
        std::uint64_t upper = py.size_at(n + a);
        if (lower > mid || mid > upper)
            return SandwichViolation{x, y, n, lower, mid, upper};
    }
    return std::nullopt;
}

// ------------------------------------------------------------- cluster tails

std::size_t anchor_cluster_size(const Trajectory& traj, VertexId anchor) {
    // anchor's cluster: component of the induced Q-subgraph of G(0)
    if (!std::binary_search(traj.touched.begin(), traj.touched.end(), anchor)) return 0;
    std::unordered_set<VertexId> in_q(traj.touched.begin(), traj.touched.end());
    std::unordered_set<VertexId> seen{anchor};
    std::deque<VertexId> queue{anchor};
    std::size_t size = 1;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (VertexId nb : traj.initial.neighbors(v)) {
            if (in_q.count(nb) && seen.insert(nb).second) {
                ++size;
                queue.push_back(nb);
            }
        }
    }
    return size;
}

void ClusterTailAccumulator::add(const Trajectory& traj) {
    add_size(anchor_cluster_size(traj, anchor_));
}

void ClusterTailAccumulator::add_size(std::size_t size) {
    ++replicas_;
    ++size_counts_[size];
}

ClusterTailFit ClusterTailAccumulator::fit(std::uint64_t min_bucket_count) const {
    ClusterTailFit out;
    out.replicas = replicas_;
    if (replicas_ == 0) throw InsufficientData("cluster tail fit with zero replicas");
    auto zero_it = size_counts_.find(0);
    out.anchor_untouched = zero_it == size_counts_.end() ? 0 : zero_it->second;

    for (const auto& [m, count] : size_counts_) {
        if (m == 0) continue;
        TailBucket b;
        b.m = m;
        b.count = count;
        b.p = static_cast<double>(count) / static_cast<double>(replicas_);
        b.wilson = wilson_interval(count, replicas_);
        out.pmf.push_back(b);
    }

    // weighted log-linear tail fit over m >= 2; sparse buckets dropped
    std::vector<double> xs, ys, ws;
    for (const auto& b : out.pmf) {
        if (b.m < 2 || b.count < min_bucket_count) continue;
        xs.push_back(static_cast<double>(b.m));
        ys.push_back(std::log(b.p));
        ws.push_back(static_cast<double>(b.count));
    }
    if (xs.size() >= 2) {
        LinearFit fit = linear_fit(xs, ys, ws);
        out.delta = std::exp(fit.slope);
        out.C = std::exp(fit.intercept);
        out.r2 = fit.r2;
        out.fit_ok = out.delta > 0 && out.delta < 1;
    }
    return out;
}

ClusterTailFit cluster_tail_fit(std::span<const Trajectory> replicas, VertexId anchor,
                                std::uint64_t min_bucket_count) {
    ClusterTailAccumulator acc(anchor);
    for (const auto& t : replicas) acc.add(t);
    return acc.fit(min_bucket_count);
}

// --------------------------------------------------------------- pure growth

double yule_pmf(double lambda, double t, int k) {
    double p = std::exp(-lambda * t);
    return p * std::pow(1 - p, k - 1);
}

namespace {

// population of the Yule chain (i -> i+1 at rate lambda*i) at time t
std::uint64_t simulate_yule(double lambda, double t, std::uint64_t start, Rng& rng) {
    std::uint64_t pop = start;
    double now = 0;
    while (true) {
        now += rng.exponential(lambda * static_cast<double>(pop));
        if (now > t) return pop;
        ++pop;
    }
}

// distribution of a sum of m iid geometric(p) variables via convolution
std::vector<double> geometric_convolution(double p, int m, int support) {
    std::vector<double> cur(support + 1, 0.0);
    for (int k = 1; k <= support; ++k) cur[k] = p * std::pow(1 - p, k - 1);
    std::vector<double> acc = cur;
    for (int round = 2; round <= m; ++round) {
        std::vector<double> next(support + 1, 0.0);
        for (int s = round; s <= support; ++s) {
            double v = 0;
            for (int k = 1; s - k >= round - 1 && k <= support; ++k) v += cur[k] * acc[s - k];
            next[s] = v;
        }
        acc = std::move(next);
    }
    return acc;
}

double binomial_coefficient(int n, int k) {
    double v = 1;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return v;
}

}  // namespace

PureGrowthReport pure_growth_check(double lambda, double t, int m, int k_max,
                                   std::uint64_t replicas, std::uint64_t seed) {
    PureGrowthReport rep;
    rep.lambda = lambda;
    rep.t = t;
    rep.m = m;
    rep.k_max = k_max;
    rep.replicas = replicas;

    // single ancestor vs the geometric law; final slot lumps the > k_max tail
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(k_max) + 1, 0);
    Rng rng = Rng::for_replica(seed, 0, 0x9701ULL);
    for (std::uint64_t r = 0; r < replicas; ++r) {
        std::uint64_t pop = simulate_yule(lambda, t, 1, rng);
        std::size_t bucket = pop > static_cast<std::uint64_t>(k_max)
                                 ? static_cast<std::size_t>(k_max)
                                 : static_cast<std::size_t>(pop - 1);
        ++hist[bucket];
    }
    rep.mc_pmf.resize(hist.size());
    rep.closed_pmf.resize(hist.size());
    double tail = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        rep.mc_pmf[k - 1] = static_cast<double>(hist[k - 1]) / static_cast<double>(replicas);
        rep.closed_pmf[k - 1] = yule_pmf(lambda, t, k);
        tail -= rep.closed_pmf[k - 1];
    }
    rep.mc_pmf[k_max] = static_cast<double>(hist[k_max]) / static_cast<double>(replicas);
    rep.closed_pmf[k_max] = std::max(0.0, tail);
    rep.tv = tv_distance(rep.mc_pmf, rep.closed_pmf);

    // m ancestors: population is a sum of m independent single-ancestor trees.
    // The convolution expression must match the closed product form
    // C(s-1, m-1) p^m (1-p)^(s-m); both are compared against Monte Carlo.
    if (m > 1) {
        int support = m * k_max;
        double p = std::exp(-lambda * t);
        std::vector<double> conv = geometric_convolution(p, m, support);
        rep.conv_identity_gap = 0;
        for (int s = m; s <= support; ++s) {
            double closed = binomial_coefficient(s - 1, m - 1) * std::pow(p, m) *
                            std::pow(1 - p, s - m);
            rep.conv_identity_gap = std::max(rep.conv_identity_gap, std::abs(conv[s] - closed));
        }

        std::vector<std::uint64_t> hist_m(static_cast<std::size_t>(support) + 2, 0);
        Rng rng_m = Rng::for_replica(seed, 1, 0x9702ULL);
        for (std::uint64_t r = 0; r < replicas; ++r) {
            std::uint64_t pop = simulate_yule(lambda, t, static_cast<std::uint64_t>(m), rng_m);
            std::size_t bucket = pop > static_cast<std::uint64_t>(support)
                                     ? static_cast<std::size_t>(support) + 1
                                     : static_cast<std::size_t>(pop);
            ++hist_m[bucket];
        }
        rep.mc_pmf_m.assign(hist_m.size(), 0.0);
        rep.conv_pmf_m.assign(hist_m.size(), 0.0);
        double tail_m = 1.0;
        for (int s = m; s <= support; ++s) {
            rep.mc_pmf_m[s] = static_cast<double>(hist_m[s]) / static_cast<double>(replicas);
            rep.conv_pmf_m[s] = conv[s];
            tail_m -= conv[s];
        }
        rep.mc_pmf_m.back() =
            static_cast<double>(hist_m.back()) / static_cast<double>(replicas);
        rep.conv_pmf_m.back() = std::max(0.0, tail_m);
        rep.tv_m = tv_distance(rep.mc_pmf_m, rep.conv_pmf_m);
    }
    return rep;
}

// --------------------------------------------------------------- growth tail

GrowthTailReport growth_tail_check(std::span<const std::size_t> growth_counts, std::size_t m,
                                   std::span<const int> k_grid) {
    if (growth_counts.empty()) throw InsufficientData("growth tail: no conditional runs");
    GrowthTailReport rep;
    rep.m = m;
    rep.runs = growth_counts.size();
    std::vector<double> xs, ys, ws;
    for (int k : k_grid) {
        GrowthTailRow row;
        row.k = k;
        for (std::size_t c : growth_counts)
            if (c > static_cast<std::size_t>(k) * m) ++row.exceed;
        row.p = static_cast<double>(row.exceed) / static_cast<double>(rep.runs);
        row.wilson = wilson_interval(row.exceed, rep.runs);
        if (row.exceed > 0) {
            xs.push_back(static_cast<double>(k) * static_cast<double>(m));
            ys.push_back(std::log(row.p));
            ws.push_back(static_cast<double>(row.exceed));
        }
        rep.rows.push_back(row);
    }
    if (xs.size() >= 2) {
        LinearFit fit = linear_fit(xs, ys, ws);
        rep.delta1 = std::exp(fit.slope);
        rep.r2 = fit.r2;
        rep.fit_ok = rep.delta1 > 0 && rep.delta1 < 1;
    }
    return rep;
}

// ----------------------------------------------------------------- distortion

DistortionReport distance_distortion(const Trajectory& traj, const Grammar& grammar,
                                     std::size_t pair_sample, std::uint64_t seed) {
    DistortionReport rep;

    // pairs come from R so identities persist; when nearly everything was
    // touched, fall back to vertices that survive with their initial identity
    std::vector<VertexId> candidates = traj.untouched;
    if (candidates.size() < 2) {
        rep.pairs_from_untouched = false;
        for (VertexId v : traj.initial.vertices_sorted())
            if (traj.final_graph.has_vertex(v)) candidates.push_back(v);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    }
    if (candidates.size() < 2)
        throw NoUntouchedVertex("distortion: no persistent vertex pair available");

    // common source: candidate nearest the origin, ties to smallest id
    auto dist0 = bfs_distances(traj.initial, traj.origin);
    VertexId source = candidates.front();
    int best = std::numeric_limits<int>::max();
    for (VertexId v : candidates) {
        auto it = dist0.find(v);
        int d = it == dist0.end() ? std::numeric_limits<int>::max() : it->second;
        if (d < best) {
            best = d;
            source = v;
        }
    }

    // seeded target sample
    Rng rng = Rng::for_replica(seed, 0, 0xd157ULL);
    std::vector<VertexId> pool = candidates;
    pool.erase(std::remove(pool.begin(), pool.end(), source), pool.end());
    if (pool.empty()) throw InsufficientData("distortion: no untouched pair available");
    std::vector<VertexId> targets;
    for (std::size_t i = 0; i < pair_sample && !pool.empty(); ++i) {
        std::size_t pick = rng.index(pool.size());
        targets.push_back(pool[pick]);
        pool[pick] = pool.back();
        pool.pop_back();
    }
    std::sort(targets.begin(), targets.end());
    for (VertexId t : targets) rep.pairs.emplace_back(source, t);

    auto measure = [&](const SpinGraph& g) {
        std::vector<int> out(targets.size(), -1);
        auto dist = bfs_distances(g, source);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            auto it = dist.find(targets[i]);
            if (it != dist.end()) out[i] = it->second;
        }
        return out;
    };

    SpinGraph g = traj.initial;
    std::vector<int> d0 = measure(g);
    std::vector<int> before = d0;
    for (std::size_t e = 0; e < traj.events.size(); ++e) {
        const Event& ev = traj.events[e];
        ApplyDelta delta = apply_substitution_inplace(g, grammar.rule(ev.rule), ev.image);
        if (delta.fresh != ev.fresh)
            throw std::logic_error("distortion replay produced different fresh ids");
        std::vector<int> after = measure(g);
        bool lost = false;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (after[i] < 0 || before[i] < 0) {
                if (after[i] < 0) lost = true;
                continue;
            }
            int change = after[i] - before[i];
            if (change > rep.max_increase) {
                rep.max_increase = change;
                rep.increase_witness =
                    DistortionEventWitness{e, source, targets[i], before[i], after[i]};
            }
            if (-change > rep.max_decrease) {
                rep.max_decrease = -change;
                rep.decrease_witness =
                    DistortionEventWitness{e, source, targets[i], before[i], after[i]};
            }
            if (d0[i] >= 0)
                rep.max_total_drift =
                    std::max(rep.max_total_drift, static_cast<double>(std::abs(after[i] - d0[i])));
        }
        if (lost) ++rep.unreachable_events;
        before = std::move(after);
        ++rep.events_replayed;
    }
    return rep;
}

// ----------------------------------------------------------------- correlation

void CorrelationAccumulator::add(int window_radius, const Trajectory& traj) {
    for (const auto& [name, verts] : t_sets_) {
        bool all = true;  // empty product = 1
        for (VertexId v : verts) {
            if (!std::binary_search(traj.touched.begin(), traj.touched.end(), v)) {
                all = false;
                break;
            }
        }
        auto& cell = cells_[{window_radius, name}];
        ++cell.second;
        if (all) ++cell.first;
    }
}

CorrelationTable CorrelationAccumulator::table() const {
    CorrelationTable out;
    for (const auto& [key, counts] : cells_) {
        CorrelationCell cell;
        cell.window_radius = key.first;
        cell.set_name = key.second;
        cell.hits = counts.first;
        cell.replicas = counts.second;
        cell.mean = static_cast<double>(cell.hits) / static_cast<double>(cell.replicas);
        cell.se = std::sqrt(cell.mean * (1 - cell.mean) / static_cast<double>(cell.replicas));
        out.cells.push_back(cell);
    }
    // successive-radius convergence diagnostic
    for (const auto& a : out.cells) {
        for (const auto& b : out.cells) {
            if (a.set_name == b.set_name && b.window_radius == 2 * a.window_radius) {
                CorrelationTable::Diff d;
                d.set_name = a.set_name;
                d.radius_small = a.window_radius;
                d.radius_large = b.window_radius;
                d.delta = std::abs(a.mean - b.mean);
                d.combined_se = std::sqrt(a.se * a.se + b.se * b.se);
                out.diffs.push_back(d);
            }
        }
    }
    return out;
}

// ------------------------------------------------------------- factorization

void FactorizationAccumulator::add(const Trajectory& traj) {
    ++replicas_;
    auto clusters = touched_clusters(traj);
    auto assignment = event_cluster_assignment(traj, clusters);
    std::vector<double> event_count(clusters.size(), 0);
    for (int c : assignment)
        if (c >= 0) event_count[c] += 1;

    std::vector<int> anchor_cluster(anchors_.size(), -1);
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (std::binary_search(clusters[c].begin(), clusters[c].end(), anchors_[i])) {
                anchor_cluster[i] = static_cast<int>(c);
                break;
            }
        }
    }

    std::size_t pair_index = 0;
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors_.size(); ++j, ++pair_index) {
            int ca = anchor_cluster[i], cb = anchor_cluster[j];
            if (ca < 0 || cb < 0 || ca == cb) continue;
            // condition on the partition via the two cluster sizes
            strata_[{pair_index, clusters[ca].size(), clusters[cb].size()}].push_back(
                Obs{event_count[ca], event_count[cb]});
        }
    }
    if (anchor_cluster[0] >= 0) same_cluster_counts_.push_back(event_count[anchor_cluster[0]]);
}

FactorizationReport FactorizationAccumulator::report(double z, std::size_t min_stratum) const {
    FactorizationReport rep;
    rep.replicas = replicas_;

    std::size_t pair_index = 0;
    std::size_t covering = 0, counted = 0;
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors_.size(); ++j, ++pair_index) {
            FactorizationPair pr;
            pr.anchor_a = anchors_[i];
            pr.anchor_b = anchors_[j];
            // pooled within-stratum covariance
            double cross = 0;
            std::vector<double> residual_products;
            std::size_t dof = 0;
            for (const auto& [key, obs] : strata_) {
                if (std::get<0>(key) != pair_index || obs.size() < min_stratum) continue;
                double ma = 0, mb = 0;
                for (const auto& o : obs) {
                    ma += o.a;
                    mb += o.b;
                }
                ma /= static_cast<double>(obs.size());
                mb /= static_cast<double>(obs.size());
                for (const auto& o : obs) {
                    double prod = (o.a - ma) * (o.b - mb);
                    cross += prod;
                    residual_products.push_back(prod);
                }
                dof += obs.size() - 1;
                pr.observations += obs.size();
            }
            if (dof >= 1) {
                pr.covariance = cross / static_cast<double>(dof);
                double var = 0;
                for (double p : residual_products)
                    var += (p - pr.covariance) * (p - pr.covariance);
                pr.se = std::sqrt(var) / static_cast<double>(dof);
                pr.ci = {pr.covariance - z * pr.se, pr.covariance + z * pr.se};
                pr.covers_zero = pr.ci.lo <= 0 && 0 <= pr.ci.hi;
                if (pr.observations >= 30) {
                    ++counted;
                    if (pr.covers_zero) ++covering;
                }
            }
            rep.pairs.push_back(pr);
        }
    }
    rep.fraction_covering =
        counted == 0 ? 1.0 : static_cast<double>(covering) / static_cast<double>(counted);
    MeanSe sanity = mean_se(same_cluster_counts_);
    if (same_cluster_counts_.size() >= 2) {
        double var = 0;
        for (double v : same_cluster_counts_) var += (v - sanity.mean) * (v - sanity.mean);
        rep.same_cluster_variance = var / static_cast<double>(same_cluster_counts_.size() - 1);
    }
    return rep;
}

}  // namespace rgg
