#pragma once

#include <map>
#include <optional>

#include "rgg/simulator.hpp"
#include "rgg/stats.hpp"

namespace rgg {

// ------------------------------------------------------------ macrodimension

struct FitWindow {
    int n_min = -1;
    int n_max = -1;  // -1,-1: default [N/4, N]
};

struct MacrodimensionEstimate {
    BallProfile profile;
    std::vector<double> dim_sequence;  // D_n = ln|O_n| / ln n, indexed by n (0,1 = NaN)
    FitWindow window;
    double slope = 0;        // least-squares slope of ln|O_n| vs ln n over the window
    double intercept = 0;
    double r2 = 0;
    double limsup_proxy = 0;  // max D_n over the window
    double liminf_proxy = 0;  // min D_n over the window
    // D_n differs from the local slope by ~intercept/ln n; the proxies bracket
    // the slope only up to this declared allowance
    double proxy_tolerance = 0;
};

// Ball census from x plus the log-log fit. Throws WindowTooSmall when the
// graph is exhausted before n_max (the profile would flatten artificially).
MacrodimensionEstimate dim_profile(const SpinGraph& g, VertexId x, int n_max,
                                   FitWindow window = {});

// Same fit applied to an externally produced profile (generator closed forms,
// shell-limited scans).
MacrodimensionEstimate dim_profile_from_sizes(BallProfile profile, FitWindow window = {});

struct SandwichViolation {
    VertexId x, y;
    int n;
    std::uint64_t lower, mid, upper;  // |O_{n-a}(y)|, |O_n(x)|, |O_{n+a}(y)|
};

// Checks |O_{n-a}(y)| <= |O_n(x)| <= |O_{n+a}(y)| for all a < n <= n_max - a.
// Any violation is an implementation bug: the inequality is a theorem.
std::optional<SandwichViolation> basepoint_invariance_check(const SpinGraph& g, VertexId x,
                                                            VertexId y, int n_max);

// ------------------------------------------------------------- cluster tails

struct TailBucket {
    std::size_t m = 0;
    std::uint64_t count = 0;
    double p = 0;
    Interval wilson;
};

struct ClusterTailFit {
    std::vector<TailBucket> pmf;     // cluster-size distribution of the anchor
    std::uint64_t replicas = 0;
    std::uint64_t anchor_untouched = 0;  // size-0 bucket, excluded from the tail fit
    double C = 0;                     // fitted p(m) ~ C * delta^m over m >= 2
    double delta = 0;
    double r2 = 0;
    bool fit_ok = false;
};

// Size of the anchor's touched cluster in G(0); 0 when the anchor is untouched.
std::size_t anchor_cluster_size(const Trajectory& traj, VertexId anchor);

class ClusterTailAccumulator {
public:
    explicit ClusterTailAccumulator(VertexId anchor) : anchor_(anchor) {}
    void add(const Trajectory& traj);
    void add_size(std::size_t anchor_cluster_size);
    // min_bucket_count: buckets with fewer events are dropped from the fit.
    ClusterTailFit fit(std::uint64_t min_bucket_count = 5) const;
    VertexId anchor() const { return anchor_; }

private:
    VertexId anchor_;
    std::uint64_t replicas_ = 0;
    std::map<std::size_t, std::uint64_t> size_counts_;  // 0 = untouched
};

ClusterTailFit cluster_tail_fit(std::span<const Trajectory> replicas, VertexId anchor,
                                std::uint64_t min_bucket_count = 5);

// --------------------------------------------------------------- pure growth

struct PureGrowthReport {
    double lambda = 0, t = 0;
    int k_max = 0;
    std::uint64_t replicas = 0;
    // single ancestor: population size distribution vs the geometric law
    std::vector<double> mc_pmf, closed_pmf;  // index k-1 = P(pop == k), tail lumped at k_max+1
    double tv = 0;
    // m ancestors: Monte Carlo vs the convolution of m geometric laws
    int m = 1;
    std::vector<double> mc_pmf_m, conv_pmf_m;
    double tv_m = 0;
    double conv_identity_gap = 0;  // max |convolution - closed product form|
};

// Yule chain on Z+ (i -> i+1 at rate lambda*i). Checks the closed form for a
// single ancestor and the product/convolution identity for m ancestors.
PureGrowthReport pure_growth_check(double lambda, double t, int m, int k_max,
                                   std::uint64_t replicas, std::uint64_t seed);

// P(pop(t) = k) for the Yule chain from one ancestor: geometric law.
double yule_pmf(double lambda, double t, int k);

// --------------------------------------------------------------- growth tail

struct GrowthTailRow {
    int k = 0;
    std::uint64_t exceed = 0;  // # runs with growth_count > k*m
    double p = 0;
    Interval wilson;
};

struct GrowthTailReport {
    std::size_t m = 0;
    std::uint64_t runs = 0;
    std::vector<GrowthTailRow> rows;
    double delta1 = 0;  // decay per unit of k*m from the log-linear fit
    double r2 = 0;
    bool fit_ok = false;
};

GrowthTailReport growth_tail_check(std::span<const std::size_t> growth_counts, std::size_t m,
                                   std::span<const int> k_grid);

// ----------------------------------------------------------------- distortion

struct DistortionEventWitness {
    std::size_t event_index = 0;
    VertexId x = 0, y = 0;
    int before = 0, after = 0;
};

struct DistortionReport {
    std::vector<std::pair<VertexId, VertexId>> pairs;  // common source, sampled targets
    bool pairs_from_untouched = true;  // false: R too small, fell back to survivors
    double max_increase = 0;   // per-event extremes over all pairs
    double max_decrease = 0;
    std::optional<DistortionEventWitness> increase_witness;
    std::optional<DistortionEventWitness> decrease_witness;
    double max_total_drift = 0;  // max_t |d_t(x,y) - d_0(x,y)|
    std::size_t unreachable_events = 0;  // connectivity-respect violations
    std::size_t events_replayed = 0;
};

// Replays the trajectory and tracks pairwise distances between untouched
// vertices: one BFS per event from a common untouched source near the origin.
DistortionReport distance_distortion(const Trajectory& traj, const Grammar& grammar,
                                     std::size_t pair_sample, std::uint64_t seed);

// ----------------------------------------------------------------- correlation

struct CorrelationCell {
    int window_radius = 0;
    std::string set_name;
    std::uint64_t hits = 0;
    std::uint64_t replicas = 0;
    double mean = 0;
    double se = 0;
};

struct CorrelationTable {
    std::vector<CorrelationCell> cells;  // one per (N, T)
    struct Diff {
        std::string set_name;
        int radius_small = 0, radius_large = 0;
        double delta = 0;          // |<eta^N> - <eta^{2N}>|
        double combined_se = 0;
    };
    std::vector<Diff> diffs;
};

class CorrelationAccumulator {
public:
    // T sets are given as vertex lists of the *initial* window id space.
    CorrelationAccumulator(std::vector<std::pair<std::string, std::vector<VertexId>>> t_sets)
        : t_sets_(std::move(t_sets)) {}
    void add(int window_radius, const Trajectory& traj);
    CorrelationTable table() const;

private:
    std::vector<std::pair<std::string, std::vector<VertexId>>> t_sets_;
    std::map<std::pair<int, std::string>, std::pair<std::uint64_t, std::uint64_t>> cells_;
};

// ----------------------------------------------------------- factorization

struct FactorizationPair {
    VertexId anchor_a = 0, anchor_b = 0;
    std::size_t observations = 0;  // replicas where both anchors sit in distinct clusters
    double covariance = 0;
    double se = 0;
    Interval ci;
    bool covers_zero = true;
};

struct FactorizationReport {
    std::vector<FactorizationPair> pairs;
    double fraction_covering = 1.0;
    double same_cluster_variance = 0;  // sanity arm: a statistic against itself varies
    std::size_t replicas = 0;
};

// Cross-cluster independence signature: conditional on the cluster partition
// (stratified by the two cluster sizes), per-cluster event counts should be
// uncorrelated across distinct clusters.
class FactorizationAccumulator {
public:
    explicit FactorizationAccumulator(std::vector<VertexId> anchors)
        : anchors_(std::move(anchors)) {}
    void add(const Trajectory& traj);
    // 99% normal CIs; strata thinner than min_stratum carry too little
    // information for a stable within-stratum covariance and are skipped
    FactorizationReport report(double z = 2.5758, std::size_t min_stratum = 8) const;

private:
    struct Obs {
        double a = 0, b = 0;
    };
    std::vector<VertexId> anchors_;
    // key: (pair index, size_a, size_b) -> observations
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<Obs>> strata_;
    std::vector<double> same_cluster_counts_;
    std::size_t replicas_ = 0;
};

}  // namespace rgg
