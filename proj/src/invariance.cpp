#include "rgg/invariance.hpp"

#include <algorithm>
#include <cmath>

namespace rgg {

namespace {

// smallest C >= 1 on the grid with |O_{floor(N/C)}(eps)| < |O_N(0)| < |O_{ceil(NC)}(eps)|
// for every N in the upper half of the grid; n/a when shell contact cuts the
// evaluable range first
std::pair<double, bool> sandwich_search(const BallProfile& initial,
                                        const BallProfile& final_profile, int usable_radius,
                                        std::span<const int> upper_grid, double c_step,
                                        double c_max) {
    for (double c = 1.0; c <= c_max + 1e-9; c += c_step) {
        bool ok = true;
        for (int n : upper_grid) {
            int lo = static_cast<int>(std::floor(static_cast<double>(n) / c));
            int hi = static_cast<int>(std::ceil(static_cast<double>(n) * c));
            if (hi > usable_radius) return {c, false};  // cannot evaluate further
            std::uint64_t inner = final_profile.size_at(lo);
            std::uint64_t mid = initial.size_at(n);
            std::uint64_t outer = final_profile.size_at(hi);
            if (!(inner < mid && mid < outer)) {
                ok = false;
                break;
            }
        }
        if (ok) return {c, true};
    }
    return {c_max, false};
}

}  // namespace

InvarianceReport invariance_experiment(const Grammar& grammar, const InvarianceConfig& cfg) {
    if (cfg.n_grid.empty()) throw ConfigError("invariance experiment needs an N grid");
    std::vector<int> grid = cfg.n_grid;
    std::sort(grid.begin(), grid.end());
    const int max_n = grid.back();
    const int margin = std::max(1, grammar.max_lhs_radius());
    const int ambient_radius =
        static_cast<int>(std::ceil(max_n * cfg.ambient_factor)) + margin + 1;

    InvarianceReport report;
    report.config = cfg;
    report.window_radius = ambient_radius;

    GeneratedWindow window =
        generate_window(cfg.generator + ":radius=" + std::to_string(ambient_radius),
                        grammar.alphabet());

    const FitWindow fit{std::max(2, max_n / 4), max_n};
    MacrodimensionEstimate initial_est = dim_profile(window.graph, window.origin, max_n, fit);
    // full initial profile out to the ambient radius for the sandwich middle term
    BallProfile initial_full =
        scan_ball_profile(window.graph, window.origin, ambient_radius).profile;

    std::vector<int> upper_grid(grid.begin() + grid.size() / 2, grid.end());

    std::vector<double> diffs;
    report.all_c_found = true;
    report.c_empirical = 1.0;

    for (int r = 0; r < cfg.replicas; ++r) {
        SimConfig sim;
        sim.horizon = cfg.epsilon;
        sim.seed = Rng::for_replica(cfg.seed, static_cast<std::uint64_t>(r), 0x17eULL).next_u64();
        sim.event_cap = cfg.event_cap;
        Trajectory traj = run_window(window, grammar, sim);

        ReplicaInvariance rep;
        rep.seed = sim.seed;
        rep.events = traj.events.size();
        rep.touched = traj.touched.size();

        // v(omega): untouched vertex at minimal initial distance from the
        // origin, ties to the smallest id (untouched is id-sorted already)
        if (traj.untouched.empty())
            throw NoUntouchedVertex("invariance replica " + std::to_string(r) +
                                    ": every window vertex touched; lower epsilon");
        VertexId v_omega = traj.untouched.front();
        int best_level = window.level_of[v_omega];
        for (VertexId v : traj.untouched) {
            if (window.level_of[v] < best_level) {
                best_level = window.level_of[v];
                v_omega = v;
            }
        }
        rep.v_omega = v_omega;
        rep.r_omega = best_level;

        ProfileScan scan = scan_ball_profile(traj.final_graph, v_omega, ambient_radius,
                                             &traj.forbidden_shell);
        rep.usable_radius = scan.shell_contact_level < 0 ? scan.profile.max_radius()
                                                         : scan.shell_contact_level - 1;
        if (rep.usable_radius < max_n)
            throw WindowTooSmall("final-graph profile shell-limited to radius " +
                                 std::to_string(rep.usable_radius) + "; raise ambient factor");

        MacrodimensionEstimate final_est = dim_profile_from_sizes(scan.profile, fit);
        rep.slope_initial = initial_est.slope;
        rep.slope_final = final_est.slope;
        rep.slope_diff = std::abs(final_est.slope - initial_est.slope);
        diffs.push_back(rep.slope_diff);

        auto [c, found] = sandwich_search(initial_full, scan.profile, rep.usable_radius,
                                          upper_grid, cfg.c_step, cfg.ambient_factor);
        rep.c_min = c;
        rep.c_found = found;
        if (!found) report.all_c_found = false;
        report.c_empirical = std::max(report.c_empirical, c);

        report.replicas.push_back(rep);
    }
    report.median_slope_diff = median(std::move(diffs));
    return report;
}

}  // namespace rgg
