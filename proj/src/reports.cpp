#include "rgg/reports.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace rgg {

namespace {

std::string format_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

std::string join_ids(std::span<const VertexId> ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(ids[i]);
    }
    return out;
}

}  // namespace

Json to_json(const MacrodimensionEstimate& est) {
    Json rows = Json::array();
    for (int n = 1; n <= est.profile.max_radius(); ++n) {
        Json row;
        row["n"] = n;
        row["ball_size"] = est.profile.size_at(n);
        if (n >= 2) row["dim"] = est.dim_sequence[n];
        rows.push_back(row);
    }
    return Json{{"center", est.profile.center},
                {"profile", rows},
                {"fit_window", {est.window.n_min, est.window.n_max}},
                {"slope", est.slope},
                {"intercept", est.intercept},
                {"r2", est.r2},
                {"limsup_proxy", est.limsup_proxy},
                {"liminf_proxy", est.liminf_proxy}};
}

Json to_json(const ClusterTailFit& fit) {
    Json rows = Json::array();
    for (const auto& b : fit.pmf) {
        rows.push_back(Json{{"m", b.m},
                            {"count", b.count},
                            {"p", b.p},
                            {"wilson_lo", b.wilson.lo},
                            {"wilson_hi", b.wilson.hi}});
    }
    return Json{{"replicas", fit.replicas},
                {"anchor_untouched", fit.anchor_untouched},
                {"pmf", rows},
                {"C", fit.C},
                {"delta", fit.delta},
                {"r2", fit.r2},
                {"fit_ok", fit.fit_ok}};
}

Json to_json(const PureGrowthReport& rep) {
    return Json{{"lambda", rep.lambda},
                {"t", rep.t},
                {"k_max", rep.k_max},
                {"replicas", rep.replicas},
                {"mc_pmf", rep.mc_pmf},
                {"closed_pmf", rep.closed_pmf},
                {"tv", rep.tv},
                {"m", rep.m},
                {"tv_m", rep.tv_m},
                {"conv_identity_gap", rep.conv_identity_gap}};
}

Json to_json(const GrowthTailReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows)
        rows.push_back(Json{{"k", r.k},
                            {"exceed", r.exceed},
                            {"p", r.p},
                            {"wilson_lo", r.wilson.lo},
                            {"wilson_hi", r.wilson.hi}});
    return Json{{"m", rep.m},    {"runs", rep.runs}, {"rows", rows},
                {"delta1", rep.delta1}, {"r2", rep.r2},     {"fit_ok", rep.fit_ok}};
}

namespace {

Json witness_json(const std::optional<DistortionEventWitness>& w) {
    if (!w) return nullptr;
    return Json{{"event", w->event_index},
                {"x", w->x},
                {"y", w->y},
                {"before", w->before},
                {"after", w->after}};
}

}  // namespace

Json to_json(const DistortionReport& rep) {
    Json pairs = Json::array();
    for (auto [a, b] : rep.pairs) pairs.push_back(Json{a, b});
    return Json{{"pairs", pairs},
                {"pairs_from_untouched", rep.pairs_from_untouched},
                {"max_increase", rep.max_increase},
                {"max_decrease", rep.max_decrease},
                {"increase_witness", witness_json(rep.increase_witness)},
                {"decrease_witness", witness_json(rep.decrease_witness)},
                {"max_total_drift", rep.max_total_drift},
                {"unreachable_events", rep.unreachable_events},
                {"events_replayed", rep.events_replayed}};
}

Json to_json(const CorrelationTable& table) {
    Json cells = Json::array();
    for (const auto& c : table.cells)
        cells.push_back(Json{{"radius", c.window_radius},
                             {"set", c.set_name},
                             {"hits", c.hits},
                             {"replicas", c.replicas},
                             {"mean", c.mean},
                             {"se", c.se}});
    Json diffs = Json::array();
    for (const auto& d : table.diffs)
        diffs.push_back(Json{{"set", d.set_name},
                             {"radius_small", d.radius_small},
                             {"radius_large", d.radius_large},
                             {"delta", d.delta},
                             {"combined_se", d.combined_se}});
    return Json{{"cells", cells}, {"diffs", diffs}};
}

Json to_json(const FactorizationReport& rep) {
    Json pairs = Json::array();
    for (const auto& p : rep.pairs)
        pairs.push_back(Json{{"anchor_a", p.anchor_a},
                             {"anchor_b", p.anchor_b},
                             {"observations", p.observations},
                             {"covariance", p.covariance},
                             {"se", p.se},
                             {"ci_lo", p.ci.lo},
                             {"ci_hi", p.ci.hi},
                             {"covers_zero", p.covers_zero}});
    return Json{{"pairs", pairs},
                {"fraction_covering", rep.fraction_covering},
                {"same_cluster_variance", rep.same_cluster_variance},
                {"replicas", rep.replicas}};
}

Json to_json(const ReversibilityReport& rep) {
    Json violations = Json::array();
    for (const auto& v : rep.violations)
        violations.push_back(Json{{"cycle", v.cycle}, {"product", v.product}});
    Json j{{"verdict",
            rep.verdict == ReversibilityReport::Verdict::Reversible ? "reversible"
                                                                    : "not_reversible"},
           {"n0", rep.n0},
           {"cycles_checked", rep.cycles_checked},
           {"violations", violations},
           {"short_cycles_generate", rep.short_cycles_generate},
           {"cycle_space_dim", rep.cycle_space_dim},
           {"num_states", rep.num_states},
           {"num_transitions", rep.num_transitions}};
    if (rep.asymmetric_witness)
        j["asymmetric_witness"] = Json{rep.asymmetric_witness->first,
                                       rep.asymmetric_witness->second};
    return j;
}

Json to_json(const InvarianceReport& rep) {
    Json replicas = Json::array();
    for (const auto& r : rep.replicas)
        replicas.push_back(Json{{"seed", r.seed},
                                {"slope_initial", r.slope_initial},
                                {"slope_final", r.slope_final},
                                {"slope_diff", r.slope_diff},
                                {"v_omega", r.v_omega},
                                {"r_omega", r.r_omega},
                                {"c_min", r.c_min},
                                {"c_found", r.c_found},
                                {"usable_radius", r.usable_radius},
                                {"events", r.events},
                                {"touched", r.touched}});
    return Json{{"generator", rep.config.generator},
                {"epsilon", rep.config.epsilon},
                {"n_grid", rep.config.n_grid},
                {"window_radius", rep.window_radius},
                {"replicas", replicas},
                {"median_slope_diff", rep.median_slope_diff},
                {"c_empirical", rep.c_empirical},
                {"all_c_found", rep.all_c_found}};
}

Json trajectory_summary(const Trajectory& traj) {
    Json clusters = Json::array();
    std::vector<std::size_t> cluster_sizes;
    for (const auto& c : touched_clusters(traj)) {
        cluster_sizes.push_back(c.size());
        clusters.push_back(c);
    }
    // R is the complement of Q in the initial window; only Q is spelled out
    return Json{{"seed", traj.seed},
                {"horizon", traj.horizon},
                {"window_radius", traj.window_radius},
                {"margin", traj.margin},
                {"events", traj.events.size()},
                {"event_cap_hit", traj.event_cap_hit},
                {"initial_vertices", traj.initial.vertex_count()},
                {"final_vertices", traj.final_graph.vertex_count()},
                {"touched", traj.touched.size()},
                {"untouched", traj.untouched.size()},
                {"touched_ids", traj.touched},
                {"cluster_sizes", cluster_sizes},
                {"clusters", clusters}};
}

std::string dimension_csv(const MacrodimensionEstimate& est) {
    std::ostringstream out;
    out << "n,ball_size,dim\n";
    for (int n = 1; n <= est.profile.max_radius(); ++n) {
        out << n << "," << est.profile.size_at(n) << ",";
        if (n >= 2) out << est.dim_sequence[n];
        out << "\n";
    }
    return out.str();
}

std::string cluster_csv(const ClusterTailFit& fit) {
    std::ostringstream out;
    out << "m,count,p,wilson_lo,wilson_hi\n";
    for (const auto& b : fit.pmf)
        out << b.m << "," << b.count << "," << b.p << "," << b.wilson.lo << "," << b.wilson.hi
            << "\n";
    return out.str();
}

std::string correlation_csv(const CorrelationTable& table) {
    std::ostringstream out;
    out << "radius,set,mean,se,replicas\n";
    for (const auto& c : table.cells)
        out << c.window_radius << "," << c.set_name << "," << c.mean << "," << c.se << ","
            << c.replicas << "\n";
    return out.str();
}

std::string event_log(const Trajectory& traj, const Grammar& grammar) {
    std::string out;
    for (const Event& ev : traj.events) {
        out += "t=" + format_time(ev.time);
        out += " rule=" + grammar.rule(ev.rule).name;
        out += " image=" + join_ids(ev.image);
        out += " fresh=" + join_ids(ev.fresh);
        out += "\n";
    }
    return out;
}

}  // namespace rgg
