#include <CLI11.hpp>

#include "rgg/harness.hpp"

// rgg: stochastic spin-graph rewriting and scaling-dimension analysis.
//
// Subcommands: simulate, dimension, clusters, distortion, verify,
// reversibility, experiment. All randomness flows from --seed; reruns with the
// same configuration produce byte-identical artifacts.
int main(int argc, char** argv) {
    CLI::App app{"spin-graph grammar dynamics and macrodimension analysis"};
    app.set_config("--config");
    app.require_subcommand(1);

    rgg::HarnessOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_grammar) {
        if (needs_grammar)
            cmd->add_option("--grammar", opt.grammar_path, "rule file")->required();
        cmd->add_option("--generator", opt.generator, "window spec, e.g. lattice:z2:radius=64");
        cmd->add_option("--epsilon", opt.epsilons, "time horizon(s)");
        cmd->add_option("--radius", opt.radii, "window radius / N grid");
        cmd->add_option("--replicas", opt.replicas, "replica count");
        cmd->add_option("--seed", opt.seed, "base seed");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--format", opt.format, "json|csv stdout summary");
        cmd->add_option("--threads", opt.threads, "worker threads");
        cmd->add_option("--event-cap", opt.event_cap, "max events per replica");
        cmd->add_flag("--strict-connectivity", opt.strict_connectivity,
                      "abort when a substitution disconnects the graph");
    };

    auto* simulate = app.add_subcommand("simulate", "run window dynamics, dump trajectories");
    add_common(simulate, true);
    simulate->get_option("--generator")->required();

    auto* dimension = app.add_subcommand("dimension", "ball-growth dimension profiles");
    add_common(dimension, false);
    dimension->add_option("--grammar-optional", opt.grammar_path, "alphabet source");
    dimension
        ->add_option("--generators", opt.generators,
                     "batch of window specs (falls back to --generator)")
        ->delimiter(',');

    auto* clusters = app.add_subcommand("clusters", "touched-cluster tail estimates");
    add_common(clusters, true);
    clusters->get_option("--generator")->required();

    auto* distortion = app.add_subcommand("distortion", "pairwise distance distortion replay");
    add_common(distortion, true);
    distortion->get_option("--generator")->required();
    distortion->add_option("--pairs", opt.pair_sample, "sampled untouched pairs");
    distortion->add_option("--threshold", opt.distortion_threshold,
                           "per-event |delta d| verdict threshold");

    auto* verify = app.add_subcommand("verify", "static grammar checks");
    add_common(verify, true);
    verify->add_option("--state-cap", opt.state_cap, "reversibility state-space vertex cap");
    verify->add_option("--n0", opt.n0, "cycle length bound");
    verify->add_option("--state-seed-radius", opt.state_seed_radius,
                       "ball radius of the enumeration seed graph");

    auto* reversibility = app.add_subcommand("reversibility", "Kolmogorov cycle check");
    add_common(reversibility, true);
    reversibility->get_option("--generator")->required();
    reversibility->add_option("--state-cap", opt.state_cap, "state-space vertex cap");
    reversibility->add_option("--n0", opt.n0, "cycle length bound");
    reversibility->add_option("--state-seed-radius", opt.state_seed_radius,
                              "ball radius of the enumeration seed graph");

    auto* experiment = app.add_subcommand("experiment", "dimension-invariance bundle");
    add_common(experiment, true);
    experiment->get_option("--generator")->required();
    experiment->add_option("--ambient-factor", opt.ambient_factor,
                           "ambient window radius / max N");
    experiment->add_option("--cluster-set", opt.cluster_set_size,
                           "|B| for the conditional growth report");
    experiment->add_option("--pairs", opt.pair_sample, "distortion pair sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // 1 = usage error; 0 covers --help and --version
    }

    if (simulate->parsed()) return rgg::cmd_simulate(opt);
    if (dimension->parsed()) return rgg::cmd_dimension(opt);
    if (clusters->parsed()) return rgg::cmd_clusters(opt);
    if (distortion->parsed()) return rgg::cmd_distortion(opt);
    if (verify->parsed()) return rgg::cmd_verify(opt);
    if (reversibility->parsed()) return rgg::cmd_reversibility(opt);
    if (experiment->parsed()) return rgg::cmd_experiment(opt);
    return 1;
}
