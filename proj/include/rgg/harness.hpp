#pragma once

#include <filesystem>
#include <functional>

#include "rgg/reports.hpp"

namespace rgg {

// Experiment harness shared by the CLI subcommands: replica orchestration,
// deterministic seeding, artifact emission. Every command is a pure function
// of its options; reruns produce byte-identical artifacts.
struct HarnessOptions {
    std::string grammar_path;
    std::string generator;                 // family spec, radius included unless noted
    std::vector<std::string> generators;   // dimension command batches several
    std::vector<double> epsilons{0.1};
    std::vector<int> radii{32};
    int replicas = 100;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string format = "text";           // stdout: text summary, or json|csv artifact dump
    bool strict_connectivity = false;
    int threads = 1;

    // analysis knobs
    std::size_t pair_sample = 12;
    std::uint64_t event_cap = 1'000'000;
    std::size_t cluster_set_size = 1;      // |B| for the conditional process
    int state_cap = 6;                     // reversibility state-space vertex cap
    int n0 = 4;
    int state_seed_radius = 1;
    double ambient_factor = 1.5;
    double distortion_threshold = 2.0;     // configured C(n) for the verdict
    std::uint64_t conditional_attempts = 20000;
};

Grammar load_grammar_file(const std::string& path);

// replica loop; merges are the caller's job and happen in replica order
void for_each_replica(int replicas, int threads, const std::function<void(int)>& body);

// exit codes: 0 ok, 2 validation failure, 3 runtime simulation error
int cmd_simulate(const HarnessOptions& opt);
int cmd_dimension(const HarnessOptions& opt);
int cmd_clusters(const HarnessOptions& opt);
int cmd_distortion(const HarnessOptions& opt);
int cmd_verify(const HarnessOptions& opt);
int cmd_reversibility(const HarnessOptions& opt);
int cmd_experiment(const HarnessOptions& opt);

}  // namespace rgg
