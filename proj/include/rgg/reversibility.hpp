#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rgg/grammar.hpp"

namespace rgg {

// Transition-rate digraph of a continuous-time Markov chain. States are
// 0..num_states-1; labels are optional descriptions (canonical graph forms for
// grammar-derived chains).
struct RateGraph {
    std::size_t num_states = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> rates;  // i != j
    std::vector<std::string> labels;

    void add_rate(std::uint32_t i, std::uint32_t j, double lambda);
    double rate(std::uint32_t i, std::uint32_t j) const;
};

struct CycleRecord {
    std::vector<std::uint32_t> cycle;  // states, closing edge implied
    double product = 1.0;              // a(Gamma) = prod lambda_ij / lambda_ji
    bool ok = true;
};

struct ReversibilityReport {
    enum class Verdict { Reversible, NotReversible };
    Verdict verdict = Verdict::Reversible;
    // present when some lambda_ij > 0 has lambda_ji == 0
    std::optional<std::pair<std::uint32_t, std::uint32_t>> asymmetric_witness;
    std::vector<CycleRecord> violations;   // cycles with a(Gamma) != 1
    std::size_t cycles_checked = 0;
    int n0 = 0;
    // do the checked cycles span the cycle space of the support graph? when
    // true, a(Gamma)=1 on them settles every cycle (the local-reversibility
    // sufficiency signature at this cap)
    bool short_cycles_generate = false;
    std::size_t cycle_space_dim = 0;
    std::size_t num_states = 0;
    std::size_t num_transitions = 0;
};

// Kolmogorov cycle test over all simple cycles of length <= n0.
ReversibilityReport check_reversibility(const RateGraph& chain, int n0,
                                        double tolerance = 1e-9);

// Canonical text form of a small spin graph, equal iff isomorphic (respecting
// spins). Brute-force refinement + permutation search: small graphs only.
std::string canonical_form(const SpinGraph& g);

// Grammar-reachable state space from `start`, up to isomorphism. Transitions
// leading past max_vertices are excluded; more than max_states reachable
// states throws StateSpaceExplosion.
RateGraph enumerate_state_space(const Grammar& grammar, const SpinGraph& start,
                                std::size_t max_vertices, std::size_t max_states = 4096);

}  // namespace rgg
