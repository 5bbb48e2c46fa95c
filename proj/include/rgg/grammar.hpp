#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgg/graph.hpp"

namespace rgg {

// A rule-side graph (lhs Gamma or rhs Gamma') normalized to index space:
// vertices are 0..size()-1 in ascending order of their file-local ids.
struct RuleGraph {
    std::vector<Spin> spins;
    std::vector<std::pair<int, int>> edges;     // i < j, sorted
    std::vector<int> local_ids;                 // original ids, ascending
    std::vector<std::vector<int>> adj;          // sorted adjacency by index

    int size() const { return static_cast<int>(spins.size()); }
    int degree(int idx) const { return static_cast<int>(adj.at(idx).size()); }
    bool has_edge(int i, int j) const;
    bool connected() const;                     // empty graph counts as connected
    int radius() const;                         // min eccentricity; 0 for <=1 vertex
    int diameter() const;
    int index_of_local(int local_id) const;     // -1 if absent

    void finalize();                            // build adj, sort edges
};

// (Gamma, Gamma', V0, phi, lambda). `anchor_lhs[i]` (an lhs index) maps to
// `glue_rhs[i]` (an rhs index) under phi.
struct SubstitutionRule {
    std::string name;
    RuleGraph lhs;
    RuleGraph rhs;
    std::vector<int> anchor_lhs;
    std::vector<int> glue_rhs;
    double rate = 1.0;

    std::vector<int> rhs_fresh;   // rhs indices outside the glue image, ascending
    std::vector<bool> lhs_is_anchor;
    std::vector<int> glue_of_lhs; // lhs index -> rhs index, -1 when deleted

    void finalize();
    bool is_anchor(int lhs_idx) const { return lhs_is_anchor.at(lhs_idx); }
};

class Grammar {
public:
    Grammar() = default;
    Grammar(Alphabet alphabet, int degree_cap, std::vector<SubstitutionRule> rules);

    const Alphabet& alphabet() const { return alphabet_; }
    int degree_cap() const { return degree_cap_; }
    std::span<const SubstitutionRule> rules() const { return rules_; }
    const SubstitutionRule& rule(std::size_t i) const { return rules_.at(i); }
    std::size_t rule_count() const { return rules_.size(); }

    int max_lhs_radius() const { return max_lhs_radius_; }
    bool all_radii_le_1() const { return all_radii_le_1_; }

private:
    Alphabet alphabet_;
    int degree_cap_ = 16;
    std::vector<SubstitutionRule> rules_;
    int max_lhs_radius_ = 0;
    bool all_radii_le_1_ = true;
};

// Rule-file format:
//   alphabet a b ...
//   degreecap <n>
//   rule <name> rate <lambda>
//     lhs
//       v <id> <spin>
//       e <id1> <id2>
//     rhs
//       ...
//     anchor <id> ...
//     glue <lhs-id> -> <rhs-id>
//   end
Grammar parse_grammar(std::string_view text);

struct LocalityReport {
    bool pass = true;
    std::vector<std::size_t> offending_rules;   // disconnected lhs
};
LocalityReport validate_local(const Grammar& g);

enum class BoundednessVerdict { Pass, Warning, Fail };

struct BoundednessReport {
    struct RuleFinding {
        std::size_t rule;
        BoundednessVerdict verdict;
        std::string detail;
    };
    BoundednessVerdict verdict = BoundednessVerdict::Pass;
    std::vector<RuleFinding> findings;          // entries only for warning/fail rules
};
// Static worst-case post-degree analysis of every glue and fresh vertex.
// Warning means some legal context can overflow the cap and the simulator's
// runtime guard takes over.
BoundednessReport validate_locally_bounded(const Grammar& g);

struct ApplyDelta {
    std::vector<VertexId> image;    // psi of lhs index 0..k-1, in index order
    std::vector<VertexId> fresh;    // new ids for rhs_fresh, in rhs index order
    std::vector<VertexId> removed;  // psi(V \ V0), in lhs index order
    std::size_t deduped_edges = 0;  // rhs edges merged with surviving alpha edges
    std::vector<VertexId> touched() const {
        std::vector<VertexId> t = image;
        t.insert(t.end(), fresh.begin(), fresh.end());
        return t;
    }
};

// True when applying the rule at psi keeps every post-state degree within the
// graph's cap. Exact, not the static worst case.
bool cap_safe(const SpinGraph& alpha, const SubstitutionRule& rule,
              std::span<const VertexId> psi);

// The Definition-1 rewrite. psi[i] is the image of lhs index i; it must be a
// valid embedding (injective, edge- and spin-preserving). Fresh ids are drawn
// from alpha.next_vertex_id() in ascending rhs-index order; glue vertices keep
// their alpha-side id and take the rhs spin. Only psi-images of lhs edges are
// deleted in the edge-deletion step; alpha edges between matched vertices that
// are not lhs-edge images survive when both endpoints survive.
ApplyDelta apply_substitution_inplace(SpinGraph& alpha, const SubstitutionRule& rule,
                                      std::span<const VertexId> psi,
                                      bool strict_connectivity = false);

struct ApplyResult {
    SpinGraph graph;
    ApplyDelta delta;
};
ApplyResult apply_substitution(const SpinGraph& alpha, const SubstitutionRule& rule,
                               std::span<const VertexId> psi,
                               bool strict_connectivity = false);

// Syntactic inverse: lhs and rhs swapped, phi restricted-inverted. Used by the
// round-trip property tests.
SubstitutionRule inverse_rule(const SubstitutionRule& rule);

}  // namespace rgg
