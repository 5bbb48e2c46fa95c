#pragma once

#include <functional>
#include <span>

#include "rgg/grammar.hpp"
#include "rgg/rng.hpp"

namespace rgg {

// A spin-respecting injective map psi of a rule's lhs into alpha.
// map[i] is the image of lhs index i.
struct Embedding {
    std::uint32_t rule_index = 0;
    std::vector<VertexId> map;

    bool operator==(const Embedding&) const = default;
    bool operator<(const Embedding& o) const {
        if (rule_index != o.rule_index) return rule_index < o.rule_index;
        return map < o.map;
    }
};

// Complete duplicate-free enumeration, sorted by image tuple. Backtracking
// search anchored at the pattern vertex whose spin is rarest in alpha.
std::vector<Embedding> enumerate_embeddings(const SpinGraph& alpha, const Grammar& grammar,
                                            std::uint32_t rule_index);

// True when an embedding participates in the dynamics. The simulator uses this
// to exclude images touching the window's frozen shell and applications that
// would break the degree cap.
using EligibilityFn = std::function<bool(const SpinGraph&, std::uint32_t rule_index,
                                         std::span<const VertexId> map)>;

// All currently eligible embeddings of every rule, maintained incrementally
// across events. After an event only embeddings whose image intersects the
// touched set are re-derived; everything else is provably unaffected.
class MatchIndex {
public:
    MatchIndex(const Grammar& grammar, const SpinGraph& alpha, EligibilityFn eligible = {});

    std::size_t count(std::uint32_t rule) const { return rules_[rule].elig.size(); }
    std::size_t total_count() const;
    double total_rate() const;

    struct Pick {
        std::uint32_t rule;
        std::uint32_t elig_pos;
    };
    // Rule chosen proportionally to rate * count, embedding uniformly within
    // the rule (all of a rule's embeddings carry the same rate).
    Pick sample(Rng& rng) const;
    Embedding embedding(const Pick& pick) const;

    // Incremental maintenance; `touched` is the event's image plus fresh ids.
    void on_event(const SpinGraph& alpha_after, std::span<const VertexId> touched);

    // Full rebuild comparison; throws IndexDesync on any difference.
    void cross_check(const SpinGraph& alpha) const;

    std::vector<Embedding> snapshot(std::uint32_t rule) const;  // sorted

private:
    struct Slot {
        std::vector<VertexId> map;
        std::uint32_t elig_pos = 0;
        bool alive = false;
    };
    struct PerRule {
        std::vector<Slot> slots;
        std::vector<std::uint32_t> free_list;
        std::vector<std::uint32_t> elig;  // slot ids
    };

    void insert(const SpinGraph& alpha, std::uint32_t rule, std::vector<VertexId> map);
    void remove_slot(std::uint32_t rule, std::uint32_t slot);
    void build(const SpinGraph& alpha);

    const Grammar* grammar_;
    EligibilityFn eligible_;
    std::vector<PerRule> rules_;
    std::unordered_map<VertexId, std::vector<std::uint64_t>> by_vertex_;  // handle = rule<<32|slot
};

}  // namespace rgg
