#include "rgg/grammar.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace rgg {

// ---------------------------------------------------------------- RuleGraph

bool RuleGraph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

void RuleGraph::finalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    adj.assign(spins.size(), {});
    for (auto [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
}

bool RuleGraph::connected() const {
    if (size() <= 1) return true;
    std::vector<bool> seen(size(), false);
    std::deque<int> queue{0};
    seen[0] = true;
    int count = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int nb : adj[v]) {
            if (!seen[nb]) {
                seen[nb] = true;
                ++count;
                queue.push_back(nb);
            }
        }
    }
    return count == size();
}

namespace {

// eccentricities by BFS; -1 marks unreachable (disconnected rule graphs)
std::vector<int> eccentricities(const RuleGraph& g) {
    std::vector<int> ecc(g.size(), 0);
    for (int s = 0; s < g.size(); ++s) {
        std::vector<int> dist(g.size(), -1);
        std::deque<int> queue{s};
        dist[s] = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int nb : g.adj[v]) {
                if (dist[nb] < 0) {
                    dist[nb] = dist[v] + 1;
                    queue.push_back(nb);
                }
            }
        }
        for (int d : dist) {
            if (d < 0) {
                ecc[s] = g.size();  // disconnected: treat as worst case
                break;
            }
            ecc[s] = std::max(ecc[s], d);
        }
    }
    return ecc;
}

}  // namespace

int RuleGraph::radius() const {
    if (size() <= 1) return 0;
    auto ecc = eccentricities(*this);
    return *std::min_element(ecc.begin(), ecc.end());
}

int RuleGraph::diameter() const {
    if (size() <= 1) return 0;
    auto ecc = eccentricities(*this);
    return *std::max_element(ecc.begin(), ecc.end());
}

int RuleGraph::index_of_local(int local_id) const {
    auto it = std::lower_bound(local_ids.begin(), local_ids.end(), local_id);
    if (it == local_ids.end() || *it != local_id) return -1;
    return static_cast<int>(it - local_ids.begin());
}

// ----------------------------------------------------------- SubstitutionRule

void SubstitutionRule::finalize() {
    lhs.finalize();
    rhs.finalize();
    lhs_is_anchor.assign(lhs.size(), false);
    glue_of_lhs.assign(lhs.size(), -1);
    for (std::size_t i = 0; i < anchor_lhs.size(); ++i) {
        lhs_is_anchor[anchor_lhs[i]] = true;
        glue_of_lhs[anchor_lhs[i]] = glue_rhs[i];
    }
    rhs_fresh.clear();
    std::vector<bool> glued(rhs.size(), false);
    for (int b : glue_rhs) glued[b] = true;
    for (int i = 0; i < rhs.size(); ++i)
        if (!glued[i]) rhs_fresh.push_back(i);
}

// ------------------------------------------------------------------- Grammar

Grammar::Grammar(Alphabet alphabet, int degree_cap, std::vector<SubstitutionRule> rules)
    : alphabet_(std::move(alphabet)), degree_cap_(degree_cap), rules_(std::move(rules)) {
    for (auto& r : rules_) r.finalize();
    for (const auto& r : rules_) {
        int rad = r.lhs.radius();
        max_lhs_radius_ = std::max(max_lhs_radius_, rad);
        if (rad > 1) all_radii_le_1_ = false;
    }
}

// -------------------------------------------------------------------- parser

namespace {

struct Line {
    int no;
    std::vector<std::string> toks;
};

std::vector<Line> lex(std::string_view text) {
    std::vector<Line> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        std::istringstream ls(raw);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) {
            if (t[0] == '#') break;
            toks.push_back(t);
        }
        if (!toks.empty()) lines.push_back({no, std::move(toks)});
    }
    return lines;
}

[[noreturn]] void fail(ParseError::Kind kind, const std::string& msg, int line, int col = 1) {
    throw ParseError(kind, msg, line, col);
}

double parse_rate(const std::string& tok, int line) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (...) {
        fail(ParseError::Kind::Syntax, "bad rate '" + tok + "'", line);
    }
    if (pos != tok.size()) fail(ParseError::Kind::Syntax, "bad rate '" + tok + "'", line);
    return v;
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
    auto lines = lex(text);
    Alphabet alphabet;
    int degree_cap = 16;
    bool have_alphabet = false;
    std::vector<SubstitutionRule> rules;

    std::size_t i = 0;
    auto expect_spin = [&](const std::string& tok, int line) -> Spin {
        auto s = alphabet.find(tok);
        if (!s)
            fail(ParseError::Kind::UndeclaredSpin, "spin '" + tok + "' not in alphabet", line);
        return *s;
    };

    while (i < lines.size()) {
        const Line& ln = lines[i];
        const auto& toks = ln.toks;
        if (toks[0] == "alphabet") {
            if (toks.size() < 2) fail(ParseError::Kind::Syntax, "empty alphabet", ln.no);
            for (std::size_t k = 1; k < toks.size(); ++k) alphabet.add(toks[k]);
            have_alphabet = true;
            ++i;
        } else if (toks[0] == "degreecap") {
            if (toks.size() != 2) fail(ParseError::Kind::Syntax, "expected 'degreecap <n>'", ln.no);
            degree_cap = std::stoi(toks[1]);
            if (degree_cap < 1) fail(ParseError::Kind::Syntax, "degree cap must be >= 1", ln.no);
            ++i;
        } else if (toks[0] == "rule") {
            if (!have_alphabet)
                fail(ParseError::Kind::Syntax, "rule before alphabet declaration", ln.no);
            if (toks.size() != 4 || toks[2] != "rate")
                fail(ParseError::Kind::Syntax, "expected 'rule <name> rate <lambda>'", ln.no);
            SubstitutionRule rule;
            rule.name = toks[1];
            rule.rate = parse_rate(toks[3], ln.no);
            if (!(rule.rate > 0.0))
                fail(ParseError::Kind::NonpositiveRate,
                     "rule '" + rule.name + "' has nonpositive rate", ln.no);
            ++i;

            // section bodies
            std::vector<std::pair<int, int>> lhs_edges_local, rhs_edges_local;
            std::vector<std::pair<int, std::string>> lhs_verts, rhs_verts;
            std::vector<int> anchor_locals;
            std::vector<std::pair<int, int>> glue_locals;
            bool closed = false;
            int in_lhs = 0;  // 1 lhs, 2 rhs, 0 none
            while (i < lines.size()) {
                const Line& bl = lines[i];
                const auto& bt = bl.toks;
                if (bt[0] == "end") {
                    closed = true;
                    ++i;
                    break;
                } else if (bt[0] == "lhs") {
                    in_lhs = 1;
                    ++i;
                } else if (bt[0] == "rhs") {
                    in_lhs = 2;
                    ++i;
                } else if (bt[0] == "v") {
                    if (in_lhs == 0)
                        fail(ParseError::Kind::Syntax, "'v' outside lhs/rhs section", bl.no);
                    if (bt.size() != 3) fail(ParseError::Kind::Syntax, "expected 'v <id> <spin>'", bl.no);
                    auto& verts = in_lhs == 1 ? lhs_verts : rhs_verts;
                    verts.emplace_back(std::stoi(bt[1]), bt[2]);
                    ++i;
                } else if (bt[0] == "e") {
                    if (in_lhs == 0)
                        fail(ParseError::Kind::Syntax, "'e' outside lhs/rhs section", bl.no);
                    if (bt.size() != 3) fail(ParseError::Kind::Syntax, "expected 'e <id1> <id2>'", bl.no);
                    auto& edges = in_lhs == 1 ? lhs_edges_local : rhs_edges_local;
                    edges.emplace_back(std::stoi(bt[1]), std::stoi(bt[2]));
                    ++i;
                } else if (bt[0] == "anchor") {
                    for (std::size_t k = 1; k < bt.size(); ++k)
                        anchor_locals.push_back(std::stoi(bt[k]));
                    in_lhs = 0;
                    ++i;
                } else if (bt[0] == "glue") {
                    if (bt.size() != 4 || bt[2] != "->")
                        fail(ParseError::Kind::Syntax, "expected 'glue <lhs-id> -> <rhs-id>'", bl.no);
                    glue_locals.emplace_back(std::stoi(bt[1]), std::stoi(bt[3]));
                    in_lhs = 0;
                    ++i;
                } else {
                    fail(ParseError::Kind::Syntax, "unexpected token '" + bt[0] + "' in rule body",
                         bl.no);
                }
            }
            if (!closed) fail(ParseError::Kind::Syntax, "rule '" + rule.name + "' missing 'end'", ln.no);

            auto build_side = [&](std::vector<std::pair<int, std::string>>& verts,
                                  std::vector<std::pair<int, int>>& edges, RuleGraph& rg) {
                std::sort(verts.begin(), verts.end());
                for (std::size_t k = 1; k < verts.size(); ++k)
                    if (verts[k].first == verts[k - 1].first)
                        fail(ParseError::Kind::Syntax,
                             "duplicate vertex id " + std::to_string(verts[k].first), ln.no);
                for (const auto& [id, spin] : verts) {
                    rg.local_ids.push_back(id);
                    rg.spins.push_back(expect_spin(spin, ln.no));
                }
                for (auto [a, b] : edges) {
                    int ia = rg.index_of_local(a), ib = rg.index_of_local(b);
                    if (ia < 0 || ib < 0)
                        fail(ParseError::Kind::Syntax, "edge references unknown vertex", ln.no);
                    if (ia == ib) fail(ParseError::Kind::Syntax, "self-loop in rule graph", ln.no);
                    rg.edges.emplace_back(std::min(ia, ib), std::max(ia, ib));
                }
            };
            build_side(lhs_verts, lhs_edges_local, rule.lhs);
            build_side(rhs_verts, rhs_edges_local, rule.rhs);
            if (rule.lhs.size() == 0)
                fail(ParseError::Kind::Syntax, "rule '" + rule.name + "' has empty lhs", ln.no);

            // anchors and glue: glue domain must be exactly the anchor set
            std::sort(anchor_locals.begin(), anchor_locals.end());
            anchor_locals.erase(std::unique(anchor_locals.begin(), anchor_locals.end()),
                                anchor_locals.end());
            std::sort(glue_locals.begin(), glue_locals.end());
            if (glue_locals.size() != anchor_locals.size())
                fail(ParseError::Kind::NonInjectiveGlue,
                     "glue lines must cover the anchor set exactly", ln.no);
            std::unordered_set<int> rhs_targets;
            for (std::size_t k = 0; k < glue_locals.size(); ++k) {
                auto [from, to] = glue_locals[k];
                if (from != anchor_locals[k])
                    fail(ParseError::Kind::NonInjectiveGlue,
                         "glue domain does not match anchors", ln.no);
                int ia = rule.lhs.index_of_local(from);
                int ib = rule.rhs.index_of_local(to);
                if (ia < 0)
                    fail(ParseError::Kind::Syntax, "anchor id not in lhs", ln.no);
                if (ib < 0)
                    fail(ParseError::Kind::Syntax, "glue target not in rhs", ln.no);
                if (!rhs_targets.insert(ib).second)
                    fail(ParseError::Kind::NonInjectiveGlue,
                         "glue map is not injective (target " + std::to_string(to) + ")", ln.no);
                rule.anchor_lhs.push_back(ia);
                rule.glue_rhs.push_back(ib);
            }
            rule.finalize();
            rules.push_back(std::move(rule));
        } else {
            fail(ParseError::Kind::Syntax, "unexpected top-level token '" + toks[0] + "'", ln.no);
        }
    }
    if (!have_alphabet) fail(ParseError::Kind::Syntax, "missing alphabet declaration", 1);
    return Grammar(std::move(alphabet), degree_cap, std::move(rules));
}

// ---------------------------------------------------------------- validators

LocalityReport validate_local(const Grammar& g) {
    LocalityReport rep;
    for (std::size_t i = 0; i < g.rule_count(); ++i) {
        if (!g.rule(i).lhs.connected()) {
            rep.pass = false;
            rep.offending_rules.push_back(i);
        }
    }
    return rep;
}

BoundednessReport validate_locally_bounded(const Grammar& g) {
    BoundednessReport rep;
    const int cap = g.degree_cap();
    for (std::size_t ri = 0; ri < g.rule_count(); ++ri) {
        const auto& r = g.rule(ri);
        BoundednessVerdict v = BoundednessVerdict::Pass;
        std::string detail;
        for (int w : r.rhs_fresh) {
            if (r.rhs.degree(w) > cap) {
                v = BoundednessVerdict::Fail;
                detail = "fresh vertex needs degree " + std::to_string(r.rhs.degree(w));
            }
        }
        for (std::size_t k = 0; k < r.anchor_lhs.size(); ++k) {
            int a = r.anchor_lhs[k], b = r.glue_rhs[k];
            if (r.rhs.degree(b) > cap) {
                v = BoundednessVerdict::Fail;
                detail = "glue vertex needs degree " + std::to_string(r.rhs.degree(b));
                break;
            }
            // worst case: the matched vertex already has full external degree
            if (r.rhs.degree(b) > r.lhs.degree(a) && v != BoundednessVerdict::Fail) {
                v = BoundednessVerdict::Warning;
                detail = "glue vertex gains degree " +
                         std::to_string(r.rhs.degree(b) - r.lhs.degree(a));
            }
        }
        if (v != BoundednessVerdict::Pass)
            rep.findings.push_back({ri, v, detail});
        if (v == BoundednessVerdict::Fail)
            rep.verdict = BoundednessVerdict::Fail;
        else if (v == BoundednessVerdict::Warning && rep.verdict == BoundednessVerdict::Pass)
            rep.verdict = BoundednessVerdict::Warning;
    }
    return rep;
}

// -------------------------------------------------------------------- apply

namespace {

void validate_embedding(const SpinGraph& alpha, const SubstitutionRule& rule,
                        std::span<const VertexId> psi) {
    const auto& lhs = rule.lhs;
    if (static_cast<int>(psi.size()) != lhs.size())
        throw BadEmbedding("embedding arity mismatch for rule " + rule.name);
    for (int i = 0; i < lhs.size(); ++i) {
        if (!alpha.has_vertex(psi[i]))
            throw BadEmbedding("embedding image vertex missing for rule " + rule.name);
        if (alpha.spin(psi[i]) != lhs.spins[i])
            throw BadEmbedding("embedding breaks spins for rule " + rule.name);
        for (int j = i + 1; j < lhs.size(); ++j)
            if (psi[i] == psi[j]) throw BadEmbedding("embedding not injective");
    }
    for (auto [i, j] : lhs.edges)
        if (!alpha.has_edge(psi[i], psi[j]))
            throw BadEmbedding("embedding misses lhs edge for rule " + rule.name);
}

// Result-state neighbor sets of glue images and fresh vertices, before mutation.
// Used for the exact degree guard.
struct PostDegrees {
    bool ok = true;
    int worst = 0;
};

PostDegrees post_degrees(const SpinGraph& alpha, const SubstitutionRule& rule,
                         std::span<const VertexId> psi) {
    PostDegrees out;
    const int cap = alpha.degree_cap();
    std::unordered_set<VertexId> removed;
    for (int i = 0; i < rule.lhs.size(); ++i)
        if (!rule.is_anchor(i)) removed.insert(psi[i]);

    for (std::size_t k = 0; k < rule.anchor_lhs.size(); ++k) {
        int a = rule.anchor_lhs[k], b = rule.glue_rhs[k];
        std::unordered_set<VertexId> nbrs;
        for (VertexId nb : alpha.neighbors(psi[a]))
            if (!removed.count(nb)) nbrs.insert(nb);
        for (int j : rule.lhs.adj[a]) nbrs.erase(psi[j]);  // lhs edges all deleted
        // rhs edges at the glue vertex; fresh neighbors are all distinct new ids
        int fresh_nbrs = 0;
        for (int j : rule.rhs.adj[b]) {
            auto it = std::find(rule.glue_rhs.begin(), rule.glue_rhs.end(), j);
            if (it != rule.glue_rhs.end()) {
                int other_lhs = rule.anchor_lhs[it - rule.glue_rhs.begin()];
                nbrs.insert(psi[other_lhs]);
            } else {
                ++fresh_nbrs;
            }
        }
        int deg = static_cast<int>(nbrs.size()) + fresh_nbrs;
        out.worst = std::max(out.worst, deg);
        if (deg > cap) out.ok = false;
    }
    for (int w : rule.rhs_fresh) {
        int deg = rule.rhs.degree(w);
        out.worst = std::max(out.worst, deg);
        if (deg > cap) out.ok = false;
    }
    return out;
}

}  // namespace

bool cap_safe(const SpinGraph& alpha, const SubstitutionRule& rule,
              std::span<const VertexId> psi) {
    return post_degrees(alpha, rule, psi).ok;
}

ApplyDelta apply_substitution_inplace(SpinGraph& alpha, const SubstitutionRule& rule,
                                      std::span<const VertexId> psi,
                                      bool strict_connectivity) {
    validate_embedding(alpha, rule, psi);
    auto post = post_degrees(alpha, rule, psi);
    if (!post.ok)
        throw DegreeCapViolation("rule '" + rule.name + "' would push a vertex to degree " +
                                 std::to_string(post.worst) + " (cap " +
                                 std::to_string(alpha.degree_cap()) + ")");

    const std::size_t before_vertices = alpha.vertex_count();

    ApplyDelta delta;
    delta.image.assign(psi.begin(), psi.end());

    // (ii) delete psi-images of lhs edges
    for (auto [i, j] : rule.lhs.edges) alpha.remove_edge(psi[i], psi[j]);

    // (iii) delete psi(V \ V0) with all incident links
    for (int i = 0; i < rule.lhs.size(); ++i) {
        if (!rule.is_anchor(i)) {
            delta.removed.push_back(psi[i]);
            alpha.remove_vertex(psi[i]);
        }
    }

    // (i)+(iv) bring in Gamma': fresh vertices get new ids, glue vertices merge
    std::vector<VertexId> rhs_image(rule.rhs.size(), kInvalidVertex);
    for (std::size_t k = 0; k < rule.anchor_lhs.size(); ++k)
        rhs_image[rule.glue_rhs[k]] = psi[rule.anchor_lhs[k]];
    for (int w : rule.rhs_fresh) {
        VertexId id = alpha.add_vertex(rule.rhs.spins[w]);
        rhs_image[w] = id;
        delta.fresh.push_back(id);
    }

    // (v) spins: untouched vertices keep theirs, Gamma'-vertices take rhs spins
    for (std::size_t k = 0; k < rule.anchor_lhs.size(); ++k)
        alpha.set_spin(psi[rule.anchor_lhs[k]], rule.rhs.spins[rule.glue_rhs[k]]);

    // Gamma' edges; add_edge dedupes against surviving alpha edges
    for (auto [i, j] : rule.rhs.edges)
        if (!alpha.add_edge(rhs_image[i], rhs_image[j])) ++delta.deduped_edges;

    // |V| bookkeeping identity from Definition 1
    const std::size_t expect = before_vertices -
                               (rule.lhs.size() - rule.anchor_lhs.size()) +
                               (rule.rhs.size() - rule.glue_rhs.size());
    if (alpha.vertex_count() != expect)
        throw std::logic_error("substitution vertex-count identity violated");

    if (strict_connectivity && !is_connected(alpha))
        throw DisconnectionEvent("rule '" + rule.name + "' disconnected the graph");

    return delta;
}

ApplyResult apply_substitution(const SpinGraph& alpha, const SubstitutionRule& rule,
                               std::span<const VertexId> psi, bool strict_connectivity) {
    ApplyResult out{alpha, {}};
    out.delta = apply_substitution_inplace(out.graph, rule, psi, strict_connectivity);
    return out;
}

SubstitutionRule inverse_rule(const SubstitutionRule& rule) {
    SubstitutionRule inv;
    inv.name = rule.name + "_inv";
    inv.rate = rule.rate;
    inv.lhs = rule.rhs;
    inv.rhs = rule.lhs;
    // phi^-1 restricted to the glue image
    std::vector<std::pair<int, int>> pairs;  // (rhs index as new anchor, lhs index as target)
    for (std::size_t k = 0; k < rule.anchor_lhs.size(); ++k)
        pairs.emplace_back(rule.glue_rhs[k], rule.anchor_lhs[k]);
    std::sort(pairs.begin(), pairs.end());
    for (auto [a, b] : pairs) {
        inv.anchor_lhs.push_back(a);
        inv.glue_rhs.push_back(b);
    }
    inv.finalize();
    return inv;
}

}  // namespace rgg
