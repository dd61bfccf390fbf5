#pragma once
// The four query forms over a frozen knowledge base.
//
//   Q1  does A relate to B by <categorizer>?
//   Q2  which concepts relate to A by <categorizer>?
//   Q3  what is the net interaction from A to B?
//   Q4  which concepts have a net interaction of a given sign with A?
//
// Categorizer queries walk the declared edges transitively, move freely inside
// EQV classes, and apply derivative subclassification: (P # C1) relates to
// (Q # C2) when P relates to Q and C1 relates to C2, each "or equal". Longer
// chains recurse on the context. Interaction queries enumerate simple paths of
// the compiled interaction graph and fold them with chain / parallel.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckn/algebra.hpp"
#include "ckn/compiled_kb.hpp"
#include "ckn/concept.hpp"
#include "ckn/error.hpp"
#include "ckn/paths.hpp"

namespace ckn {

inline constexpr std::size_t kDefaultMaxPathLen = 8;

using InteractionPath = SignedPath<ConceptPath>;
using NetInteractionResult = NetResult<ConceptPath>;

enum class CategoryDirection { Ancestors, Descendants };
enum class InteractionDirection { Affects, AffectedBy };

inline void require_concept(const CompiledKB& kb, const ConceptPath& c) {
    if (!kb.contains(c) || c.is_universal()) throw UnknownConcept(c.display());
}

// The basic identity of c as a concept in the universal context.
inline ConceptPath head_concept(const ConceptPath& c) { return ConceptPath(std::vector<Atom>{c.head()}); }

// Memoizing reasoner for one categorizer.
class CategoryReasoner {
public:
    CategoryReasoner(const CompiledKB& kb, Categorizer cat) : cat_(cat) {
        for (const auto& [child, parent] : kb.categorizations(cat)) {
            if (cat == Categorizer::EQV) continue;
            up_[child].push_back(parent);
        }
        std::map<ConceptPath, ConceptPath> uf;
        auto find = [&](ConceptPath x) {
            while (uf.contains(x) && uf[x] != x) x = uf[x];
            return x;
        };
        for (const auto& [a, b] : kb.categorizations(Categorizer::EQV)) {
            uf.try_emplace(a, a);
            uf.try_emplace(b, b);
            auto ra = find(a), rb = find(b);
            if (ra != rb) uf[std::max(ra, rb)] = std::min(ra, rb);
        }
        for (const auto& [m, _] : uf) eqv_class_[find(m)].push_back(m);
        for (const auto& [rep, members] : eqv_class_)
            for (const auto& m : members) eqv_rep_[m] = rep;
        for (const auto& c : kb.context_tree().nodes())
            if (c.size() >= 2) compound_.push_back(c);
    }

    // Strict relation: a reaches b in at least one step.
    bool related(const ConceptPath& a, const ConceptPath& b) {
        const ConceptPair key{a, b};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (in_progress_.contains(key)) return false;
        in_progress_.insert(key);
        const bool r = search(a, b);
        in_progress_.erase(key);
        memo_[key] = r;
        return r;
    }

    bool related_or_equal(const ConceptPath& a, const ConceptPath& b) { return a == b || related(a, b); }

    // (p1 # pc) vs (q1 # qc): heads related-or-equal and contexts related-or-equal.
    bool derivative(const ConceptPath& p, const ConceptPath& q) {
        if (p == q) return true;
        if (p.size() < 2 || q.size() < 2) return related(p, q);
        return related_or_equal(head_concept(p), head_concept(q)) &&
               related_or_equal(p.context(), q.context());
    }

private:
    std::vector<ConceptPath> eqv_mates(const ConceptPath& x) const {
        auto it = eqv_rep_.find(x);
        if (it == eqv_rep_.end()) return {};
        return eqv_class_.at(it->second);
    }

    // BFS over (concept, took-a-real-step). EQV moves are free except when
    // the categorizer itself is EQV.
    bool search(const ConceptPath& a, const ConceptPath& b) {
        using State = std::pair<ConceptPath, bool>;
        const bool eqv = cat_ == Categorizer::EQV;
        std::set<State> seen;
        std::vector<State> frontier{{a, false}};
        seen.insert(frontier.front());
        while (!frontier.empty()) {
            auto [x, used] = frontier.back();
            frontier.pop_back();
            auto push = [&](const ConceptPath& y, bool step_used) {
                State s{y, step_used};
                if (seen.insert(s).second) frontier.push_back(std::move(s));
            };
            for (const auto& m : eqv_mates(x))
                if (m != x) push(m, eqv ? true : used);
            if (auto it = up_.find(x); it != up_.end())
                for (const auto& y : it->second) push(y, true);
            if (x.size() >= 2) {
                for (const auto& y : compound_) {
                    if (y == x || seen.contains({y, true})) continue;
                    if (derivative_step(x, y)) push(y, true);
                }
            }
            if (seen.contains({b, true})) return true;
        }
        return false;
    }

    bool derivative_step(const ConceptPath& x, const ConceptPath& y) {
        return related_or_equal(head_concept(x), head_concept(y)) &&
               related_or_equal(x.context(), y.context());
    }

    Categorizer cat_;
    std::map<ConceptPath, std::vector<ConceptPath>> up_;
    std::map<ConceptPath, std::vector<ConceptPath>> eqv_class_;
    std::map<ConceptPath, ConceptPath> eqv_rep_;
    std::vector<ConceptPath> compound_;
    std::map<ConceptPair, bool> memo_;
    std::set<ConceptPair> in_progress_;
};

// Q1. Throws UnknownConcept if either concept is absent.
inline bool q1(const CompiledKB& kb, const ConceptPath& a, const ConceptPath& b, Categorizer cat) {
    require_concept(kb, a);
    require_concept(kb, b);
    if (a == b) return false;
    return CategoryReasoner(kb, cat).related(a, b);
}

inline bool derivative_subclassification(const CompiledKB& kb, const ConceptPath& p, const ConceptPath& q,
                                         Categorizer cat) {
    return CategoryReasoner(kb, cat).derivative(p, q);
}

// Q2. Ancestors: every b with q1(a, b). Descendants: every b with q1(b, a).
inline std::set<ConceptPath> q2(const CompiledKB& kb, const ConceptPath& a, Categorizer cat,
                                CategoryDirection dir) {
    require_concept(kb, a);
    CategoryReasoner r(kb, cat);
    std::set<ConceptPath> out;
    for (const auto& b : kb.context_tree().nodes()) {
        if (b.is_universal() || b == a) continue;
        const bool hit = dir == CategoryDirection::Ancestors ? r.related(a, b) : r.related(b, a);
        if (hit) out.insert(b);
    }
    return out;
}

inline SignedGraph<ConceptPath> interaction_graph(const CompiledKB& kb) {
    SignedGraph<ConceptPath> g;
    for (const auto& [k, e] : kb.interactions()) g.add_edge(k.first, e.sign, k.second);
    return g;
}

inline std::vector<InteractionPath> enumerate_paths(const CompiledKB& kb, const ConceptPath& a,
                                                    const ConceptPath& b, std::size_t max_len) {
    return enumerate_simple_paths(interaction_graph(kb), a, b, max_len);
}

// Q3. Throws QueryError when a == b and UnknownConcept for absent concepts.
inline NetInteractionResult q3(const CompiledKB& kb, const ConceptPath& a, const ConceptPath& b,
                               std::size_t max_len = kDefaultMaxPathLen) {
    require_concept(kb, a);
    require_concept(kb, b);
    if (a == b) throw QueryError("net interaction needs two distinct concepts");
    return net_interaction(enumerate_paths(kb, a, b, max_len));
}

struct SignedConcept {
    ConceptPath concept_path;
    InteractionSign net;
    auto operator<=>(const SignedConcept&) const = default;
};

// Q4. `filter` empty means any sign.
inline std::set<SignedConcept> q4(const CompiledKB& kb, const ConceptPath& a,
                                  std::optional<InteractionSign> filter, InteractionDirection dir,
                                  std::size_t max_len = kDefaultMaxPathLen) {
    require_concept(kb, a);
    const auto g = interaction_graph(kb);
    std::set<SignedConcept> out;
    for (const auto& b : kb.context_tree().nodes()) {
        if (b.is_universal() || b == a) continue;
        auto paths = dir == InteractionDirection::Affects ? enumerate_simple_paths(g, a, b, max_len)
                                                          : enumerate_simple_paths(g, b, a, max_len);
        auto r = net_interaction(std::move(paths));
        if (r.net && (!filter || *filter == *r.net)) out.insert({b, *r.net});
    }
    return out;
}

}  // namespace ckn
