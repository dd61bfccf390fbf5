#pragma once
// The context tree: every concept hangs under its context, rooted at T.

#include <map>
#include <set>
#include <vector>

#include "ckn/concept.hpp"
#include "ckn/error.hpp"

namespace ckn {

class ContextTree {
public:
    ContextTree() { children_[ConceptPath::universal()]; }

    // Inserts c and every context ancestor of c. Returns true if c was new.
    bool add(const ConceptPath& c) {
        if (children_.contains(c)) return false;
        children_[c];
        ConceptPath cur = c;
        while (!cur.is_universal()) {
            auto parent = cur.context();
            const bool known = children_.contains(parent);
            children_[parent].insert(cur);
            if (known) break;
            cur = std::move(parent);
        }
        return true;
    }

    bool contains(const ConceptPath& c) const { return children_.contains(c); }

    std::size_t size() const { return children_.size(); }

    const std::set<ConceptPath>& children(const ConceptPath& c) const {
        auto it = children_.find(c);
        if (it == children_.end()) throw UnknownConcept(c.display());
        return it->second;
    }

    // Every concept including T, in canonical order.
    std::vector<ConceptPath> nodes() const {
        std::vector<ConceptPath> out;
        out.reserve(children_.size());
        for (const auto& [c, _] : children_) out.push_back(c);
        return out;
    }

    // The subtree rooted at c, excluding c itself.
    std::set<ConceptPath> description_closure(const ConceptPath& c) const {
        std::set<ConceptPath> out;
        if (!contains(c)) throw UnknownConcept(c.display());
        std::vector<const ConceptPath*> stack{&c};
        while (!stack.empty()) {
            const ConceptPath* cur = stack.back();
            stack.pop_back();
            for (const auto& k : children_.at(*cur)) {
                auto [it, _] = out.insert(k);
                stack.push_back(&*it);
            }
        }
        return out;
    }

    bool operator==(const ContextTree&) const = default;

private:
    std::map<ConceptPath, std::set<ConceptPath>> children_;
};

inline std::set<ConceptPath> description_closure(const ContextTree& tree, const ConceptPath& c) {
    return tree.description_closure(c);
}

}  // namespace ckn
