#pragma once
// The pre-compiled knowledge base.
//
// Everything a query can see is materialized here: the context tree, one edge
// set per categorizer, the interaction graph (at most one edge per ordered
// concept pair) and the value table. Inherited edges and values carry the
// provenance of the copy that produced them and the sources they shadow.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckn/algebra.hpp"
#include "ckn/concept.hpp"
#include "ckn/context_tree.hpp"

namespace ckn {

struct Provenance {
    enum class Kind : std::uint8_t { Local, Inherited };

    Kind kind = Kind::Local;
    ConceptPath from;  // categorization parent the entry was copied from
    Categorizer via = Categorizer::AKO;

    static Provenance local() { return {}; }
    static Provenance inherited(ConceptPath from, Categorizer via) {
        return {Kind::Inherited, std::move(from), via};
    }

    bool is_local() const { return kind == Kind::Local; }

    std::string describe() const {
        if (is_local()) return "local";
        return "inherited from " + from.display() + " via " + std::string(keyword(via));
    }

    auto operator<=>(const Provenance&) const = default;
    bool operator==(const Provenance&) const = default;
};

struct ValueEntry {
    Atom value;
    Provenance provenance;
    std::vector<Provenance> shadowed;
    bool operator==(const ValueEntry&) const = default;
};

struct EdgeEntry {
    InteractionSign sign;
    Provenance provenance;
    std::vector<Provenance> shadowed;
    bool operator==(const EdgeEntry&) const = default;
};

using ConceptPair = std::pair<ConceptPath, ConceptPath>;

// Association edges are symmetric and stored once, lesser endpoint first.
inline ConceptPair interaction_key(const ConceptPath& source, InteractionSign sign, const ConceptPath& target) {
    if (sign == InteractionSign::Association && target < source) return {target, source};
    return {source, target};
}

struct InteractionEdge {
    ConceptPath source;
    InteractionSign sign;
    ConceptPath target;
};

class CompiledKB {
public:
    const ContextTree& context_tree() const { return tree_; }
    bool contains(const ConceptPath& c) const { return tree_.contains(c); }

    // Declared edges (child, parent) of one categorizer.
    const std::set<ConceptPair>& categorizations(Categorizer c) const {
        return cats_[static_cast<std::size_t>(c)];
    }

    const std::map<ConceptPair, EdgeEntry>& interactions() const { return edges_; }
    const std::map<ConceptPath, ValueEntry>& values() const { return values_; }

    // Transitive closure of the structural-copy relation.
    const std::set<ConceptPair>& sc_closure() const { return sc_closure_; }

    std::size_t max_depth() const { return max_depth_; }

    const ValueEntry* value(const ConceptPath& attribute) const {
        auto it = values_.find(attribute);
        return it == values_.end() ? nullptr : &it->second;
    }

    // The edge stored for the ordered pair, or for the association stored under the reverse pair.
    const EdgeEntry* edge(const ConceptPath& source, const ConceptPath& target) const {
        if (auto it = edges_.find({source, target}); it != edges_.end()) return &it->second;
        if (auto it = edges_.find({target, source});
            it != edges_.end() && it->second.sign == InteractionSign::Association)
            return &it->second;
        return nullptr;
    }

    std::vector<InteractionEdge> interaction_edges() const {
        std::vector<InteractionEdge> out;
        out.reserve(edges_.size());
        for (const auto& [k, e] : edges_) out.push_back({k.first, e.sign, k.second});
        return out;
    }

    // Mutation is available only while the KB is being built; frozen handles
    // expose a const reference.
    void add_concept(const ConceptPath& c) { tree_.add(c); }
    void add_categorization(Categorizer kind, const ConceptPath& child, const ConceptPath& parent) {
        tree_.add(child);
        tree_.add(parent);
        cats_[static_cast<std::size_t>(kind)].insert({child, parent});
    }
    void set_interaction(const ConceptPath& source, const ConceptPath& target, EdgeEntry e) {
        tree_.add(source);
        tree_.add(target);
        edges_.insert_or_assign(interaction_key(source, e.sign, target), std::move(e));
    }
    void set_value(const ConceptPath& attribute, ValueEntry v) {
        tree_.add(attribute);
        values_.insert_or_assign(attribute, std::move(v));
    }
    void set_sc_closure(std::set<ConceptPair> closure) { sc_closure_ = std::move(closure); }
    void set_max_depth(std::size_t d) { max_depth_ = d; }

    bool operator==(const CompiledKB&) const = default;

private:
    ContextTree tree_;
    std::array<std::set<ConceptPair>, 4> cats_;
    std::map<ConceptPair, EdgeEntry> edges_;
    std::map<ConceptPath, ValueEntry> values_;
    std::set<ConceptPair> sc_closure_;
    std::size_t max_depth_ = 16;
};

// Read-only handle to a compiled knowledge base.
class FrozenKB {
public:
    FrozenKB() = default;
    explicit FrozenKB(std::shared_ptr<const CompiledKB> kb) : kb_(std::move(kb)) {}

    const CompiledKB& operator*() const { return *kb_; }
    const CompiledKB* operator->() const { return kb_.get(); }
    const CompiledKB& get() const { return *kb_; }
    explicit operator bool() const { return kb_ != nullptr; }

private:
    std::shared_ptr<const CompiledKB> kb_;
};

}  // namespace ckn
