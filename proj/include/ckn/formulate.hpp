#pragma once
// Decision-model extraction.
//
// Starting from the value and decision concepts, the model grows by direct
// interactions: backward from the value, forward from the decisions, for up to
// `depth` hops. Every included element records the query that introduced it,
// so the result reads as the transcript of a Q1-Q4 dialogue with the KB.
//
// With a context filter, seeds outside the filter's subtree are read in that
// context (Bring_Camera#Tourist under Thailand is Bring_Camera#Tourist#Thailand)
// and candidates outside the subtree are dropped.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ckn/algebra.hpp"
#include "ckn/compiled_kb.hpp"
#include "ckn/concept.hpp"
#include "ckn/dsl.hpp"
#include "ckn/error.hpp"
#include "ckn/paths.hpp"
#include "ckn/query.hpp"

namespace ckn {

enum class NodeKind { Chance, Decision, Value };

inline std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Chance: return "chance";
        case NodeKind::Decision: return "decision";
        case NodeKind::Value: return "value";
    }
    return "?";
}

inline std::optional<NodeKind> node_kind_from_string(std::string_view s) {
    for (auto k : {NodeKind::Chance, NodeKind::Decision, NodeKind::Value})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

struct ModelArc {
    ConceptPath source;
    InteractionSign sign;
    ConceptPath target;
    auto operator<=>(const ModelArc&) const = default;
};

struct TraceEntry {
    std::string element;
    std::string query;
    bool operator==(const TraceEntry&) const = default;
};

struct DecisionModel {
    std::map<ConceptPath, NodeKind> nodes;
    std::set<ModelArc> arcs;
    std::vector<TraceEntry> trace;

    std::size_t count(NodeKind k) const {
        std::size_t n = 0;
        for (const auto& [_, kind] : nodes) n += kind == k;
        return n;
    }

    bool contains(const ConceptPath& c) const { return nodes.contains(c); }

    // Structural invariants; empty when the model is well formed.
    std::vector<std::string> problems() const {
        std::vector<std::string> out;
        if (count(NodeKind::Value) != 1) out.push_back("a decision model needs exactly one value node");
        if (count(NodeKind::Decision) < 1) out.push_back("a decision model needs at least one decision node");
        for (const auto& a : arcs)
            if (!contains(a.source) || !contains(a.target))
                out.push_back("arc endpoint outside the model: " + a.source.display() + " -> " + a.target.display());
        return out;
    }

    bool operator==(const DecisionModel&) const = default;
};

struct FormulationSpec {
    std::vector<ConceptPath> decisions;
    ConceptPath value;
    std::size_t depth = 3;
    std::optional<ConceptPath> context_filter;
    bool expand_specializations = false;
};

namespace detail {

inline std::string arc_label(const ConceptPath& s, InteractionSign sign, const ConceptPath& t) {
    return s.display() + " " + to_char(sign) + " " + t.display();
}

}  // namespace detail

// Throws UnknownConcept for absent concepts and FormulationError for an invalid
// spec or a value node left without incoming interactions.
inline DecisionModel formulate(const CompiledKB& kb, const FormulationSpec& spec) {
    if (spec.depth < 1) throw FormulationError("formulation depth must be at least 1");
    if (spec.decisions.empty()) throw FormulationError("at least one decision concept is required");

    const auto& ctx = spec.context_filter;
    if (ctx) require_concept(kb, *ctx);
    auto in_scope = [&](const ConceptPath& c) { return !ctx || c == *ctx || c.is_within(*ctx); };
    auto seed = [&](const ConceptPath& c) {
        ConceptPath s = in_scope(c) ? c : ConceptPath::of(c, *ctx);
        require_concept(kb, s);
        return s;
    };

    DecisionModel m;
    const ConceptPath value = seed(spec.value);
    m.nodes[value] = NodeKind::Value;
    m.trace.push_back({"node " + value.display(), "seed: value"});
    std::vector<ConceptPath> decisions;
    for (const auto& d : spec.decisions) {
        auto s = seed(d);
        if (s == value) throw FormulationError("'" + s.display() + "' cannot be both decision and value");
        if (m.nodes.emplace(s, NodeKind::Decision).second) {
            decisions.push_back(s);
            m.trace.push_back({"node " + s.display(), "seed: decision"});
        }
    }

    // Precedence-only edges carry no influence and stay out of the model.
    std::map<ConceptPath, std::vector<ModelArc>> incoming, outgoing;
    for (const auto& e : kb.interaction_edges()) {
        if (e.sign == InteractionSign::Precedence) continue;
        ModelArc a{e.source, e.sign, e.target};
        incoming[e.target].push_back(a);
        outgoing[e.source].push_back(a);
        if (e.sign == InteractionSign::Association) {
            incoming[e.source].push_back({e.target, e.sign, e.source});
            outgoing[e.target].push_back({e.target, e.sign, e.source});
        }
    }

    auto add_chance = [&](const ConceptPath& c, std::string query) {
        if (!in_scope(c) || m.nodes.contains(c)) return false;
        m.nodes.emplace(c, NodeKind::Chance);
        m.trace.push_back({"node " + c.display(), std::move(query)});
        return true;
    };

    auto grow = [&](std::vector<ConceptPath> frontier, bool backward) {
        for (std::size_t hop = 0; hop < spec.depth && !frontier.empty(); ++hop) {
            std::set<ConceptPath> next;
            for (const auto& n : frontier) {
                const auto& adj = backward ? incoming : outgoing;
                auto it = adj.find(n);
                if (it == adj.end()) continue;
                for (const auto& a : it->second) {
                    const auto& other = backward ? a.source : a.target;
                    std::string q = backward ? "Q4(" + n.display() + ", any, affected-by)"
                                             : "Q4(" + n.display() + ", any, affects)";
                    if (add_chance(other, std::move(q))) next.insert(other);
                }
            }
            frontier.assign(next.begin(), next.end());
        }
    };
    grow({value}, true);
    grow(decisions, false);

    if (spec.expand_specializations) {
        std::vector<ConceptPath> chance;
        for (const auto& [c, k] : m.nodes)
            if (k == NodeKind::Chance) chance.push_back(c);
        for (const auto& c : chance)
            for (const auto& sub : q2(kb, c, Categorizer::AKO, CategoryDirection::Descendants))
                add_chance(sub, "Q2(" + c.display() + ", ako, descendants)");
    }

    for (const auto& e : kb.interaction_edges()) {
        if (e.sign == InteractionSign::Precedence) continue;
        if (!m.contains(e.source) || !m.contains(e.target)) continue;
        m.arcs.insert({e.source, e.sign, e.target});
        m.trace.push_back({"arc " + detail::arc_label(e.source, e.sign, e.target),
                           "Q3(" + e.source.display() + ", " + e.target.display() + ")"});
    }

    const bool value_reached = std::any_of(m.arcs.begin(), m.arcs.end(), [&](const ModelArc& a) {
        return a.target == value || (a.sign == InteractionSign::Association && a.source == value);
    });
    if (!value_reached)
        throw FormulationError("cannot formulate a model: value '" + value.display() +
                               "' has no incoming interaction within depth " + std::to_string(spec.depth));
    return m;
}

inline SignedGraph<ConceptPath> model_graph(const DecisionModel& m) {
    SignedGraph<ConceptPath> g;
    for (const auto& a : m.arcs) g.add_edge(a.source, a.sign, a.target);
    return g;
}

// Net interaction between two model nodes over the model's arcs only.
inline NetInteractionResult model_query(const DecisionModel& m, const ConceptPath& a, const ConceptPath& b,
                                        std::size_t max_len = kDefaultMaxPathLen) {
    for (const auto* c : {&a, &b})
        if (!m.contains(*c)) throw QueryError("'" + c->display() + "' is not a node of the decision model");
    return net_interaction(enumerate_simple_paths(model_graph(m), a, b, max_len));
}

inline constexpr std::string_view kModelFormat = "ckn-decision-model";
inline constexpr int kModelVersion = 1;

inline std::string to_json(const DecisionModel& m) {
    using nlohmann::json;
    json j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    json nodes = json::array();
    for (const auto& [c, k] : m.nodes) nodes.push_back({{"concept", c.dsl()}, {"kind", std::string(to_string(k))}});
    json arcs = json::array();
    for (const auto& a : m.arcs)
        arcs.push_back({{"source", a.source.dsl()}, {"sign", std::string(1, to_char(a.sign))}, {"target", a.target.dsl()}});
    json trace = json::array();
    for (const auto& t : m.trace) trace.push_back({{"element", t.element}, {"query", t.query}});
    j["nodes"] = std::move(nodes);
    j["arcs"] = std::move(arcs);
    j["trace"] = std::move(trace);
    return j.dump(2) + "\n";
}

inline DecisionModel model_from_json(std::string_view text) {
    using nlohmann::json;
    try {
        const json j = json::parse(text);
        if (j.value("format", "") != kModelFormat) throw FormulationError("not a ckn decision model");
        if (j.value("version", -1) != kModelVersion) throw FormulationError("unsupported decision model version");
        DecisionModel m;
        for (const auto& n : j.at("nodes")) {
            auto kind = node_kind_from_string(n.at("kind").get<std::string>());
            if (!kind) throw FormulationError("bad node kind");
            m.nodes.emplace(parse_concept(n.at("concept").get<std::string>()), *kind);
        }
        for (const auto& a : j.at("arcs")) {
            auto s = a.at("sign").get<std::string>();
            auto sign = s.size() == 1 ? sign_from_char(s[0]) : std::nullopt;
            if (!sign) throw FormulationError("bad arc sign '" + s + "'");
            m.arcs.insert({parse_concept(a.at("source").get<std::string>()), *sign,
                           parse_concept(a.at("target").get<std::string>())});
        }
        for (const auto& t : j.at("trace"))
            m.trace.push_back({t.at("element").get<std::string>(), t.at("query").get<std::string>()});
        if (auto p = m.problems(); !p.empty()) throw FormulationError("invalid decision model: " + p.front());
        return m;
    } catch (const json::exception& e) {
        throw FormulationError(std::string("malformed decision model: ") + e.what());
    }
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\\' || c == '"') out += '\\';
        out += c;
    }
    return out + '"';
}

}  // namespace detail

// Graphviz rendering: decisions as boxes, the value as a diamond, chance nodes as ellipses.
inline std::string to_dot(const DecisionModel& m) {
    std::ostringstream os;
    os << "// " << kModelFormat << " v" << kModelVersion << "\n";
    os << "digraph decision_model {\n";
    for (const auto& [c, k] : m.nodes) {
        const char* shape = k == NodeKind::Decision ? "box" : k == NodeKind::Value ? "diamond" : "ellipse";
        os << "  " << detail::dot_quote(c.display()) << " [shape=" << shape << "];\n";
    }
    for (const auto& a : m.arcs) {
        os << "  " << detail::dot_quote(a.source.display()) << " -> " << detail::dot_quote(a.target.display())
           << " [label=\"" << to_char(a.sign) << "\"";
        if (a.sign == InteractionSign::Association) os << ", dir=none";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace ckn
