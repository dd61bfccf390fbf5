#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace ckn;
using ckn_test::C;

namespace {

FrozenKB tourist() {
    static const FrozenKB kb = build(ckn_test::read_fixture("tourist.ckn"));
    return kb;
}

FormulationSpec tourist_spec(const char* country, std::size_t depth = 3) {
    FormulationSpec s;
    s.decisions = {C("Bring_Camera#Tourist")};
    s.value = C("Utility#Tourist");
    s.context_filter = C(country);
    s.depth = depth;
    return s;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST(Formulate, TouristModelShape) {
    const auto m = formulate(*tourist(), tourist_spec("Thailand"));
    EXPECT_TRUE(m.problems().empty());
    EXPECT_EQ(m.count(NodeKind::Value), 1u);
    EXPECT_GE(m.count(NodeKind::Decision), 1u);
    EXPECT_EQ(m.nodes.at(C("Utility#Tourist#Thailand")), NodeKind::Value);
    EXPECT_EQ(m.nodes.at(C("Bring_Camera#Tourist#Thailand")), NodeKind::Decision);
    for (const auto& [c, _] : m.nodes) EXPECT_TRUE(c.is_within(C("Thailand"))) << c.display();
}

TEST(Formulate, PairedQueriesFoldBothWays) {
    const auto m = formulate(*tourist(), tourist_spec("Thailand"));
    const auto r = model_query(m, C("Bring_Camera#Tourist#Thailand"), C("Utility#Tourist#Thailand"));
    ASSERT_TRUE(r.net);
    EXPECT_EQ(*r.net, InteractionSign::Association);
    const bool pos = std::any_of(r.paths.begin(), r.paths.end(), [](const auto& p) {
        return p.fold == InteractionSign::Positive;
    });
    const bool neg = std::any_of(r.paths.begin(), r.paths.end(), [](const auto& p) {
        return p.fold == InteractionSign::Negative;
    });
    EXPECT_TRUE(pos);
    EXPECT_TRUE(neg);
}

TEST(Formulate, EveryElementIsTraced) {
    const auto m = formulate(*tourist(), tourist_spec("Thailand"));
    EXPECT_EQ(m.trace.size(), m.nodes.size() + m.arcs.size());
    for (const auto& t : m.trace) EXPECT_FALSE(t.query.empty());
}

TEST(Formulate, ModelQueryMatchesQ3OnModelSubgraph) {
    const auto m = formulate(*tourist(), tourist_spec("Thailand"));
    // Rebuild the model's arcs as a standalone KB and compare with q3 there.
    std::string text;
    for (const auto& [c, _] : m.nodes) text += "concept " + c.dsl() + ";\n";
    for (const auto& a : m.arcs)
        text += std::string(keyword(a.sign)) + " " + a.source.dsl() + " " + a.target.dsl() + ";\n";
    const auto sub = build(text);
    for (const auto& [a, _] : m.nodes)
        for (const auto& [b, __] : m.nodes) {
            if (a == b) continue;
            const auto x = model_query(m, a, b);
            const auto y = q3(*sub, a, b);
            EXPECT_EQ(x.net, y.net) << a.display() << " -> " << b.display();
            EXPECT_EQ(x.paths.size(), y.paths.size());
        }
}

TEST(Formulate, DepthIsMonotone) {
    DecisionModel prev;
    for (std::size_t d = 1; d <= 5; ++d) {
        const auto m = formulate(*tourist(), tourist_spec("Thailand", d));
        for (const auto& [c, k] : prev.nodes) {
            ASSERT_TRUE(m.contains(c)) << "depth " << d << " lost " << c.display();
            EXPECT_EQ(m.nodes.at(c), k);
        }
        for (const auto& a : prev.arcs) EXPECT_TRUE(m.arcs.contains(a));
        prev = m;
    }
}

TEST(Formulate, ContextSensitivity) {
    const auto th = formulate(*tourist(), tourist_spec("Thailand"));
    const auto in = formulate(*tourist(), tourist_spec("India"));
    EXPECT_TRUE(th.arcs.contains(
        {C("Presence#Human#Thailand"), InteractionSign::Positive, C("Presence#Royal_Elephant#Thailand")}));
    EXPECT_TRUE(in.arcs.contains(
        {C("Presence#Human#India"), InteractionSign::Negative, C("Presence#Royal_Elephant#India")}));
}

TEST(Formulate, Errors) {
    auto kb = tourist();
    auto s = tourist_spec("Thailand");
    s.value = C("Nowhere#Tourist");
    EXPECT_THROW(formulate(*kb, s), UnknownConcept);

    s = tourist_spec("Thailand");
    s.value = C("Bring_Camera#Tourist");
    EXPECT_THROW(formulate(*kb, s), FormulationError);

    s = tourist_spec("Thailand");
    s.decisions.clear();
    EXPECT_THROW(formulate(*kb, s), FormulationError);

    // Bring_Camera has no incoming interactions.
    s = tourist_spec("Thailand");
    s.decisions = {C("Utility#Tourist")};
    s.value = C("Bring_Camera#Tourist");
    EXPECT_THROW(formulate(*kb, s), FormulationError);
}

TEST(Formulate, ExpandSpecializations) {
    auto kb = build(
        "ako Royal_Elephant Elephant;\ninfluence+ Presence#Elephant Photo;\ncause Bring Photo;\n"
        "concept Presence#Royal_Elephant;\n");
    FormulationSpec s;
    s.decisions = {C("Bring")};
    s.value = C("Photo");
    const auto plain = formulate(*kb, s);
    EXPECT_FALSE(plain.contains(C("Presence#Royal_Elephant")));
    s.expand_specializations = true;
    const auto wide = formulate(*kb, s);
    ASSERT_TRUE(wide.contains(C("Presence#Royal_Elephant")));
    EXPECT_EQ(wide.nodes.at(C("Presence#Royal_Elephant")), NodeKind::Chance);
}

TEST(Formulate, PrecedenceEdgesStayOut) {
    auto kb = build("precede Bring Photo;\ninfluence+ Bring Photo2;\ninfluence+ Photo2 Utility;\n");
    FormulationSpec s;
    s.decisions = {C("Bring")};
    s.value = C("Utility");
    const auto m = formulate(*kb, s);
    EXPECT_FALSE(m.contains(C("Photo")));
}

TEST(Export, DotHasOneDiamond) {
    const auto m = formulate(*tourist(), tourist_spec("Thailand"));
    const auto dot = to_dot(m);
    EXPECT_EQ(count_of(dot, "shape=diamond"), 1u);
    EXPECT_EQ(count_of(dot, "shape=box"), m.count(NodeKind::Decision));
    EXPECT_EQ(count_of(dot, " -> "), m.arcs.size());
    EXPECT_EQ(dot.rfind("// ckn-decision-model v1\n", 0), 0u);
}

TEST(Export, JsonRoundTrip) {
    const auto m = formulate(*tourist(), tourist_spec("India"));
    const auto text = to_json(m);
    const auto back = model_from_json(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(to_json(back), text);
}

TEST(Export, JsonRejectsBadInput) {
    EXPECT_THROW(model_from_json("{}"), FormulationError);
    EXPECT_THROW(model_from_json("not json"), FormulationError);
    EXPECT_THROW(model_from_json(R"({"format":"ckn-decision-model","version":2,"nodes":[],"arcs":[],"trace":[]})"),
                 FormulationError);
    EXPECT_THROW(model_from_json(R"({"format":"ckn-decision-model","version":1,"nodes":[],"arcs":[],"trace":[]})"),
                 FormulationError);
}

TEST(ModelQuery, RejectsNonMembers) {
    const auto m = formulate(*tourist(), tourist_spec("Thailand"));
    EXPECT_THROW(model_query(m, C("Bring_Camera#Tourist#India"), C("Utility#Tourist#Thailand")), QueryError);
}
