#pragma once
// Shared helpers for the test suites: fixture loading and random generators.

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckn/ckn.hpp"

namespace ckn_test {

inline std::string fixture_path(const std::string& name) { return std::string(CKN_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ckn::ConceptPath C(std::string_view text) { return ckn::parse_concept(text); }

// Random source KB with every declaration kind, odd atoms included, for
// round-trip testing. The result need not compile cleanly.
inline ckn::SourceKB random_source_kb(std::mt19937& rng) {
    using namespace ckn;
    static const std::vector<std::string> pool = {"Elephant", "Royal_Elephant", "Thailand", "x-1", "King of Thailand",
                                                  "concept", "ako",      "a",              "Tea",      "9lives",
                                                  "influence", "(paren)", "Z_"};
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto concept_path = [&] {
        std::vector<Atom> segs;
        const std::size_t len = 1 + pick(3);
        for (std::size_t i = 0; i < len; ++i) segs.emplace_back(pool[pick(pool.size())]);
        return ConceptPath(std::move(segs));
    };
    SourceKB kb;
    const std::size_t n = pick(25);
    for (std::size_t i = 0; i < n; ++i) {
        switch (pick(4)) {
            case 0: kb.add(ConceptDecl{concept_path()}); break;
            case 1: kb.add(Categorization{concept_path(), kAllCategorizers[pick(4)], concept_path()}); break;
            case 2: kb.add(Interaction{concept_path(), kAllSigns[pick(6)], concept_path()}); break;
            default: kb.add(ValueAssignment{concept_path(), Atom(pool[pick(pool.size())])}); break;
        }
    }
    return kb;
}

// Random interaction KB over at most 8 flat concepts and 14 edges. Edges only
// run from lower to higher index, so every temporal order is a DAG.
struct RandomNet {
    std::vector<std::string> names;
    struct Edge {
        std::size_t from, to;
        char sign;
    };
    std::vector<Edge> edges;

    std::string text() const {
        static const char* kw[] = {"assoc", "precede", "influence+", "influence-", "cause", "inhibit"};
        const std::string chars = "ap+-ci";
        std::string out;
        for (const auto& n : names) out += "concept " + n + ";\n";
        for (const auto& e : edges)
            out += std::string(kw[chars.find(e.sign)]) + " " + names[e.from] + " " + names[e.to] + ";\n";
        return out;
    }
};

inline RandomNet random_net(std::mt19937& rng) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    RandomNet net;
    const std::size_t n = pick(2, 8);
    for (std::size_t i = 0; i < n; ++i) net.names.push_back("N" + std::to_string(i));
    const std::size_t m = pick(0, 14);
    const std::string chars = "ap+-ci";
    std::set<std::pair<std::size_t, std::size_t>> used;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t a = pick(0, n - 1), b = pick(0, n - 1);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!used.insert({a, b}).second) continue;
        net.edges.push_back({a, b, chars[pick(0, 5)]});
    }
    return net;
}

}  // namespace ckn_test
