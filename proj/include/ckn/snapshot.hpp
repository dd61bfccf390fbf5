#pragma once
// Versioned JSON snapshot of a frozen knowledge base, so repeated queries
// skip parsing and compilation.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ckn/compiled_kb.hpp"
#include "ckn/compiler.hpp"
#include "ckn/dsl.hpp"
#include "ckn/error.hpp"

namespace ckn {

inline constexpr std::string_view kSnapshotFormat = "ckn-snapshot";
inline constexpr int kSnapshotVersion = 1;

namespace detail {

using nlohmann::json;

inline json provenance_json(const Provenance& p) {
    if (p.is_local()) return json{{"kind", "local"}};
    return json{{"kind", "inherited"}, {"from", p.from.dsl()}, {"via", std::string(keyword(p.via))}};
}

inline Provenance provenance_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "local") return Provenance::local();
    if (kind != "inherited") throw SnapshotError("bad provenance kind: " + kind);
    auto via = categorizer_from_keyword(j.at("via").get<std::string>());
    if (!via) throw SnapshotError("bad categorizer in provenance");
    return Provenance::inherited(parse_concept(j.at("from").get<std::string>()), *via);
}

inline json shadowed_json(const std::vector<Provenance>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back(provenance_json(p));
    return arr;
}

inline std::vector<Provenance> shadowed_from_json(const json& j) {
    std::vector<Provenance> out;
    for (const auto& p : j) out.push_back(provenance_from_json(p));
    return out;
}

}  // namespace detail

inline std::string to_snapshot(const CompiledKB& kb) {
    using detail::json;
    json j;
    j["format"] = kSnapshotFormat;
    j["version"] = kSnapshotVersion;
    j["max_depth"] = kb.max_depth();

    json concepts = json::array();
    for (const auto& c : kb.context_tree().nodes())
        if (!c.is_universal()) concepts.push_back(c.dsl());
    j["concepts"] = std::move(concepts);

    json cats = json::array();
    for (auto kind : kAllCategorizers)
        for (const auto& [child, parent] : kb.categorizations(kind))
            cats.push_back({{"kind", std::string(keyword(kind))}, {"child", child.dsl()}, {"parent", parent.dsl()}});
    j["categorizations"] = std::move(cats);

    json edges = json::array();
    for (const auto& [k, e] : kb.interactions())
        edges.push_back({{"source", k.first.dsl()},
                         {"sign", std::string(1, to_char(e.sign))},
                         {"target", k.second.dsl()},
                         {"provenance", detail::provenance_json(e.provenance)},
                         {"shadowed", detail::shadowed_json(e.shadowed)}});
    j["interactions"] = std::move(edges);

    json values = json::array();
    for (const auto& [attr, v] : kb.values())
        values.push_back({{"attribute", attr.dsl()},
                          {"value", v.value.name()},
                          {"provenance", detail::provenance_json(v.provenance)},
                          {"shadowed", detail::shadowed_json(v.shadowed)}});
    j["values"] = std::move(values);
    return j.dump(2) + "\n";
}

// FNV-1a over the canonical snapshot text.
inline std::uint64_t fingerprint(const CompiledKB& kb) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : to_snapshot(kb)) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Throws SnapshotError on malformed input or a format/version mismatch.
inline FrozenKB load_snapshot(std::string_view text) {
    using detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SnapshotError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != kSnapshotFormat) throw SnapshotError("not a ckn snapshot");
        if (j.value("version", -1) != kSnapshotVersion)
            throw SnapshotError("unsupported snapshot version " + j.value("version", json(-1)).dump() +
                                " (expected " + std::to_string(kSnapshotVersion) + ")");
        CompiledKB kb;
        kb.set_max_depth(j.at("max_depth").get<std::size_t>());
        for (const auto& c : j.at("concepts")) kb.add_concept(parse_concept(c.get<std::string>()));
        for (const auto& c : j.at("categorizations")) {
            auto kind = categorizer_from_keyword(c.at("kind").get<std::string>());
            if (!kind) throw SnapshotError("bad categorizer in snapshot");
            kb.add_categorization(*kind, parse_concept(c.at("child").get<std::string>()),
                                  parse_concept(c.at("parent").get<std::string>()));
        }
        for (const auto& e : j.at("interactions")) {
            const auto sign_text = e.at("sign").get<std::string>();
            auto sign = sign_text.size() == 1 ? sign_from_char(sign_text[0]) : std::nullopt;
            if (!sign) throw SnapshotError("bad interaction sign '" + sign_text + "'");
            kb.set_interaction(parse_concept(e.at("source").get<std::string>()),
                               parse_concept(e.at("target").get<std::string>()),
                               EdgeEntry{*sign, detail::provenance_from_json(e.at("provenance")),
                                         detail::shadowed_from_json(e.at("shadowed"))});
        }
        for (const auto& v : j.at("values")) {
            kb.set_value(parse_concept(v.at("attribute").get<std::string>()),
                         ValueEntry{Atom(v.at("value").get<std::string>()),
                                    detail::provenance_from_json(v.at("provenance")),
                                    detail::shadowed_from_json(v.at("shadowed"))});
        }
        auto sc = check_sc(kb);
        kb.set_sc_closure(std::move(sc.closure));
        return FrozenKB(std::make_shared<const CompiledKB>(std::move(kb)));
    } catch (const json::exception& e) {
        throw SnapshotError(std::string("malformed snapshot: ") + e.what());
    } catch (const InvalidConcept& e) {
        throw SnapshotError(std::string("malformed snapshot: ") + e.what());
    }
}

}  // namespace ckn
