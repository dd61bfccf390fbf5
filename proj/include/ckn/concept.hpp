#pragma once
// Concept identity.
//
// A concept is a chain of atoms read left to right as (s1 # s2 # ... # sn # T).
// The universal context T closes every chain implicitly and is never stored:
// the empty path *is* T. The head atom is the concept's basic identity, the
// remaining chain its context.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ckn/error.hpp"

namespace ckn {

inline constexpr std::string_view kUniversalName = "T";

// Identifier token accepted unquoted by the declaration language.
inline bool is_ident(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c) || c == '-'; });
}

class Atom {
public:
    // Throws InvalidConcept on an empty name, the reserved name T, or a name
    // containing '#', '"' or control characters.
    explicit Atom(std::string name) : name_(std::move(name)) {
        if (name_.empty()) throw InvalidConcept("empty atom name");
        if (name_ == kUniversalName)
            throw InvalidConcept("reserved atom 'T' cannot be used as a concept segment");
        for (unsigned char c : name_) {
            if (c == '#' || c == '"' || c < 0x20 || c == 0x7f)
                throw InvalidConcept("illegal character in atom name: " + name_);
        }
    }

    const std::string& name() const { return name_; }

    auto operator<=>(const Atom&) const = default;
    bool operator==(const Atom&) const = default;

private:
    std::string name_;
};

inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.name(); }

class ConceptPath {
public:
    // The universal concept T.
    ConceptPath() = default;

    explicit ConceptPath(std::vector<Atom> segments) : segments_(std::move(segments)) {}

    ConceptPath(std::initializer_list<std::string_view> names) {
        segments_.reserve(names.size());
        for (auto n : names) segments_.emplace_back(std::string(n));
    }

    static ConceptPath universal() { return {}; }

    // (head # context), flattening nested chains.
    static ConceptPath of(const ConceptPath& head, const ConceptPath& context) {
        std::vector<Atom> segs = head.segments_;
        segs.insert(segs.end(), context.segments_.begin(), context.segments_.end());
        return ConceptPath(std::move(segs));
    }

    bool is_universal() const { return segments_.empty(); }
    std::size_t size() const { return segments_.size(); }
    const std::vector<Atom>& segments() const { return segments_; }

    // Throws InvalidConcept on T, which has no basic identity.
    const Atom& head() const {
        if (is_universal()) throw InvalidConcept("the universal concept T has no basic identity");
        return segments_.front();
    }

    // Context of T is T.
    ConceptPath context() const {
        if (segments_.size() <= 1) return {};
        return ConceptPath(std::vector<Atom>(segments_.begin() + 1, segments_.end()));
    }

    // True if `other` lies strictly inside this concept's context chain,
    // i.e. this path ends with other's segments and is longer. T is a
    // context-ancestor of every non-universal concept.
    bool is_within(const ConceptPath& other) const {
        if (other.size() >= size()) return false;
        return std::equal(other.segments_.begin(), other.segments_.end(),
                          segments_.end() - static_cast<std::ptrdiff_t>(other.size()));
    }

    // Replace the trailing `from` context with `to`. Requires is_within(from) or equality.
    ConceptPath rebase(const ConceptPath& from, const ConceptPath& to) const {
        std::vector<Atom> segs(segments_.begin(), segments_.end() - static_cast<std::ptrdiff_t>(from.size()));
        segs.insert(segs.end(), to.segments_.begin(), to.segments_.end());
        return ConceptPath(std::move(segs));
    }

    bool has_duplicate_segments() const {
        for (std::size_t i = 0; i < segments_.size(); ++i)
            for (std::size_t j = i + 1; j < segments_.size(); ++j)
                if (segments_[i] == segments_[j]) return true;
        return false;
    }

    // Display notation: "Color # Royal_Elephant # Thailand", "T" for the root.
    std::string display() const {
        if (is_universal()) return std::string(kUniversalName);
        std::string out;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            if (i) out += " # ";
            out += segments_[i].name();
        }
        return out;
    }

    // Declaration-language form: atoms joined by '#', quoted when not identifiers.
    std::string dsl() const {
        if (is_universal()) return std::string(kUniversalName);
        std::string out;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            if (i) out += '#';
            const auto& n = segments_[i].name();
            if (is_ident(n)) {
                out += n;
            } else {
                out += '"';
                out += n;
                out += '"';
            }
        }
        return out;
    }

    auto operator<=>(const ConceptPath&) const = default;
    bool operator==(const ConceptPath&) const = default;

private:
    std::vector<Atom> segments_;
};

inline std::ostream& operator<<(std::ostream& os, const ConceptPath& c) { return os << c.display(); }

// Throws InvalidConcept for an empty sequence; use ConceptPath::universal() for T.
inline ConceptPath mk_concept(std::vector<Atom> segments) {
    if (segments.empty()) throw InvalidConcept("a concept needs at least one segment");
    return ConceptPath(std::move(segments));
}

inline ConceptPath mk_concept(std::initializer_list<std::string_view> names) {
    if (names.size() == 0) throw InvalidConcept("a concept needs at least one segment");
    return ConceptPath(names);
}

inline ConceptPath context_of(const ConceptPath& c) { return c.context(); }

inline const Atom& basic_identity(const ConceptPath& c) { return c.head(); }

// A property of c is a concept whose context is exactly c.
inline bool is_property_of(const ConceptPath& p, const ConceptPath& c) {
    return !p.is_universal() && p.context() == c;
}

enum class Categorizer : std::uint8_t { AKO, PARTOF, EQV, SC };

inline constexpr std::array<Categorizer, 4> kAllCategorizers = {
    Categorizer::AKO, Categorizer::PARTOF, Categorizer::EQV, Categorizer::SC};

inline std::string_view keyword(Categorizer c) {
    switch (c) {
        case Categorizer::AKO: return "ako";
        case Categorizer::PARTOF: return "partof";
        case Categorizer::EQV: return "eqv";
        case Categorizer::SC: return "sc";
    }
    return "?";
}

inline std::optional<Categorizer> categorizer_from_keyword(std::string_view kw) {
    for (auto c : kAllCategorizers)
        if (keyword(c) == kw) return c;
    return std::nullopt;
}

}  // namespace ckn

template <>
struct std::hash<ckn::ConceptPath> {
    std::size_t operator()(const ckn::ConceptPath& c) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (const auto& a : c.segments()) {
            h ^= std::hash<std::string>{}(a.name()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};
