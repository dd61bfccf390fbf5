#pragma once
// Declarations: the vocabulary a knowledge base is written in.

#include <string>
#include <string_view>
#include <variant>

#include "ckn/algebra.hpp"
#include "ckn/concept.hpp"

namespace ckn {

// Explicit `concept X;` declaration.
struct ConceptDecl {
    ConceptPath concept_path;
    bool operator==(const ConceptDecl&) const = default;
};

// child <kind> parent, e.g. Royal_Elephant AKO Elephant.
struct Categorization {
    ConceptPath child;
    Categorizer kind;
    ConceptPath parent;
    bool operator==(const Categorization&) const = default;
};

struct Interaction {
    ConceptPath source;
    InteractionSign sign;
    ConceptPath target;
    bool operator==(const Interaction&) const = default;
};

// "color of royal elephant is white".
struct ValueAssignment {
    ConceptPath attribute;
    Atom value;
    bool operator==(const ValueAssignment&) const = default;
};

using Declaration = std::variant<ConceptDecl, Categorization, Interaction, ValueAssignment>;

// Relation keyword of the declaration language for each interaction sign.
inline std::string_view keyword(InteractionSign s) {
    switch (s) {
        case InteractionSign::Association: return "assoc";
        case InteractionSign::Precedence: return "precede";
        case InteractionSign::Positive: return "influence+";
        case InteractionSign::Negative: return "influence-";
        case InteractionSign::Cause: return "cause";
        case InteractionSign::Inhibition: return "inhibit";
    }
    return "?";
}

inline std::optional<InteractionSign> sign_from_keyword(std::string_view kw) {
    for (auto s : kAllSigns)
        if (keyword(s) == kw) return s;
    return std::nullopt;
}

}  // namespace ckn
