#pragma once
// Qualitative interaction algebra.
//
// Six interaction types, each a pair (temporal precedence, qualitative
// influence). Two binary operators combine them: `chain` for interactions
// composed along a path and `parallel` for the results of alternative paths.
// Both operators are stored as literal 6x6 lookup tables.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "ckn/error.hpp"

namespace ckn {

enum class InteractionSign : std::uint8_t {
    Association = 0,  // a
    Precedence = 1,   // p
    Positive = 2,     // +
    Negative = 3,     // -
    Cause = 4,        // c
    Inhibition = 5,   // i
};

enum class TemporalPrecedence : std::uint8_t { Known, Unknown };
enum class QualInfluence : std::uint8_t { Positive, Negative, Unknown };

inline constexpr std::array<InteractionSign, 6> kAllSigns = {
    InteractionSign::Association, InteractionSign::Precedence, InteractionSign::Positive,
    InteractionSign::Negative,    InteractionSign::Cause,      InteractionSign::Inhibition,
};

constexpr std::size_t index_of(InteractionSign s) { return static_cast<std::size_t>(s); }

constexpr char to_char(InteractionSign s) {
    constexpr std::string_view chars = "ap+-ci";
    return chars[index_of(s)];
}

constexpr std::optional<InteractionSign> sign_from_char(char ch) {
    switch (ch) {
        case 'a': return InteractionSign::Association;
        case 'p': return InteractionSign::Precedence;
        case '+': return InteractionSign::Positive;
        case '-': return InteractionSign::Negative;
        case 'c': return InteractionSign::Cause;
        case 'i': return InteractionSign::Inhibition;
        default: return std::nullopt;
    }
}

// Signs whose temporal order is known; these edges must form a DAG.
constexpr bool is_temporal(InteractionSign s) {
    return s == InteractionSign::Precedence || s == InteractionSign::Cause ||
           s == InteractionSign::Inhibition;
}

constexpr std::pair<TemporalPrecedence, QualInfluence> decompose(InteractionSign s) {
    using T = TemporalPrecedence;
    using Q = QualInfluence;
    switch (s) {
        case InteractionSign::Association: return {T::Unknown, Q::Unknown};
        case InteractionSign::Precedence: return {T::Known, Q::Unknown};
        case InteractionSign::Positive: return {T::Unknown, Q::Positive};
        case InteractionSign::Negative: return {T::Unknown, Q::Negative};
        case InteractionSign::Cause: return {T::Known, Q::Positive};
        case InteractionSign::Inhibition: return {T::Known, Q::Negative};
    }
    return {T::Unknown, Q::Unknown};
}

constexpr InteractionSign compose(TemporalPrecedence t, QualInfluence q) {
    const bool known = t == TemporalPrecedence::Known;
    switch (q) {
        case QualInfluence::Unknown:
            return known ? InteractionSign::Precedence : InteractionSign::Association;
        case QualInfluence::Positive:
            return known ? InteractionSign::Cause : InteractionSign::Positive;
        case QualInfluence::Negative:
            return known ? InteractionSign::Inhibition : InteractionSign::Negative;
    }
    return InteractionSign::Association;
}

namespace detail {

// Rows and columns in the order a p + - c i.
using SignTable = std::array<std::string_view, 6>;

inline constexpr SignTable kChainTable = {
    "aaaaaa",  // a
    "apaapp",  // p
    "aa+-+-",  // +
    "aa-+-+",  // -
    "ap+-ci",  // c
    "ap-+ic",  // i
};

inline constexpr SignTable kParallelTable = {
    "apaapp",  // a
    "pppppp",  // p
    "ap+acp",  // +
    "apa-pi",  // -
    "ppcpcp",  // c
    "pppipi",  // i
};

constexpr InteractionSign lookup(const SignTable& table, InteractionSign row, InteractionSign col) {
    return *sign_from_char(table[index_of(row)][index_of(col)]);
}

}  // namespace detail

// Combines two interactions in series: x along an edge, then y.
constexpr InteractionSign chain(InteractionSign x, InteractionSign y) {
    return detail::lookup(detail::kChainTable, x, y);
}

// Combines the net effects of two alternative paths.
constexpr InteractionSign parallel(InteractionSign x, InteractionSign y) {
    return detail::lookup(detail::kParallelTable, x, y);
}

// Left fold of chain. Throws NoPath on an empty sequence: chain has no identity.
inline InteractionSign chain_fold(std::span<const InteractionSign> signs) {
    if (signs.empty()) throw NoPath();
    InteractionSign acc = signs.front();
    for (auto s : signs.subspan(1)) acc = chain(acc, s);
    return acc;
}

inline InteractionSign parallel_fold(std::span<const InteractionSign> signs) {
    if (signs.empty()) throw NoPath();
    InteractionSign acc = signs.front();
    for (auto s : signs.subspan(1)) acc = parallel(acc, s);
    return acc;
}

}  // namespace ckn
