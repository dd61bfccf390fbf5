#pragma once
// Declaration language (.ckn) lexer, parser and canonical serializer.
//
//   document   := { statement } ;
//   statement  := decl ";" | comment ;
//   decl       := "concept" concept
//               | ("ako"|"partof"|"eqv"|"sc") concept concept
//               | ("assoc"|"precede"|"influence+"|"influence-"|"cause"|"inhibit") concept concept
//               | "value" concept atom ;
//   concept    := atom { "#" atom } ;
//   atom       := IDENT | QUOTED ;
//
// Parsing never stops at the first error; each bad statement yields a
// diagnostic and the parser resynchronizes at the next ';' or at the next
// statement keyword on a later line.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ckn/assertion.hpp"
#include "ckn/concept.hpp"
#include "ckn/error.hpp"

namespace ckn {

struct Span {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t length = 0;
    bool operator==(const Span&) const = default;
};

struct SourceKB {
    std::vector<Declaration> declarations;
    std::vector<Span> spans;  // parallel to declarations; empty for synthesized KBs

    void add(Declaration d, Span s = {}) {
        declarations.push_back(std::move(d));
        spans.push_back(s);
    }
    bool empty() const { return declarations.empty(); }

    // Appends another document's declarations, preserving order.
    void append(const SourceKB& other) {
        declarations.insert(declarations.end(), other.declarations.begin(), other.declarations.end());
        spans.insert(spans.end(), other.spans.begin(), other.spans.end());
    }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity;
    Span span;
    std::string message;
};

inline std::string format_diagnostic(const Diagnostic& d, std::string_view file = {}) {
    std::ostringstream os;
    if (!file.empty()) os << file << ':';
    os << d.span.line << ':' << d.span.column << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message;
    return os.str();
}

struct ParseResult {
    std::optional<SourceKB> kb;  // present iff there are no Error diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return kb.has_value(); }
    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& d : diagnostics) n += d.severity == Severity::Error;
        return n;
    }
};

namespace detail {

enum class TokKind { Ident, Quoted, Hash, Semi, Invalid, End };

struct Token {
    TokKind kind;
    std::string text;  // identifier text, quoted contents, or error message for Invalid
    Span span;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                out.push_back({TokKind::End, {}, {line_, col_, 0}});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    static bool ident_start(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '-'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token next() {
        const Span start{line_, col_, 0};
        const std::size_t begin = pos_;
        char c = src_[pos_];
        auto finish = [&](TokKind k, std::string text) {
            Span s = start;
            s.length = pos_ - begin;
            return Token{k, std::move(text), s};
        };
        if (c == '#') {
            advance();
            return finish(TokKind::Hash, "#");
        }
        if (c == ';') {
            advance();
            return finish(TokKind::Semi, ";");
        }
        if (c == '"') {
            advance();
            std::string text;
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                text += src_[pos_];
                advance();
            }
            if (pos_ >= src_.size() || src_[pos_] != '"') return finish(TokKind::Invalid, "unterminated quote");
            advance();
            return finish(TokKind::Quoted, std::move(text));
        }
        if (ident_start(c)) {
            while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
            std::string text(src_.substr(begin, pos_ - begin));
            // `influence+` is the only token that carries a '+'.
            if (text == "influence" && pos_ < src_.size() && src_[pos_] == '+') {
                advance();
                text += '+';
            }
            return finish(TokKind::Ident, std::move(text));
        }
        advance();
        return finish(TokKind::Invalid, std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

inline bool is_statement_keyword(std::string_view kw) {
    return kw == "concept" || kw == "value" || categorizer_from_keyword(kw) || sign_from_keyword(kw);
}

struct ParseFailure {
    Span span;
    std::string message;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ParseResult run() {
        SourceKB kb;
        while (peek().kind != TokKind::End) {
            const std::size_t start = pos_;
            try {
                Declaration d = statement();
                const Token& semi = peek();
                if (semi.kind != TokKind::Semi) {
                    throw ParseFailure{semi.span, "missing ';' after declaration"};
                }
                ++pos_;
                const Span& s0 = toks_[start].span;
                Span span = s0;
                span.length = semi.span.line == s0.line ? semi.span.column + 1 - s0.column : s0.length;
                kb.add(std::move(d), span);
            } catch (const ParseFailure& f) {
                error(f.span, f.message);
                recover(start);
            }
        }
        ParseResult r;
        r.diagnostics = std::move(diags_);
        if (!has_error_) r.kb = std::move(kb);
        return r;
    }

    // A whole token stream that must be exactly one concept.
    ConceptPath lone_concept() {
        ConceptPath c = concept_path();
        if (peek().kind != TokKind::End) throw ParseFailure{peek().span, "unexpected trailing input"};
        return c;
    }

    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    const Token& peek() const { return toks_[pos_]; }

    void error(Span s, std::string msg) {
        has_error_ = true;
        diags_.push_back({Severity::Error, s, std::move(msg)});
    }

    // Skip to just past the next ';', or to the next statement keyword that
    // begins a later line than the failed statement.
    void recover(std::size_t start) {
        const std::size_t start_line = toks_[start].span.line;
        if (pos_ == start) ++pos_;
        while (peek().kind != TokKind::End) {
            const Token& t = peek();
            if (t.kind == TokKind::Semi) {
                ++pos_;
                return;
            }
            if (t.kind == TokKind::Ident && t.span.line > start_line && is_statement_keyword(t.text)) return;
            ++pos_;
        }
    }

    Declaration statement() {
        const Token& kw = peek();
        if (kw.kind == TokKind::Invalid) throw ParseFailure{kw.span, kw.text};
        if (kw.kind != TokKind::Ident) throw ParseFailure{kw.span, "expected a statement keyword"};
        const std::string word = kw.text;
        ++pos_;
        if (word == "concept") return ConceptDecl{concept_path()};
        if (word == "value") {
            ConceptPath attr = concept_path();
            Atom v = atom();
            return ValueAssignment{std::move(attr), std::move(v)};
        }
        if (auto cat = categorizer_from_keyword(word)) {
            ConceptPath child = concept_path();
            ConceptPath parent = concept_path();
            return Categorization{std::move(child), *cat, std::move(parent)};
        }
        if (auto sign = sign_from_keyword(word)) {
            ConceptPath src = concept_path();
            ConceptPath dst = concept_path();
            return Interaction{std::move(src), *sign, std::move(dst)};
        }
        throw ParseFailure{kw.span, "unknown keyword '" + word + "'"};
    }

    ConceptPath concept_path() {
        const Span start = peek().span;
        std::vector<Atom> segs;
        segs.push_back(atom());
        while (peek().kind == TokKind::Hash) {
            ++pos_;
            segs.push_back(atom());
        }
        ConceptPath c(std::move(segs));
        if (c.has_duplicate_segments()) {
            diags_.push_back({Severity::Warning, start,
                              "concept '" + c.display() + "' repeats a segment in its context chain"});
        }
        return c;
    }

    Atom atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TokKind::Ident:
            case TokKind::Quoted:
                try {
                    Atom a(t.text);
                    ++pos_;
                    return a;
                } catch (const InvalidConcept& e) {
                    throw ParseFailure{t.span, e.what()};
                }
            case TokKind::Invalid: throw ParseFailure{t.span, t.text};
            case TokKind::End: throw ParseFailure{t.span, "unexpected end of input, expected an atom"};
            default: throw ParseFailure{t.span, "expected an atom, found '" + t.text + "'"};
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> diags_;
    bool has_error_ = false;
};

inline std::string render_atom(const Atom& a) {
    return is_ident(a.name()) ? a.name() : '"' + a.name() + '"';
}

}  // namespace detail

inline ParseResult parse(std::string_view text) {
    return detail::Parser(detail::Lexer(text).run()).run();
}

// Parses a single concept written in the declaration syntax ("Teeth#Elephant",
// "Teeth # Elephant"). The bare word T denotes the universal concept.
inline ConceptPath parse_concept(std::string_view text) {
    auto toks = detail::Lexer(text).run();
    if (toks.size() == 2 && toks[0].kind == detail::TokKind::Ident && toks[0].text == kUniversalName)
        return ConceptPath::universal();
    detail::Parser p(std::move(toks));
    try {
        return p.lone_concept();
    } catch (const detail::ParseFailure& f) {
        throw InvalidConcept("malformed concept '" + std::string(text) + "': " + f.message);
    }
}

inline std::string serialize(const Declaration& d) {
    std::string out;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConceptDecl>) {
                out = "concept " + x.concept_path.dsl();
            } else if constexpr (std::is_same_v<T, Categorization>) {
                out = std::string(keyword(x.kind)) + ' ' + x.child.dsl() + ' ' + x.parent.dsl();
            } else if constexpr (std::is_same_v<T, Interaction>) {
                out = std::string(keyword(x.sign)) + ' ' + x.source.dsl() + ' ' + x.target.dsl();
            } else {
                out = "value " + x.attribute.dsl() + ' ' + detail::render_atom(x.value);
            }
        },
        d);
    return out + ';';
}

// Canonical text: one declaration per line, LF line endings.
inline std::string serialize(const SourceKB& kb) {
    std::string out;
    for (const auto& d : kb.declarations) {
        out += serialize(d);
        out += '\n';
    }
    return out;
}

}  // namespace ckn
