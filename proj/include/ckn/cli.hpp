#pragma once
// Command-line front end: build, check, query, formulate, export, repl.
//
// Exit codes: 0 success, 1 usage or I/O, 2 parse/compile/consistency,
// 3 query-time error. `run` takes its streams as arguments so the whole CLI is
// testable in-process.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ckn/compiler.hpp"
#include "ckn/dsl.hpp"
#include "ckn/formulate.hpp"
#include "ckn/query.hpp"
#include "ckn/snapshot.hpp"

namespace ckn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCompile = 2;
inline constexpr int kExitQuery = 3;
inline constexpr int kOutputVersion = 1;

inline constexpr const char* kSnapshotEnv = "CKN_SNAPSHOT";
inline constexpr const char* kDefaultSnapshot = "kb.snapshot.json";

struct KbSource {
    std::vector<std::string> kb_paths;
    std::string snapshot;
    std::size_t max_depth = 16;
};

struct QueryArgs {
    std::string cat = "ako";
    std::vector<std::string> concepts;
    bool ancestors = false;
    bool descendants = false;
    std::string sign = "any";
    bool affects = false;
    bool affected_by = false;
    std::size_t max_path_len = kDefaultMaxPathLen;
    std::string format = "text";
};

namespace detail {

using nlohmann::json;

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

struct Failure {
    int code;
    std::string message;
};

// Parses every file; diagnostics go to err. Throws Failure.
inline SourceKB parse_files(const std::vector<std::string>& paths, std::ostream& err) {
    SourceKB all;
    bool failed = false;
    for (const auto& p : paths) {
        auto text = read_file(p);
        if (!text) throw Failure{kExitUsage, "cannot read '" + p + "'"};
        auto r = parse(*text);
        for (const auto& d : r.diagnostics) err << format_diagnostic(d, p) << "\n";
        if (r.ok()) all.append(*r.kb);
        else failed = true;
    }
    if (failed) throw Failure{kExitCompile, "parse failed"};
    return all;
}

inline void print_report(const CompileReport& r, std::ostream& out, std::ostream& err) {
    const auto& s = r.stats;
    out << "concepts: " << s.concepts << "\n"
        << "categorizations: " << s.categorizations << "\n"
        << "interactions: " << s.interactions << " (" << s.inherited_interactions << " inherited)\n"
        << "values: " << s.values << " (" << s.inherited_values << " inherited)\n";
    for (const auto& c : r.conflicts)
        out << "override: " << c.relation << " of " << c.concept_path.display() << ": " << c.chosen.describe()
            << " shadows " << c.shadowed.describe() << "\n";
    if (!r.notes.empty()) out << "notes: " << r.notes.size() << " boundary edge(s) not copied\n";
    for (const auto& e : r.errors) err << "error: " << e << "\n";
    out << r.errors.size() << " errors\n";
}

// Loads the KB from source files or a snapshot. Throws Failure.
inline FrozenKB load_kb(const KbSource& src, std::ostream& err) {
    if (!src.kb_paths.empty()) {
        auto parsed = parse_files(src.kb_paths, err);
        auto result = compile(parsed, {src.max_depth});
        if (!result.report.ok()) {
            for (const auto& e : result.report.errors) err << "error: " << e << "\n";
            throw Failure{kExitCompile, "compilation failed"};
        }
        return freeze(std::move(result));
    }
    std::string path = src.snapshot;
    if (path.empty()) {
        const char* env = std::getenv(kSnapshotEnv);
        path = env && *env ? env : kDefaultSnapshot;
    }
    auto text = read_file(path);
    if (!text) throw Failure{kExitUsage, "cannot read snapshot '" + path + "'"};
    try {
        return load_snapshot(*text);
    } catch (const SnapshotError& e) {
        throw Failure{kExitUsage, e.what()};
    }
}

inline void add_kb_options(CLI::App& app, KbSource& src) {
    app.add_option("--kb", src.kb_paths, "Knowledge base source file(s) to compile instead of a snapshot");
    app.add_option("--snapshot", src.snapshot, "Compiled snapshot (default: $CKN_SNAPSHOT or kb.snapshot.json)");
    app.add_option("--max-depth", src.max_depth, "Maximum context-chain length")->check(CLI::PositiveNumber);
}

inline json path_json(const InteractionPath& p) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(v.dsl());
    std::string signs;
    for (auto s : p.signs) signs += to_char(s);
    return {{"vertices", verts}, {"signs", signs}, {"fold", std::string(1, to_char(p.fold))}};
}

inline std::string path_text(const InteractionPath& p) {
    std::string s = p.vertices.front().display();
    for (std::size_t i = 0; i < p.signs.size(); ++i)
        s += std::string(" -[") + to_char(p.signs[i]) + "]-> " + p.vertices[i + 1].display();
    return s + "  => " + to_char(p.fold);
}

inline void print_net(const NetInteractionResult& r, const std::string& format, json base, std::ostream& out) {
    if (format == "json") {
        base["net"] = r.net ? json(std::string(1, to_char(*r.net))) : json(nullptr);
        json paths = json::array();
        for (const auto& p : r.paths) paths.push_back(path_json(p));
        base["paths"] = std::move(paths);
        out << base.dump() << "\n";
        return;
    }
    out << "net: " << (r.net ? std::string(1, to_char(*r.net)) : std::string("none")) << "\n";
    out << "paths: " << r.paths.size() << "\n";
    for (const auto& p : r.paths) out << "  " << path_text(p) << "\n";
}

inline Categorizer parse_categorizer(const std::string& s) {
    if (auto c = categorizer_from_keyword(s)) return *c;
    throw Failure{kExitUsage, "unknown categorizer '" + s + "' (expected ako, partof, eqv or sc)"};
}

inline std::optional<InteractionSign> parse_sign_filter(const std::string& s) {
    if (s == "any") return std::nullopt;
    if (s.size() == 1)
        if (auto sign = sign_from_char(s[0])) return sign;
    if (auto sign = sign_from_keyword(s)) return sign;
    throw Failure{kExitUsage, "unknown interaction sign '" + s + "'"};
}

// Registers q1..q4 under `parent`; the chosen form is the parsed subcommand.
inline void add_query_forms(CLI::App& parent, QueryArgs& a) {
    auto common = [&](CLI::App* q) {
        q->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        q->add_option("--max-path-len", a.max_path_len, "Maximum interaction path length")
            ->check(CLI::PositiveNumber);
    };
    auto* q1 = parent.add_subcommand("q1", "Does A relate to B by a categorizer?");
    q1->add_option("--cat", a.cat, "Categorizer: ako, partof, eqv, sc")->required();
    q1->add_option("concepts", a.concepts, "A B")->required()->expected(2);
    common(q1);

    auto* q2 = parent.add_subcommand("q2", "Concepts related to A by a categorizer");
    q2->add_option("--cat", a.cat, "Categorizer: ako, partof, eqv, sc")->required();
    q2->add_option("concepts", a.concepts, "A")->required()->expected(1);
    auto* anc = q2->add_flag("--ancestors", a.ancestors, "Concepts A relates to");
    auto* desc = q2->add_flag("--descendants", a.descendants, "Concepts relating to A (default)");
    anc->excludes(desc);
    common(q2);

    auto* q3 = parent.add_subcommand("q3", "Net interaction from A to B");
    q3->add_option("concepts", a.concepts, "A B")->required()->expected(2);
    common(q3);

    auto* q4 = parent.add_subcommand("q4", "Concepts related to A by an interaction");
    q4->add_option("concepts", a.concepts, "A")->required()->expected(1);
    q4->add_option("--sign", a.sign, "Interaction sign filter: a p + - c i, or any");
    auto* aff = q4->add_flag("--affects", a.affects, "Concepts A affects (default)");
    auto* by = q4->add_flag("--affected-by", a.affected_by, "Concepts affecting A");
    aff->excludes(by);
    common(q4);
    parent.require_subcommand(1);
}

inline ConceptPath concept_arg(const std::string& s) {
    try {
        return parse_concept(s);
    } catch (const InvalidConcept& e) {
        throw Failure{kExitQuery, e.what()};
    }
}

// Runs one parsed query form. Throws Failure.
inline void execute_query(const std::string& form, const QueryArgs& a, const CompiledKB& kb, std::ostream& out) {
    std::vector<ConceptPath> cs;
    for (const auto& s : a.concepts) cs.push_back(concept_arg(s));
    json base{{"version", kOutputVersion}, {"query", form}};
    try {
        if (form == "q1") {
            const auto cat = parse_categorizer(a.cat);
            const bool r = q1(kb, cs[0], cs[1], cat);
            if (a.format == "json") {
                base.update({{"a", cs[0].dsl()}, {"b", cs[1].dsl()}, {"cat", a.cat}, {"result", r}});
                out << base.dump() << "\n";
            } else {
                out << (r ? "true" : "false") << "\n";
            }
        } else if (form == "q2") {
            const auto cat = parse_categorizer(a.cat);
            const auto dir = a.ancestors ? CategoryDirection::Ancestors : CategoryDirection::Descendants;
            const auto r = q2(kb, cs[0], cat, dir);
            if (a.format == "json") {
                json items = json::array();
                for (const auto& c : r) items.push_back(c.dsl());
                base.update({{"a", cs[0].dsl()},
                             {"cat", a.cat},
                             {"direction", a.ancestors ? "ancestors" : "descendants"},
                             {"result", items}});
                out << base.dump() << "\n";
            } else {
                for (const auto& c : r) out << c.display() << "\n";
            }
        } else if (form == "q3") {
            if (cs[0] == cs[1]) throw Failure{kExitUsage, "q3 needs two distinct concepts"};
            const auto r = q3(kb, cs[0], cs[1], a.max_path_len);
            base.update({{"a", cs[0].dsl()}, {"b", cs[1].dsl()}});
            print_net(r, a.format, base, out);
        } else {
            const auto filter = parse_sign_filter(a.sign);
            const auto dir = a.affected_by ? InteractionDirection::AffectedBy : InteractionDirection::Affects;
            const auto r = q4(kb, cs[0], filter, dir, a.max_path_len);
            if (a.format == "json") {
                json items = json::array();
                for (const auto& sc : r)
                    items.push_back({{"concept", sc.concept_path.dsl()}, {"net", std::string(1, to_char(sc.net))}});
                base.update({{"a", cs[0].dsl()},
                             {"sign", a.sign},
                             {"direction", a.affected_by ? "affected-by" : "affects"},
                             {"result", items}});
                out << base.dump() << "\n";
            } else {
                for (const auto& sc : r) out << to_char(sc.net) << "\t" << sc.concept_path.display() << "\n";
            }
        }
    } catch (const UnknownConcept& e) {
        throw Failure{kExitQuery, e.what()};
    } catch (const QueryError& e) {
        throw Failure{kExitQuery, e.what()};
    }
}

inline std::string parsed_form(const CLI::App& parent) {
    for (const auto* sub : parent.get_subcommands())
        if (sub->parsed()) return sub->get_name();
    return {};
}

// Splits a REPL line into words; single or double quotes group, backslash escapes.
inline std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> words;
    std::string cur;
    bool in_word = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
            else cur += c;
        } else if (c == '\'' || c == '"') {
            quote = c;
            in_word = true;
        } else if (c == '\\' && i + 1 < line.size()) {
            cur += line[++i];
            in_word = true;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            if (in_word) words.push_back(std::move(cur));
            cur.clear();
            in_word = false;
        } else {
            cur += c;
            in_word = true;
        }
    }
    if (in_word) words.push_back(std::move(cur));
    return words;
}

// Parses and runs one query line in a fresh parser, as the REPL does.
inline int query_line(const std::vector<std::string>& words, const CompiledKB& kb, std::ostream& out,
                      std::ostream& err) {
    CLI::App app{"query", "query"};
    QueryArgs a;
    add_query_forms(app, a);
    std::vector<std::string> rev(words.rbegin(), words.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        execute_query(parsed_form(app), a, kb, out);
        return kExitOk;
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    }
}

}  // namespace detail

// Entry point. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Context-sensitive knowledge network engine", "ckn"};
    app.require_subcommand(1);

    // build / check
    std::vector<std::string> build_files;
    std::string build_out;
    std::size_t build_depth = 16;
    auto* build = app.add_subcommand("build", "Parse, compile and freeze a knowledge base into a snapshot");
    auto* check = app.add_subcommand("check", "Parse and compile a knowledge base, reporting problems");
    for (auto* c : {build, check}) {
        c->add_option("files", build_files, "Knowledge base source files (.ckn)")->required();
        c->add_option("--max-depth", build_depth, "Maximum context-chain length")->check(CLI::PositiveNumber);
    }
    build->add_option("--out", build_out, "Snapshot path (default: $CKN_SNAPSHOT or kb.snapshot.json)");

    // query
    KbSource query_src;
    QueryArgs qargs;
    auto* query = app.add_subcommand("query", "Run Q1-Q4 against a knowledge base");
    add_kb_options(*query, query_src);
    add_query_forms(*query, qargs);
    for (auto* sub : query->get_subcommands()) sub->fallthrough();

    // formulate
    KbSource form_src;
    std::vector<std::string> decisions;
    std::string value_arg, context_arg, model_out, dot_out, form_format = "text";
    std::size_t depth = 3;
    bool expand = false;
    auto* form = app.add_subcommand("formulate", "Extract a decision model from a knowledge base");
    add_kb_options(*form, form_src);
    form->add_option("--decision", decisions, "Decision concept (repeatable)")->required();
    form->add_option("--value", value_arg, "Value concept")->required();
    form->add_option("--depth", depth, "Interaction hops to follow")->check(CLI::PositiveNumber);
    form->add_option("--context", context_arg, "Restrict the model to this context");
    form->add_flag("--expand-specializations", expand, "Add AKO descendants of chance nodes");
    form->add_option("--out", model_out, "Write the structured model (JSON) here");
    form->add_option("--dot", dot_out, "Write a Graphviz rendering here");
    form->add_option("--format", form_format, "Output format")->check(CLI::IsMember({"text", "json"}));

    // export
    std::string export_model, export_format = "dot", export_out;
    auto* exp = app.add_subcommand("export", "Render a decision model as Graphviz or canonical JSON");
    exp->add_option("--model", export_model, "Decision model JSON file")->required();
    exp->add_option("--format", export_format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    exp->add_option("--out", export_out, "Output file (default: standard output)");

    // repl
    KbSource repl_src;
    auto* repl = app.add_subcommand("repl", "Answer queries read one per line from standard input");
    add_kb_options(*repl, repl_src);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (build->parsed() || check->parsed()) {
            const SourceKB src = parse_files(build_files, err);
            auto result = compile(src, {build_depth});
            print_report(result.report, out, err);
            if (!result.report.ok()) return kExitCompile;
            if (build->parsed()) {
                std::string path = build_out;
                if (path.empty()) {
                    const char* env = std::getenv(kSnapshotEnv);
                    path = env && *env ? env : kDefaultSnapshot;
                }
                auto frozen = freeze(std::move(result));
                if (!write_file(path, to_snapshot(*frozen))) throw Failure{kExitUsage, "cannot write '" + path + "'"};
                out << "snapshot: " << path << "\n";
            }
            return kExitOk;
        }

        if (query->parsed()) {
            auto kb = load_kb(query_src, err);
            execute_query(parsed_form(*query), qargs, *kb, out);
            return kExitOk;
        }

        if (form->parsed()) {
            auto kb = load_kb(form_src, err);
            FormulationSpec spec;
            try {
                for (const auto& d : decisions) spec.decisions.push_back(parse_concept(d));
                spec.value = parse_concept(value_arg);
                if (!context_arg.empty()) spec.context_filter = parse_concept(context_arg);
            } catch (const InvalidConcept& e) {
                throw Failure{kExitUsage, e.what()};
            }
            spec.depth = depth;
            spec.expand_specializations = expand;
            DecisionModel model;
            try {
                model = formulate(*kb, spec);
            } catch (const UnknownConcept& e) {
                throw Failure{kExitUsage, e.what()};
            } catch (const FormulationError& e) {
                throw Failure{kExitQuery, e.what()};
            }
            if (!model_out.empty() && !write_file(model_out, to_json(model)))
                throw Failure{kExitUsage, "cannot write '" + model_out + "'"};
            if (!dot_out.empty() && !write_file(dot_out, to_dot(model)))
                throw Failure{kExitUsage, "cannot write '" + dot_out + "'"};
            if (form_format == "json") {
                out << to_json(model);
                return kExitOk;
            }
            out << "nodes: " << model.nodes.size() << " (decision " << model.count(NodeKind::Decision)
                << ", chance " << model.count(NodeKind::Chance) << ", value " << model.count(NodeKind::Value)
                << ")\n";
            for (const auto& [c, k] : model.nodes) out << "  " << to_string(k) << "\t" << c.display() << "\n";
            out << "arcs: " << model.arcs.size() << "\n";
            for (const auto& a : model.arcs)
                out << "  " << a.source.display() << " " << to_char(a.sign) << " " << a.target.display() << "\n";
            out << "trace: " << model.trace.size() << " entries\n";
            return kExitOk;
        }

        if (exp->parsed()) {
            auto text = read_file(export_model);
            if (!text) throw Failure{kExitUsage, "cannot read '" + export_model + "'"};
            DecisionModel model;
            try {
                model = model_from_json(*text);
            } catch (const FormulationError& e) {
                throw Failure{kExitUsage, e.what()};
            }
            const std::string doc = export_format == "dot" ? to_dot(model) : to_json(model);
            if (export_out.empty()) out << doc;
            else if (!write_file(export_out, doc)) throw Failure{kExitUsage, "cannot write '" + export_out + "'"};
            return kExitOk;
        }

        if (repl->parsed()) {
            auto kb = load_kb(repl_src, err);
            std::string line;
            for (;;) {
                err << "ckn> " << std::flush;
                if (!std::getline(in, line)) break;
                auto words = split_words(line);
                if (words.empty()) continue;
                if (words.front() == ":quit") break;
                query_line(words, *kb, out, err);
            }
            return kExitOk;
        }
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const FreezeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitCompile;
    }
    return kExitUsage;
}

}  // namespace ckn::cli
