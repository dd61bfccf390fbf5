#pragma once
// Inheritance compiler: SourceKB -> CompiledKB.
//
// Every categorization that carries descriptions (AKO, SC, EQV) becomes a copy
// job: the parent's description subtree, with its values and the interactions
// lying wholly inside it, is copied under the child with the parent path
// rewritten to the child path. Jobs run in dependency order so that a
// description is complete before anything copies it. PARTOF records
// membership only.
//
// Each value slot and each ordered interaction pair collects candidates and
// keeps the most specific one:
//   local  >  SC copy  >  AKO copy  >  EQV copy,
// and among copies of the same categorizer, the one copied from the source
// slot with the longer context chain. Distinct values tied at the top rank are
// errors.

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ckn/algebra.hpp"
#include "ckn/assertion.hpp"
#include "ckn/compiled_kb.hpp"
#include "ckn/concept.hpp"
#include "ckn/dsl.hpp"
#include "ckn/error.hpp"

namespace ckn {

struct CompileOptions {
    std::size_t max_depth = 16;
};

struct Conflict {
    ConceptPath concept_path;  // value attribute, or interaction source
    std::string relation;      // "value" or "<sign> <target>"
    Provenance chosen;
    Provenance shadowed;
};

struct CompileStats {
    std::size_t concepts = 0;  // excluding T
    std::size_t categorizations = 0;
    std::size_t interactions = 0;
    std::size_t values = 0;
    std::size_t inherited_interactions = 0;
    std::size_t inherited_values = 0;
};

struct CompileReport {
    std::vector<Conflict> conflicts;
    std::vector<std::string> errors;
    std::vector<std::string> notes;
    CompileStats stats;

    bool ok() const { return errors.empty(); }
};

struct CompileResult {
    CompiledKB kb;
    CompileReport report;
};

struct TemporalViolation {
    InteractionSign sign;
    ConceptPath source;  // the asserted edge source ...
    ConceptPath target;  // ... and target
    std::vector<ConceptPath> precedence_chain;  // target => ... => source over p/c/i edges

    std::string message() const {
        std::string chain;
        for (std::size_t i = 0; i < precedence_chain.size(); ++i) {
            if (i) chain += " => ";
            chain += precedence_chain[i].display();
        }
        return "temporal violation: '" + source.display() + "' " + std::string(keyword(sign)) + " '" +
               target.display() + "' but the target precedes the source: " + chain;
    }
};

struct ScCheckResult {
    std::vector<std::string> violations;
    std::set<ConceptPair> closure;
};

// Violations of temporal ordering: cycles among p/c/i edges, and any non-association
// edge B -> A where A reaches B through p/c/i edges.
inline std::vector<TemporalViolation> check_temporal(const CompiledKB& kb) {
    std::map<ConceptPath, std::vector<ConceptPath>> temporal;
    for (const auto& [k, e] : kb.interactions())
        if (is_temporal(e.sign)) temporal[k.first].push_back(k.second);

    // Shortest p/c/i path from -> to, empty if none.
    auto find_chain = [&](const ConceptPath& from, const ConceptPath& to) {
        std::map<ConceptPath, ConceptPath> parent;
        std::deque<ConceptPath> queue{from};
        std::set<ConceptPath> seen{from};
        while (!queue.empty()) {
            ConceptPath cur = queue.front();
            queue.pop_front();
            auto it = temporal.find(cur);
            if (it == temporal.end()) continue;
            for (const auto& nxt : it->second) {
                if (nxt == to) {
                    std::vector<ConceptPath> chain{to, cur};
                    while (chain.back() != from) chain.push_back(parent.at(chain.back()));
                    std::reverse(chain.begin(), chain.end());
                    return chain;
                }
                if (seen.insert(nxt).second) {
                    parent.emplace(nxt, cur);
                    queue.push_back(nxt);
                }
            }
        }
        return std::vector<ConceptPath>{};
    };

    std::vector<TemporalViolation> out;
    for (const auto& [k, e] : kb.interactions()) {
        if (e.sign == InteractionSign::Association) continue;
        const auto& [source, target] = k;
        if (source == target) {
            if (is_temporal(e.sign)) out.push_back({e.sign, source, target, {source}});
            continue;
        }
        auto chain = find_chain(target, source);
        if (!chain.empty()) out.push_back({e.sign, source, target, std::move(chain)});
    }
    return out;
}

// Irreflexivity and antisymmetry of SC, plus its transitive closure.
inline ScCheckResult check_sc(const CompiledKB& kb) {
    ScCheckResult r;
    std::map<ConceptPath, std::vector<ConceptPath>> adj;
    for (const auto& [child, parent] : kb.categorizations(Categorizer::SC)) {
        adj[child].push_back(parent);
        if (child == parent)
            r.violations.push_back("sc irreflexivity violated: '" + child.display() +
                                   "' is declared a structural copy of itself");
    }
    for (const auto& [start, _] : adj) {
        std::set<ConceptPath> seen;
        std::vector<ConceptPath> stack{start};
        while (!stack.empty()) {
            ConceptPath cur = stack.back();
            stack.pop_back();
            auto it = adj.find(cur);
            if (it == adj.end()) continue;
            for (const auto& nxt : it->second)
                if (seen.insert(nxt).second) stack.push_back(nxt);
        }
        for (const auto& t : seen) r.closure.insert({start, t});
    }
    for (const auto& [a, b] : r.closure) {
        if (a < b && r.closure.contains({b, a}))
            r.violations.push_back("sc antisymmetry violated: '" + a.display() + "' and '" + b.display() +
                                   "' are structural copies of each other");
    }
    return r;
}

namespace detail {

// Returns one cycle (closed vertex list) per strongly tangled region, found by DFS.
inline std::vector<std::vector<ConceptPath>> find_cycles(const std::set<ConceptPair>& edges) {
    std::map<ConceptPath, std::vector<ConceptPath>> adj;
    for (const auto& [a, b] : edges) adj[a].push_back(b);
    enum class Mark { White, Grey, Black };
    std::map<ConceptPath, Mark> mark;
    std::vector<ConceptPath> stack;
    std::vector<std::vector<ConceptPath>> cycles;

    auto visit = [&](auto&& self, const ConceptPath& v) -> void {
        mark[v] = Mark::Grey;
        stack.push_back(v);
        if (auto it = adj.find(v); it != adj.end()) {
            for (const auto& w : it->second) {
                auto m = mark.contains(w) ? mark[w] : Mark::White;
                if (m == Mark::Grey) {
                    auto from = std::find(stack.begin(), stack.end(), w);
                    std::vector<ConceptPath> cyc(from, stack.end());
                    cyc.push_back(w);
                    cycles.push_back(std::move(cyc));
                } else if (m == Mark::White) {
                    self(self, w);
                }
            }
        }
        stack.pop_back();
        mark[v] = Mark::Black;
    };
    for (const auto& [v, _] : adj)
        if (!mark.contains(v)) visit(visit, v);
    return cycles;
}

inline int copy_rank(Categorizer c) {
    switch (c) {
        case Categorizer::SC: return 1;
        case Categorizer::AKO: return 2;
        case Categorizer::EQV: return 3;
        case Categorizer::PARTOF: return 4;
    }
    return 4;
}

template <typename V>
struct Candidate {
    V value;
    Provenance provenance;
    int rank = 0;                  // 0 = local
    std::size_t source_depth = 0;  // segments in the slot the copy came from

    bool outranks(const Candidate& o) const {
        if (rank != o.rank) return rank < o.rank;
        return source_depth > o.source_depth;
    }
    bool same_rank(const Candidate& o) const { return rank == o.rank && source_depth == o.source_depth; }
};

template <typename V>
struct Resolution {
    const Candidate<V>* winner = nullptr;
    std::vector<const Candidate<V>*> losers;
    std::vector<const Candidate<V>*> tied;  // top-ranked candidates disagreeing with the winner
};

template <typename V>
Resolution<V> resolve(const std::vector<Candidate<V>>& cands) {
    Resolution<V> r;
    std::vector<const Candidate<V>*> order;
    for (const auto& c : cands) order.push_back(&c);
    std::sort(order.begin(), order.end(), [](const Candidate<V>* a, const Candidate<V>* b) {
        if (a->outranks(*b)) return true;
        if (b->outranks(*a)) return false;
        if (a->value != b->value) return a->value < b->value;
        return a->provenance < b->provenance;
    });
    r.winner = order.front();
    for (std::size_t i = 1; i < order.size(); ++i) {
        r.losers.push_back(order[i]);
        if (order[i]->same_rank(*r.winner) && order[i]->value != r.winner->value) r.tied.push_back(order[i]);
    }
    return r;
}

template <typename V>
void add_candidate(std::vector<Candidate<V>>& slot, Candidate<V> c) {
    for (const auto& e : slot)
        if (e.value == c.value && e.provenance == c.provenance) return;
    slot.push_back(std::move(c));
}

struct CopyJob {
    ConceptPath target;
    ConceptPath source;
    Categorizer kind;
    bool eqv_broadcast = false;  // rep -> member half of an EQV class
    ConceptPath eqv_class;       // representative, for EQV jobs

    auto tie() const { return std::tie(target, source, kind, eqv_broadcast); }
    bool operator<(const CopyJob& o) const { return tie() < o.tie(); }

    std::string describe() const {
        return "'" + target.display() + "' " + std::string(keyword(kind)) + " '" + source.display() + "'";
    }
};

// x and y share description slots when one lies in the other's context chain.
inline bool overlaps(const ConceptPath& x, const ConceptPath& y) {
    return x == y || x.is_within(y) || y.is_within(x);
}

class Compiler {
public:
    explicit Compiler(CompileOptions opts) : opts_(opts) {}

    CompileResult run(const SourceKB& src) {
        kb_.set_max_depth(opts_.max_depth);
        load_declarations(src);
        check_categorizer_cycles();
        run_copy_jobs();
        finalize_slots();
        check_depth();

        for (const auto& v : check_temporal(kb_)) report_.errors.push_back(v.message());
        auto sc = check_sc(kb_);
        for (auto& v : sc.violations) report_.errors.push_back(std::move(v));
        kb_.set_sc_closure(std::move(sc.closure));

        fill_stats();
        return {std::move(kb_), std::move(report_)};
    }

private:
    void load_declarations(const SourceKB& src) {
        for (const auto& d : src.declarations) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, ConceptDecl>) {
                        kb_.add_concept(x.concept_path);
                    } else if constexpr (std::is_same_v<T, Categorization>) {
                        kb_.add_categorization(x.kind, x.child, x.parent);
                    } else if constexpr (std::is_same_v<T, Interaction>) {
                        kb_.add_concept(x.source);
                        kb_.add_concept(x.target);
                        add_candidate(edge_slots_[interaction_key(x.source, x.sign, x.target)],
                                      Candidate<InteractionSign>{x.sign, Provenance::local(), 0,
                                                                 std::numeric_limits<std::size_t>::max()});
                    } else {
                        kb_.add_concept(x.attribute);
                        add_candidate(value_slots_[x.attribute],
                                      Candidate<Atom>{x.value, Provenance::local(), 0,
                                                      std::numeric_limits<std::size_t>::max()});
                    }
                },
                d);
        }
    }

    void check_categorizer_cycles() {
        for (auto kind : {Categorizer::AKO, Categorizer::PARTOF}) {
            for (const auto& cyc : find_cycles(kb_.categorizations(kind))) {
                std::string s;
                for (std::size_t i = 0; i < cyc.size(); ++i) {
                    if (i) s += " -> ";
                    s += cyc[i].display();
                }
                report_.errors.push_back(std::string(keyword(kind)) + " cycle: " + s);
            }
        }
    }

    std::vector<CopyJob> make_jobs() const {
        std::vector<CopyJob> jobs;
        for (auto kind : {Categorizer::AKO, Categorizer::SC})
            for (const auto& [child, parent] : kb_.categorizations(kind))
                if (child != parent) jobs.push_back({child, parent, kind, false, {}});

        // EQV classes share one description, gathered at the least member and
        // broadcast back to the others.
        std::map<ConceptPath, ConceptPath> uf;
        auto find = [&](ConceptPath x) {
            while (uf.contains(x) && uf[x] != x) x = uf[x];
            return x;
        };
        for (const auto& [a, b] : kb_.categorizations(Categorizer::EQV)) {
            uf.try_emplace(a, a);
            uf.try_emplace(b, b);
            auto ra = find(a), rb = find(b);
            if (ra != rb) uf[std::max(ra, rb)] = std::min(ra, rb);
        }
        for (const auto& [m, _] : uf) {
            auto rep = find(m);
            if (rep == m) continue;
            jobs.push_back({rep, m, Categorizer::EQV, false, rep});
            jobs.push_back({m, rep, Categorizer::EQV, true, rep});
        }
        std::sort(jobs.begin(), jobs.end());
        return jobs;
    }

    void run_copy_jobs() {
        auto jobs = make_jobs();
        const std::size_t n = jobs.size();
        std::vector<std::vector<std::size_t>> after(n);
        std::vector<std::size_t> indegree(n, 0);

        std::vector<bool> invalid(n, false);
        for (std::size_t j = 0; j < n; ++j) {
            if (overlaps(jobs[j].target, jobs[j].source)) {
                invalid[j] = true;
                report_.errors.push_back("self-referential categorization " + jobs[j].describe() +
                                         ": one concept lies in the other's context chain");
            }
        }
        // i must run before j when i writes into the description j reads.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || invalid[i] || invalid[j] || !overlaps(jobs[i].target, jobs[j].source)) continue;
                if (jobs[i].kind == Categorizer::EQV && jobs[j].kind == Categorizer::EQV &&
                    jobs[i].eqv_broadcast && !jobs[j].eqv_broadcast && jobs[i].eqv_class == jobs[j].eqv_class)
                    continue;
                after[i].push_back(j);
                ++indegree[j];
            }
        }

        std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
        for (std::size_t j = 0; j < n; ++j)
            if (indegree[j] == 0 && !invalid[j]) ready.push(j);
        std::vector<bool> done(n, false);
        while (!ready.empty()) {
            auto j = ready.top();
            ready.pop();
            done[j] = true;
            execute(jobs[j]);
            for (auto k : after[j])
                if (--indegree[k] == 0) ready.push(k);
        }
        std::vector<std::string> stuck;
        for (std::size_t j = 0; j < n; ++j)
            if (!done[j] && !invalid[j]) stuck.push_back(jobs[j].describe());
        if (!stuck.empty()) {
            std::string s;
            for (const auto& x : stuck) s += (s.empty() ? "" : ", ") + x;
            report_.errors.push_back("inheritance dependency cycle among: " + s);
        }
    }

    void execute(const CopyJob& job) {
        const auto desc = kb_.context_tree().description_closure(job.source);
        const int rank = copy_rank(job.kind);
        const auto prov = Provenance::inherited(job.source, job.kind);

        for (const auto& d : desc) {
            auto copy = d.rebase(job.source, job.target);
            if (copy.size() > opts_.max_depth) {
                depth_errors_.insert(copy);
                continue;
            }
            kb_.add_concept(copy);
            if (auto it = value_slots_.find(d); it != value_slots_.end()) {
                auto r = resolve(it->second);
                add_candidate(value_slots_[copy], Candidate<Atom>{r.winner->value, prov, rank, d.size()});
            }
        }

        std::vector<std::pair<ConceptPair, Candidate<InteractionSign>>> copies;
        for (const auto& [key, cands] : edge_slots_) {
            const bool in_src = desc.contains(key.first);
            const bool in_dst = desc.contains(key.second);
            if (!in_src && !in_dst) continue;
            auto r = resolve(cands);
            if (in_src != in_dst) {
                report_.notes.push_back("boundary edge not copied by " + job.describe() + ": '" +
                                        key.first.display() + "' " + std::string(keyword(r.winner->value)) +
                                        " '" + key.second.display() + "'");
                continue;
            }
            auto s = key.first.rebase(job.source, job.target);
            auto t = key.second.rebase(job.source, job.target);
            if (s.size() > opts_.max_depth || t.size() > opts_.max_depth) continue;
            copies.push_back({interaction_key(s, r.winner->value, t),
                              Candidate<InteractionSign>{r.winner->value, prov, rank,
                                                         std::max(key.first.size(), key.second.size())}});
        }
        for (auto& [k, c] : copies) add_candidate(edge_slots_[k], std::move(c));
    }

    template <typename V, typename Render>
    void record_shadowing(const ConceptPath& where, const std::string& relation, const Resolution<V>& r,
                          std::vector<Provenance>& shadowed, Render render) {
        for (const auto* l : r.losers) {
            shadowed.push_back(l->provenance);
            if (l->value != r.winner->value)
                report_.conflicts.push_back({where, relation, r.winner->provenance, l->provenance});
        }
        for (const auto* t : r.tied) {
            report_.errors.push_back("conflicting " + relation + " for '" + where.display() + "': " +
                                     render(r.winner->value) + " (" + r.winner->provenance.describe() + ") vs " +
                                     render(t->value) + " (" + t->provenance.describe() + ")");
        }
    }

    void finalize_slots() {
        for (const auto& [attr, cands] : value_slots_) {
            auto r = resolve(cands);
            ValueEntry e{r.winner->value, r.winner->provenance, {}};
            record_shadowing(attr, "value", r, e.shadowed, [](const Atom& a) { return a.name(); });
            kb_.set_value(attr, std::move(e));
        }
        for (const auto& [key, cands] : edge_slots_) {
            auto r = resolve(cands);
            EdgeEntry e{r.winner->value, r.winner->provenance, {}};
            record_shadowing(key.first, "interaction with '" + key.second.display() + "'", r, e.shadowed,
                             [](InteractionSign s) { return std::string(keyword(s)); });
            kb_.set_interaction(key.first, key.second, std::move(e));
        }
    }

    void check_depth() {
        for (const auto& c : kb_.context_tree().nodes())
            if (c.size() > opts_.max_depth) depth_errors_.insert(c);
        for (const auto& c : depth_errors_)
            report_.errors.push_back("context chain of '" + c.display() + "' exceeds the depth limit of " +
                                     std::to_string(opts_.max_depth));
    }

    void fill_stats() {
        auto& s = report_.stats;
        s.concepts = kb_.context_tree().size() - 1;
        for (auto c : kAllCategorizers) s.categorizations += kb_.categorizations(c).size();
        s.interactions = kb_.interactions().size();
        s.values = kb_.values().size();
        for (const auto& [_, e] : kb_.interactions()) s.inherited_interactions += !e.provenance.is_local();
        for (const auto& [_, v] : kb_.values()) s.inherited_values += !v.provenance.is_local();
    }

    CompileOptions opts_;
    CompiledKB kb_;
    CompileReport report_;
    std::map<ConceptPath, std::vector<Candidate<Atom>>> value_slots_;
    std::map<ConceptPair, std::vector<Candidate<InteractionSign>>> edge_slots_;
    std::set<ConceptPath> depth_errors_;
};

}  // namespace detail

inline CompileResult compile(const SourceKB& src, CompileOptions opts = {}) {
    return detail::Compiler(opts).run(src);
}

// Seals a successful compilation. Throws FreezeError if the report has errors.
inline FrozenKB freeze(CompileResult result) {
    if (!result.report.ok()) {
        std::string msg = "cannot freeze a knowledge base with " + std::to_string(result.report.errors.size()) +
                          " compile error(s)";
        if (!result.report.errors.empty()) msg += ": " + result.report.errors.front();
        throw FreezeError(msg);
    }
    return FrozenKB(std::make_shared<const CompiledKB>(std::move(result.kb)));
}

// Convenience: parse + compile + freeze, throwing on any error.
inline FrozenKB build(std::string_view text, CompileOptions opts = {}) {
    auto parsed = parse(text);
    if (!parsed.ok()) {
        std::string msg = "parse failed";
        for (const auto& d : parsed.diagnostics)
            if (d.severity == Severity::Error) msg += "\n  " + format_diagnostic(d);
        throw Error(msg);
    }
    return freeze(compile(*parsed.kb, opts));
}

}  // namespace ckn
