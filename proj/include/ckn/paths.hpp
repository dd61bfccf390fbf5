#pragma once
// Simple-path enumeration over signed interaction graphs and net-effect folding.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ckn/algebra.hpp"

namespace ckn {

template <typename Vertex>
struct SignedPath {
    std::vector<Vertex> vertices;
    std::vector<InteractionSign> signs;  // signs[k] labels vertices[k] -> vertices[k+1]
    InteractionSign fold = InteractionSign::Association;

    std::size_t length() const { return signs.size(); }
    bool operator==(const SignedPath&) const = default;
};

template <typename Vertex>
struct NetResult {
    std::optional<InteractionSign> net;  // empty iff there is no path
    std::vector<SignedPath<Vertex>> paths;
};

// Adjacency of a signed multigraph. Association edges are traversable both ways.
template <typename Vertex>
class SignedGraph {
public:
    using Arc = std::pair<Vertex, InteractionSign>;

    void add_edge(const Vertex& source, InteractionSign sign, const Vertex& target) {
        if (source == target) return;
        out_[source].push_back({target, sign});
        if (sign == InteractionSign::Association) out_[target].push_back({source, sign});
        sorted_ = false;
    }

    const std::vector<Arc>& out(const Vertex& v) const {
        static const std::vector<Arc> none;
        sort_once();
        auto it = out_.find(v);
        return it == out_.end() ? none : it->second;
    }

    bool has_vertex_edges(const Vertex& v) const { return out_.contains(v); }

private:
    void sort_once() const {
        if (sorted_) return;
        for (auto& [_, arcs] : out_) {
            std::sort(arcs.begin(), arcs.end());
            arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
        }
        sorted_ = true;
    }

    mutable std::map<Vertex, std::vector<Arc>> out_;
    mutable bool sorted_ = true;
};

// Every simple directed path from `from` to `to` with at most max_len edges,
// in lexicographic order of (vertex, sign) choices.
template <typename Vertex>
std::vector<SignedPath<Vertex>> enumerate_simple_paths(const SignedGraph<Vertex>& g, const Vertex& from,
                                                       const Vertex& to, std::size_t max_len) {
    std::vector<SignedPath<Vertex>> out;
    if (from == to || max_len == 0) return out;
    std::vector<Vertex> verts{from};
    std::vector<InteractionSign> signs;
    std::set<Vertex> on_path{from};

    auto dfs = [&](auto&& self, const Vertex& v) -> void {
        for (const auto& [w, s] : g.out(v)) {
            if (on_path.contains(w)) continue;
            signs.push_back(s);
            verts.push_back(w);
            if (w == to) {
                out.push_back({verts, signs, chain_fold(signs)});
            } else if (signs.size() < max_len) {
                on_path.insert(w);
                self(self, w);
                on_path.erase(w);
            }
            verts.pop_back();
            signs.pop_back();
        }
    };
    dfs(dfs, from);
    return out;
}

template <typename Vertex>
NetResult<Vertex> net_interaction(std::vector<SignedPath<Vertex>> paths) {
    NetResult<Vertex> r;
    if (!paths.empty()) {
        std::vector<InteractionSign> folds;
        folds.reserve(paths.size());
        for (const auto& p : paths) folds.push_back(p.fold);
        r.net = parallel_fold(folds);
    }
    r.paths = std::move(paths);
    return r;
}

}  // namespace ckn
