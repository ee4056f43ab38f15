#include "dlas/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "dlas/rng.hpp"

namespace dlas {

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    auto last = std::unique(ids_.begin(), ids_.end());
    if (last != ids_.end()) throw ConfigError("duplicate vertex in vertex set");
}

VertexSet VertexSet::all(int vertex_count) {
    std::vector<Vertex> ids(static_cast<std::size_t>(vertex_count));
    std::iota(ids.begin(), ids.end(), 0);
    return VertexSet(std::move(ids));
}

bool VertexSet::contains(Vertex v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
}

Graph::Builder::Builder(int vertex_count) : n_(vertex_count) {
    if (vertex_count <= 0) throw ConfigError("graph needs at least one vertex");
    adj_.resize(static_cast<std::size_t>(n_));
    labels_.resize(static_cast<std::size_t>(n_));
    coords_.resize(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) {
        labels_[static_cast<std::size_t>(v)] = static_cast<std::uint64_t>(v);
        coords_[static_cast<std::size_t>(v)] = v;
    }
}

Graph::Builder& Graph::Builder::add_edge(Vertex a, Vertex b) {
    if (a == b) throw ConfigError("self-loop rejected");
    if (a < 0 || a >= n_ || b < 0 || b >= n_) throw ConfigError("edge endpoint out of range");
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
    return *this;
}

Graph::Builder& Graph::Builder::add_arc(Vertex from, Vertex to) {
    if (from == to) throw ConfigError("self-loop rejected");
    if (from < 0 || from >= n_ || to < 0 || to >= n_) throw ConfigError("arc endpoint out of range");
    adj_[static_cast<std::size_t>(from)].push_back(to);
    return *this;
}

Graph::Builder& Graph::Builder::set_root(Vertex v) {
    root_ = v;
    return *this;
}

Graph::Builder& Graph::Builder::set_directed_to_root(bool on) {
    directed_ = on;
    return *this;
}

Graph::Builder& Graph::Builder::set_stream_label(Vertex v, std::uint64_t label) {
    labels_.at(static_cast<std::size_t>(v)) = label;
    return *this;
}

Graph::Builder& Graph::Builder::set_coordinate(Vertex v, std::int64_t coord) {
    coords_.at(static_cast<std::size_t>(v)) = coord;
    return *this;
}

Graph Graph::Builder::build() && {
    if (directed_ && !root_) throw ConfigError("directed_to_root graph needs a root");
    Graph g;
    g.root_ = root_;
    g.directed_ = directed_;
    g.labels_ = std::move(labels_);
    g.coords_ = std::move(coords_);
    g.offsets_.reserve(static_cast<std::size_t>(n_) + 1);
    g.offsets_.push_back(0);
    for (int v = 0; v < n_; ++v) {
        auto& nb = adj_[static_cast<std::size_t>(v)];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        g.flat_.insert(g.flat_.end(), nb.begin(), nb.end());
        g.offsets_.push_back(static_cast<std::int32_t>(g.flat_.size()));
    }
    if (directed_) {
        for (int v = 0; v < n_; ++v) {
            std::size_t deg = g.neighbors(v).size();
            if (v == *g.root_ ? deg != 0 : deg != 1)
                throw ConfigError("directed_to_root graph must give every non-root vertex "
                                  "exactly one parent and the root none");
        }
    }
    return g;
}

Vertex Graph::vertex_at(std::int64_t coord) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (coords_[static_cast<std::size_t>(v)] == coord) return v;
    return kNoVertex;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (int v = 0; v < vertex_count(); ++v)
        for (Vertex w : neighbors(v))
            if (directed_ || v < w) out.emplace_back(v, w);
    return out;
}

Graph build_interval(std::int64_t lo, std::int64_t hi) {
    if (lo >= hi) throw ConfigError("interval requires lo < hi");
    int n = static_cast<int>(hi - lo + 1);
    Graph::Builder b(n);
    for (int v = 0; v + 1 < n; ++v) b.add_edge(v, v + 1);
    for (int v = 0; v < n; ++v) {
        std::int64_t coord = lo + v;
        b.set_coordinate(v, coord);
        // zig-zag keeps negative coordinates distinct from positive ones
        std::uint64_t z = static_cast<std::uint64_t>((coord << 1) ^ (coord >> 63));
        b.set_stream_label(v, rng::mix64(z + 0x5151'0AD5ULL));
    }
    return std::move(b).build();
}

Graph build_lattice_box(const std::vector<int>& dims) {
    if (dims.empty()) throw ConfigError("lattice box needs at least one dimension");
    long long n = 1;
    for (int d : dims) {
        if (d < 1) throw ConfigError("lattice box dimensions must be >= 1");
        n *= d;
    }
    if (n > (1 << 24)) throw ConfigError("lattice box too large");
    Graph::Builder b(static_cast<int>(n));
    // mixed-radix linear index; +1 step in one axis is a +stride edge
    std::vector<long long> stride(dims.size());
    stride[0] = 1;
    for (std::size_t k = 1; k < dims.size(); ++k) stride[k] = stride[k - 1] * dims[k - 1];
    for (long long v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < dims.size(); ++k) {
            long long coord = (v / stride[k]) % dims[k];
            if (coord + 1 < dims[k])
                b.add_edge(static_cast<Vertex>(v), static_cast<Vertex>(v + stride[k]));
        }
        b.set_coordinate(static_cast<Vertex>(v), v);
        b.set_stream_label(static_cast<Vertex>(v),
                           rng::mix64(static_cast<std::uint64_t>(v) + 0xB0D5'1CEDULL));
    }
    return std::move(b).build();
}

Graph sample_galton_watson(const Pmf& offspring, int max_depth, std::uint64_t seed,
                           bool directed_to_root) {
    if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (offspring.min_value() < 0) throw ConfigError("offspring pmf must be on nonnegative integers");
    // Level-order: node i draws its offspring count from key (seed, i).
    std::vector<Vertex> parent{kNoVertex};
    std::vector<int> depth{0};
    std::deque<Vertex> frontier{0};
    while (!frontier.empty()) {
        Vertex v = frontier.front();
        frontier.pop_front();
        if (depth[static_cast<std::size_t>(v)] >= max_depth) continue;
        double u = rng::uniform01(
            rng::key_hash(seed, rng::Tag::gw_offspring, static_cast<std::uint64_t>(v)));
        long long kids = offspring.sample(u);
        for (long long c = 0; c < kids; ++c) {
            parent.push_back(v);
            depth.push_back(depth[static_cast<std::size_t>(v)] + 1);
            frontier.push_back(static_cast<Vertex>(parent.size() - 1));
        }
    }
    int n = static_cast<int>(parent.size());
    Graph::Builder b(n);
    b.set_root(0).set_directed_to_root(directed_to_root);
    for (Vertex v = 1; v < n; ++v) {
        if (directed_to_root)
            b.add_arc(v, parent[static_cast<std::size_t>(v)]);
        else
            b.add_edge(v, parent[static_cast<std::size_t>(v)]);
    }
    for (Vertex v = 0; v < n; ++v)
        b.set_stream_label(v, rng::mix64(static_cast<std::uint64_t>(v) + 0x6A17'0000ULL + seed));
    return std::move(b).build();
}

Graph build_regular_tree(int arity, int depth, bool directed_to_root) {
    if (arity < 1 || depth < 0) throw ConfigError("bad regular tree parameters");
    std::vector<Vertex> parent{kNoVertex};
    std::vector<int> level{0};
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (level[i] >= depth) continue;
        for (int c = 0; c < arity; ++c) {
            parent.push_back(static_cast<Vertex>(i));
            level.push_back(level[i] + 1);
        }
    }
    int n = static_cast<int>(parent.size());
    Graph::Builder b(n);
    b.set_root(0).set_directed_to_root(directed_to_root);
    for (Vertex v = 1; v < n; ++v) {
        if (directed_to_root)
            b.add_arc(v, parent[static_cast<std::size_t>(v)]);
        else
            b.add_edge(v, parent[static_cast<std::size_t>(v)]);
    }
    return std::move(b).build();
}

Graph build_star(int leaves) {
    if (leaves < 1) throw ConfigError("star needs at least one leaf");
    Graph::Builder b(leaves + 1);
    b.set_root(0);
    for (int l = 1; l <= leaves; ++l) b.add_edge(0, l);
    return std::move(b).build();
}

BallResult ball(const Graph& g, const VertexSet& centers, int radius) {
    if (radius < 0) throw ConfigError("radius must be >= 0");
    if (centers.empty()) throw ConfigError("ball needs at least one center");
    for (Vertex c : centers)
        if (!g.valid_vertex(c)) throw ConfigError("ball center not in graph");
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
    std::deque<Vertex> q;
    for (Vertex c : centers) {
        dist[static_cast<std::size_t>(c)] = 0;
        q.push_back(c);
    }
    // BFS over the undirected structure: in directed mode children still
    // belong to the ball, so explore both arc directions.
    std::vector<std::vector<Vertex>> in_arcs;
    if (g.directed_to_root()) {
        in_arcs.resize(static_cast<std::size_t>(g.vertex_count()));
        for (int v = 0; v < g.vertex_count(); ++v)
            for (Vertex w : g.neighbors(v)) in_arcs[static_cast<std::size_t>(w)].push_back(v);
    }
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        int d = dist[static_cast<std::size_t>(v)];
        if (d == radius) continue;
        auto visit = [&](Vertex w) {
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = d + 1;
                q.push_back(w);
            }
        };
        for (Vertex w : g.neighbors(v)) visit(w);
        if (g.directed_to_root())
            for (Vertex w : in_arcs[static_cast<std::size_t>(v)]) visit(w);
    }
    std::vector<Vertex> keep;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (dist[static_cast<std::size_t>(v)] >= 0) keep.push_back(v);

    std::unordered_map<Vertex, Vertex> remap;
    for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<Vertex>(i);
    Graph::Builder b(static_cast<int>(keep.size()));
    b.set_directed_to_root(g.directed_to_root());
    if (g.root() && remap.count(*g.root())) b.set_root(remap[*g.root()]);
    if (g.directed_to_root() && (!g.root() || !remap.count(*g.root())))
        throw ConfigError("ball of a directed tree must contain the root");
    for (Vertex v : keep) {
        for (Vertex w : g.neighbors(v)) {
            auto it = remap.find(w);
            if (it == remap.end()) continue;
            if (g.directed_to_root())
                b.add_arc(remap[v], it->second);
            else if (v < w)
                b.add_edge(remap[v], it->second);
        }
        b.set_stream_label(remap[v], g.stream_label(v));
        b.set_coordinate(remap[v], g.coordinate(v));
    }
    return BallResult{std::move(b).build(), std::move(keep)};
}

} // namespace dlas
