#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlas/common.hpp"
#include "dlas/pmf.hpp"

namespace dlas {

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<Vertex> ids);
    static VertexSet all(int vertex_count);

    bool contains(Vertex v) const;
    bool empty() const { return ids_.empty(); }
    std::size_t size() const { return ids_.size(); }
    const std::vector<Vertex>& ids() const { return ids_; }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

private:
    std::vector<Vertex> ids_;
};

/// Finite arena graph. Vertices are dense ids 0..n-1 with CSR adjacency.
/// In directed_to_root mode every non-root vertex has exactly one
/// out-neighbor (its parent) and the root has none; otherwise adjacency is
/// symmetric. Each vertex carries a stream label, a 64-bit identifier stable
/// across windowed sub-graphs of the same arena, which keys all per-vertex
/// randomness.
class Graph {
public:
    class Builder {
    public:
        explicit Builder(int vertex_count);
        Builder& add_edge(Vertex a, Vertex b);      // undirected
        Builder& add_arc(Vertex from, Vertex to);   // directed_to_root mode
        Builder& set_root(Vertex v);
        Builder& set_directed_to_root(bool on);
        Builder& set_stream_label(Vertex v, std::uint64_t label);
        Builder& set_coordinate(Vertex v, std::int64_t coord);
        Graph build() &&;

    private:
        int n_;
        bool directed_ = false;
        std::optional<Vertex> root_;
        std::vector<std::vector<Vertex>> adj_;
        std::vector<std::uint64_t> labels_;
        std::vector<std::int64_t> coords_;
        friend class Graph;
    };

    int vertex_count() const { return static_cast<int>(offsets_.size()) - 1; }
    std::span<const Vertex> neighbors(Vertex v) const {
        auto lo = offsets_[static_cast<std::size_t>(v)];
        auto hi = offsets_[static_cast<std::size_t>(v) + 1];
        return {flat_.data() + lo, static_cast<std::size_t>(hi - lo)};
    }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
    std::optional<Vertex> root() const { return root_; }
    bool directed_to_root() const { return directed_; }

    std::uint64_t stream_label(Vertex v) const { return labels_[static_cast<std::size_t>(v)]; }
    /// Integer coordinate for interval arenas (equals the vertex id elsewhere).
    std::int64_t coordinate(Vertex v) const { return coords_[static_cast<std::size_t>(v)]; }
    /// Inverse coordinate lookup; kNoVertex when absent.
    Vertex vertex_at(std::int64_t coord) const;

    bool valid_vertex(Vertex v) const { return v >= 0 && v < vertex_count(); }

    /// Edge list as (a, b) pairs with a < b (undirected) or (child, parent).
    std::vector<std::pair<Vertex, Vertex>> edges() const;

private:
    std::vector<std::int32_t> offsets_;
    std::vector<Vertex> flat_;
    std::optional<Vertex> root_;
    bool directed_ = false;
    std::vector<std::uint64_t> labels_;
    std::vector<std::int64_t> coords_;
};

/// Path graph on the integer window {lo, ..., hi}; coordinates retained.
/// Requires lo < hi.
Graph build_interval(std::int64_t lo, std::int64_t hi);

/// Box of Z^d with nearest-neighbor edges; dims all >= 1.
Graph build_lattice_box(const std::vector<int>& dims);

/// Galton-Watson tree sampled level by level from the offspring pmf,
/// truncated at max_depth. Pure function of (pmf, max_depth, seed).
Graph sample_galton_watson(const Pmf& offspring, int max_depth, std::uint64_t seed,
                           bool directed_to_root);

/// Complete b-ary tree of the given depth (deterministic convenience arena).
Graph build_regular_tree(int arity, int depth, bool directed_to_root);

/// Star with `leaves` leaves; vertex 0 is the hub (and root).
Graph build_star(int leaves);

struct BallResult {
    Graph graph;
    std::vector<Vertex> original_of; // new id -> id in the parent graph
};

/// Induced subgraph on vertices within graph distance <= radius of any
/// center. Stream labels and coordinates are inherited from the parent, so
/// instructions keyed by label couple across nested windows.
BallResult ball(const Graph& g, const VertexSet& centers, int radius);

} // namespace dlas
