#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ccstab/core.hpp"

namespace ccstab {

/// Simple undirected vertex-colored graph.
struct Graph {
    std::size_t n = 0;
    std::vector<std::uint32_t> vertex_color;  // size n, default 0
    std::vector<std::uint8_t> adj;            // n*n, symmetric, zero diagonal

    Graph() = default;
    explicit Graph(std::size_t n_) : n(n_), vertex_color(n_, 0), adj(n_ * n_, 0) {}

    bool edge(Point u, Point v) const noexcept { return adj[u * n + v] != 0; }
    void add_edge(Point u, Point v);
    std::size_t edge_count() const;
    std::size_t degree(Point v) const;
};

/// Colored rainbow of a graph: diagonal cells carry the vertex color, the
/// off-diagonal cells split into edge / non-edge. Raw labels: edge 1,
/// non-edge 2, vertex color 0 -> 0, vertex color k >= 1 -> k + 2.
PairColoring to_rainbow(const Graph& g);

/// Graph text format: `# comment`, `n <N>`, `c <v> <k>`, `e <u> <v>`.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

Graph relabel(const Graph& g, std::span<const Point> perm);  // v -> perm[v]
Graph disjoint_union(const Graph& a, const Graph& b);

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph petersen_graph();
Graph heawood_graph();  // points 0..6, lines 7..13
Graph shrikhande_graph();
Graph rook_graph(std::size_t k);  // k x k rook's graph

/// All uncolored graphs on n vertices up to isomorphism (n <= 7), each in a
/// canonical labeling, ordered by their canonical code.
std::vector<Graph> all_graphs(std::size_t n);

struct NamedGraph {
    std::string name;
    Graph g;
};

/// The named test family: Petersen, Heawood, Shrikhande, rook 4x4, C6, 2C3,
/// K3+K4, P3, K4, K5, Shrikhande+rook.
std::vector<NamedGraph> named_graphs();

/// All graphs on 1..max_n vertices followed by named_graphs() whose size is
/// at most `named_max_n`.
std::vector<NamedGraph> corpus(std::size_t max_n = 7, std::size_t named_max_n = 32);

}  // namespace ccstab
