#include "ccstab/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "ccstab/errors.hpp"

namespace ccstab {

void Graph::add_edge(Point u, Point v) {
    if (u >= n || v >= n || u == v) throw PreconditionError("add_edge: bad endpoints");
    adj[u * n + v] = adj[v * n + u] = 1;
}

std::size_t Graph::edge_count() const {
    return static_cast<std::size_t>(std::count(adj.begin(), adj.end(), 1)) / 2;
}

std::size_t Graph::degree(Point v) const {
    return static_cast<std::size_t>(std::count(adj.begin() + v * n, adj.begin() + (v + 1) * n, 1));
}

PairColoring to_rainbow(const Graph& g) {
    std::vector<std::uint32_t> v(g.n * g.n);
    for (Point a = 0; a < g.n; ++a) {
        for (Point b = 0; b < g.n; ++b) {
            if (a == b) v[a * g.n + b] = g.vertex_color[a] == 0 ? 0 : g.vertex_color[a] + 2;
            else v[a * g.n + b] = g.edge(a, b) ? 1 : 2;
        }
    }
    return PairColoring::from_values(g.n, v);
}

namespace {

long long parse_int(const std::string& tok, std::size_t line, std::size_t col) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || tok.empty()) throw FormatError("expected an integer, got '" + tok + "'", line, col);
    return v;
}

}  // namespace

Graph read_graph(std::istream& in) {
    Graph g;
    bool have_n = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::pair<std::string, std::size_t>> toks;  // token, 1-based column
        for (std::size_t pos = 0;;) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) break;
            const auto end = line.find_first_of(" \t\r", pos);
            toks.emplace_back(line.substr(pos, end - pos), pos + 1);
            pos = end == std::string::npos ? line.size() : end;
        }
        if (toks.empty() || toks[0].first[0] == '#') continue;
        const std::string& kw = toks[0].first;
        auto arg = [&](std::size_t i) {
            if (i >= toks.size()) throw FormatError("missing argument to '" + kw + "'", lineno, line.size() + 1);
            return parse_int(toks[i].first, lineno, toks[i].second);
        };
        auto vertex = [&](std::size_t i) {
            const long long v = arg(i);
            if (v < 0 || static_cast<std::size_t>(v) >= g.n)
                throw FormatError("vertex " + toks[i].first + " out of range", lineno, toks[i].second);
            return static_cast<Point>(v);
        };
        std::size_t expected = 0;
        if (kw == "n") {
            if (have_n) throw FormatError("duplicate 'n' line", lineno, 1);
            const long long n = arg(1);
            if (n < 1) throw FormatError("n must be positive", lineno, toks[1].second);
            g = Graph(static_cast<std::size_t>(n));
            have_n = true;
            expected = 2;
        } else if (kw == "c" || kw == "e") {
            if (!have_n) throw FormatError("'" + kw + "' before 'n'", lineno, 1);
            if (kw == "c") {
                const Point v = vertex(1);
                const long long k = arg(2);
                if (k < 0 || k > 1000000) throw FormatError("bad vertex color", lineno, toks[2].second);
                g.vertex_color[v] = static_cast<std::uint32_t>(k);
            } else {
                const Point u = vertex(1), v = vertex(2);
                if (u == v) throw FormatError("self-loop", lineno, toks[2].second);
                g.add_edge(u, v);
            }
            expected = 3;
        } else {
            throw FormatError("unknown directive '" + kw + "'", lineno, toks[0].second);
        }
        if (toks.size() > expected) throw FormatError("trailing tokens", lineno, toks[expected].second);
    }
    if (!have_n) throw FormatError("missing 'n' line", lineno + 1, 1);
    return g;
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    return read_graph(f);
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "n " << g.n << '\n';
    for (Point v = 0; v < g.n; ++v)
        if (g.vertex_color[v]) out << "c " << v << ' ' << g.vertex_color[v] << '\n';
    for (Point u = 0; u < g.n; ++u)
        for (Point v = u + 1; v < g.n; ++v)
            if (g.edge(u, v)) out << "e " << u << ' ' << v << '\n';
}

Graph relabel(const Graph& g, std::span<const Point> perm) {
    Graph h(g.n);
    for (Point v = 0; v < g.n; ++v) h.vertex_color[perm[v]] = g.vertex_color[v];
    for (Point u = 0; u < g.n; ++u)
        for (Point v = 0; v < g.n; ++v) h.adj[perm[u] * g.n + perm[v]] = g.adj[u * g.n + v];
    return h;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    Graph h(a.n + b.n);
    for (Point v = 0; v < a.n; ++v) h.vertex_color[v] = a.vertex_color[v];
    for (Point v = 0; v < b.n; ++v) h.vertex_color[a.n + v] = b.vertex_color[v];
    for (Point u = 0; u < a.n; ++u)
        for (Point v = 0; v < a.n; ++v) h.adj[u * h.n + v] = a.adj[u * a.n + v];
    for (Point u = 0; u < b.n; ++u)
        for (Point v = 0; v < b.n; ++v) h.adj[(a.n + u) * h.n + a.n + v] = b.adj[u * b.n + v];
    return h;
}

Graph complete_graph(std::size_t n) {
    Graph g(n);
    for (Point u = 0; u < n; ++u)
        for (Point v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph cycle_graph(std::size_t n) {
    Graph g(n);
    for (Point v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
    return g;
}

Graph path_graph(std::size_t n) {
    Graph g(n);
    for (Point v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
}

Graph petersen_graph() {
    // Kneser graph K(5,2): 2-subsets, adjacent when disjoint
    std::vector<unsigned> sets;
    for (unsigned m = 0; m < 32; ++m)
        if (std::popcount(m) == 2) sets.push_back(m);
    Graph g(sets.size());
    for (Point u = 0; u < sets.size(); ++u)
        for (Point v = u + 1; v < sets.size(); ++v)
            if ((sets[u] & sets[v]) == 0) g.add_edge(u, v);
    return g;
}

Graph heawood_graph() {
    static constexpr int lines[7][3] = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
    Graph g(14);
    for (int l = 0; l < 7; ++l)
        for (int p : lines[l]) g.add_edge(static_cast<Point>(p), static_cast<Point>(7 + l));
    return g;
}

Graph shrikhande_graph() {
    // Cayley graph on Z4 x Z4 with connection set {±(0,1), ±(1,0), ±(1,1)}
    Graph g(16);
    for (int a = 0; a < 16; ++a) {
        for (int b = a + 1; b < 16; ++b) {
            const int dx = ((b / 4 - a / 4) % 4 + 4) % 4, dy = ((b % 4 - a % 4) % 4 + 4) % 4;
            const bool adj = (dx == 0 && (dy == 1 || dy == 3)) || (dy == 0 && (dx == 1 || dx == 3)) ||
                             (dx == dy && (dx == 1 || dx == 3));
            if (adj) g.add_edge(static_cast<Point>(a), static_cast<Point>(b));
        }
    }
    return g;
}

Graph rook_graph(std::size_t k) {
    Graph g(k * k);
    for (Point a = 0; a < k * k; ++a)
        for (Point b = a + 1; b < k * k; ++b)
            if (a / k == b / k || a % k == b % k) g.add_edge(a, b);
    return g;
}

namespace {

using Code = std::uint32_t;  // upper triangle bits, n <= 7 needs 21

Code code_of(const Graph& g, std::span<const Point> order) {
    // order[i] = vertex placed at position i
    Code c = 0;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j) c = (c << 1) | (g.edge(order[i], order[j]) ? 1u : 0u);
    return c;
}

// Maximum code over orderings that list vertices by non-increasing degree.
// Degree is an invariant, so this is a canonical form.
std::pair<Code, std::vector<Point>> canonical_code(const Graph& g) {
    std::vector<Point> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> deg(g.n);
    for (Point v = 0; v < g.n; ++v) deg[v] = g.degree(v);
    std::sort(order.begin(), order.end(), [&](Point a, Point b) { return deg[a] != deg[b] ? deg[a] > deg[b] : a < b; });
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    for (std::size_t i = 0; i < g.n;) {
        std::size_t j = i;
        while (j < g.n && deg[order[j]] == deg[order[i]]) ++j;
        blocks.emplace_back(i, j);
        i = j;
    }
    Code best = 0;
    std::vector<Point> best_order = order;
    bool first = true;
    // odometer over per-block permutations
    std::function<void(std::size_t)> rec = [&](std::size_t b) {
        if (b == blocks.size()) {
            const Code c = code_of(g, order);
            if (first || c > best) {
                best = c;
                best_order = order;
                first = false;
            }
            return;
        }
        auto [lo, hi] = blocks[b];
        std::sort(order.begin() + lo, order.begin() + hi);
        do {
            rec(b + 1);
        } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
    };
    rec(0);
    return {best, best_order};
}

}  // namespace

std::vector<Graph> all_graphs(std::size_t n) {
    if (n == 0 || n > 7) throw PreconditionError("all_graphs supports 1 <= n <= 7");
    if (n == 1) return {Graph(1)};
    std::set<Code> seen;
    std::vector<std::pair<Code, Graph>> out;
    for (const Graph& h : all_graphs(n - 1)) {
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            Graph g(n);
            for (Point u = 0; u + 1 < n; ++u)
                for (Point v = 0; v + 1 < n; ++v) g.adj[u * n + v] = h.adj[u * h.n + v];
            for (Point u = 0; u + 1 < n; ++u)
                if (mask >> u & 1) g.add_edge(u, n - 1);
            auto [code, order] = canonical_code(g);
            if (!seen.insert(code).second) continue;
            std::vector<Point> perm(n);
            for (std::size_t i = 0; i < n; ++i) perm[order[i]] = i;
            out.emplace_back(code, relabel(g, perm));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Graph> res;
    res.reserve(out.size());
    for (auto& [c, g] : out) res.push_back(std::move(g));
    return res;
}

std::vector<NamedGraph> named_graphs() {
    return {
        {"petersen", petersen_graph()},
        {"heawood", heawood_graph()},
        {"shrikhande", shrikhande_graph()},
        {"rook4x4", rook_graph(4)},
        {"C6", cycle_graph(6)},
        {"2C3", disjoint_union(cycle_graph(3), cycle_graph(3))},
        {"K3+K4", disjoint_union(complete_graph(3), complete_graph(4))},
        {"P3", path_graph(3)},
        {"K4", complete_graph(4)},
        {"K5", complete_graph(5)},
        {"shrikhande+rook4x4", disjoint_union(shrikhande_graph(), rook_graph(4))},
    };
}

std::vector<NamedGraph> corpus(std::size_t max_n, std::size_t named_max_n) {
    std::vector<NamedGraph> out;
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::size_t i = 0;
        for (auto& g : all_graphs(n)) out.push_back({"g" + std::to_string(n) + "_" + std::to_string(i++), std::move(g)});
    }
    for (auto& ng : named_graphs())
        if (ng.g.n <= named_max_n) out.push_back(std::move(ng));
    return out;
}

}  // namespace ccstab
