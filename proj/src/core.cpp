#include "ccstab/core.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"

namespace ccstab {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t k) : parent(k) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<std::size_t> diagonal_cells(std::size_t n) {
    std::vector<std::size_t> d(n);
    for (std::size_t a = 0; a < n; ++a) d[a] = a * n + a;
    return d;
}

}  // namespace

std::vector<std::uint32_t> dense_renumber(std::span<const std::uint32_t> raw, std::span<const std::size_t> first,
                                          std::vector<std::uint32_t>& raw_of_dense) {
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    raw_of_dense.clear();
    auto visit = [&](std::uint32_t v) {
        auto [it, fresh] = ids.try_emplace(v, static_cast<std::uint32_t>(raw_of_dense.size()));
        if (fresh) raw_of_dense.push_back(v);
        return it->second;
    };
    for (auto cell : first) visit(raw[cell]);
    std::vector<std::uint32_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = visit(raw[i]);
    return out;
}

PairColoring PairColoring::from_values(std::size_t n, std::span<const std::uint32_t> values) {
    if (values.size() != n * n) throw PreconditionError("from_values: expected n*n values");
    PairColoring p;
    p.n = n;
    const auto diag = diagonal_cells(n);
    p.color = dense_renumber(values, diag, p.labels);
    return p;
}

PairColoring PairColoring::trivial(std::size_t n) {
    std::vector<std::uint32_t> v(n * n, 1);
    for (std::size_t a = 0; a < n; ++a) v[a * n + a] = 0;
    return from_values(n, v);
}

PairColoring PairColoring::discrete(std::size_t n) {
    std::vector<std::uint32_t> v(n * n);
    std::iota(v.begin(), v.end(), 0u);
    return from_values(n, v);
}

PairColoring canonical_renumber(const PairColoring& p) {
    PairColoring out;
    out.n = p.n;
    out.namer = p.namer;
    std::vector<std::uint32_t> old_of_new;
    const auto diag = diagonal_cells(p.n);
    out.color = dense_renumber(p.color, diag, old_of_new);
    out.labels.resize(old_of_new.size());
    for (std::size_t c = 0; c < old_of_new.size(); ++c) out.labels[c] = p.labels[old_of_new[c]];
    return out;
}

PairColoring join_partitions(const PairColoring& p, const PairColoring& q) {
    if (p.n != q.n) throw PreconditionError("join_partitions: ground sets differ");
    const auto rp = static_cast<std::uint32_t>(p.rank());
    UnionFind uf(p.rank() + q.rank());
    for (std::size_t i = 0; i < p.color.size(); ++i) uf.unite(p.color[i], rp + q.color[i]);
    std::vector<std::uint32_t> raw(p.color.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = uf.find(p.color[i]);

    PairColoring out;
    out.n = p.n;
    std::vector<std::uint32_t> root_of_dense;
    out.color = dense_renumber(raw, diagonal_cells(p.n), root_of_dense);
    if (p.namer && p.namer == q.namer) {
        out.namer = p.namer;
        std::unordered_map<std::uint32_t, std::uint32_t> dense_of_root;
        for (std::uint32_t c = 0; c < root_of_dense.size(); ++c) dense_of_root[root_of_dense[c]] = c;
        std::vector<std::vector<std::uint32_t>> from_p(root_of_dense.size()), from_q(root_of_dense.size());
        for (std::uint32_t c = 0; c < p.rank(); ++c) from_p[dense_of_root[uf.find(c)]].push_back(p.labels[c]);
        for (std::uint32_t c = 0; c < q.rank(); ++c) from_q[dense_of_root[uf.find(rp + c)]].push_back(q.labels[c]);
        out.labels.resize(root_of_dense.size());
        std::vector<Namer::Word> key;
        auto by_fp = [&](std::uint32_t a, std::uint32_t b) {
            const auto fa = p.namer->fingerprint(a), fb = p.namer->fingerprint(b);
            return fa != fb ? fa < fb : a < b;
        };
        for (std::size_t c = 0; c < out.labels.size(); ++c) {
            std::sort(from_p[c].begin(), from_p[c].end(), by_fp);
            std::sort(from_q[c].begin(), from_q[c].end(), by_fp);
            key.assign({tag(Tag::Join), from_p[c].size()});
            for (auto l : from_p[c]) key.push_back(Namer::ref(l));
            for (auto l : from_q[c]) key.push_back(Namer::ref(l));
            out.labels[c] = p.namer->intern(key);
        }
    } else {
        out.labels.resize(root_of_dense.size());
        std::iota(out.labels.begin(), out.labels.end(), 0u);
    }
    return out;
}

bool partition_leq(const PairColoring& x, const PairColoring& y) {
    if (x.n != y.n) return false;
    // each y-class must sit inside a single x-class
    std::vector<std::uint32_t> host(y.rank(), UINT32_MAX);
    for (std::size_t i = 0; i < x.color.size(); ++i) {
        auto& h = host[y.color[i]];
        if (h == UINT32_MAX) h = x.color[i];
        else if (h != x.color[i]) return false;
    }
    return true;
}

bool same_partition(const PairColoring& x, const PairColoring& y) {
    return x.n == y.n && x.rank() == y.rank() && partition_leq(x, y);
}

RainbowReport validate_rainbow(const PairColoring& p) {
    RainbowReport r;
    const std::size_t n = p.n;
    std::vector<int> diag_kind(p.rank(), -1);  // 1 diagonal, 0 off-diagonal
    std::vector<PointPair> first(p.rank());
    for (std::size_t a = 0; a < n && r.c1; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const auto c = p.at(a, b);
            const int kind = a == b ? 1 : 0;
            if (diag_kind[c] == -1) {
                diag_kind[c] = kind;
                first[c] = {a, b};
            } else if (diag_kind[c] != kind) {
                r.c1 = false;
                r.c1_witness = PointPair{a, b};
                break;
            }
        }
    }
    std::vector<std::uint32_t> t(p.rank(), UINT32_MAX);
    std::vector<PointPair> seen(p.rank());
    for (std::size_t a = 0; a < n && r.c2; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const auto c = p.at(a, b), ct = p.at(b, a);
            if (t[c] == UINT32_MAX) {
                t[c] = ct;
                seen[c] = {a, b};
            } else if (t[c] != ct) {
                r.c2 = false;
                r.c2_witness = std::pair{seen[c], PointPair{a, b}};
                break;
            }
        }
    }
    return r;
}

std::optional<std::vector<std::uint32_t>> transpose_map(const PairColoring& p) {
    std::vector<std::uint32_t> t(p.rank(), UINT32_MAX);
    for (std::size_t a = 0; a < p.n; ++a) {
        for (std::size_t b = 0; b < p.n; ++b) {
            auto& slot = t[p.at(a, b)];
            if (slot == UINT32_MAX) slot = p.at(b, a);
            else if (slot != p.at(b, a)) return std::nullopt;
        }
    }
    return t;
}

PairColoring permute(const PairColoring& p, std::span<const Point> perm) {
    if (perm.size() != p.n) throw PreconditionError("permute: permutation size mismatch");
    PairColoring out;
    out.n = p.n;
    out.namer = p.namer;
    std::vector<std::uint32_t> lab(p.color.size());
    for (std::size_t a = 0; a < p.n; ++a)
        for (std::size_t b = 0; b < p.n; ++b) lab[perm[a] * p.n + perm[b]] = p.at(a, b);
    std::vector<std::uint32_t> old_of_new;
    const auto diag = diagonal_cells(p.n);
    out.color = dense_renumber(lab, diag, old_of_new);
    out.labels.resize(old_of_new.size());
    for (std::size_t c = 0; c < old_of_new.size(); ++c) out.labels[c] = p.labels[old_of_new[c]];
    return out;
}

PairColoring recolor(const PairColoring& p, std::span<const std::uint32_t> new_labels, const NamerPtr& namer) {
    if (new_labels.size() != p.rank()) throw PreconditionError("recolor: label count mismatch");
    std::vector<std::uint32_t> cell(p.color.size());
    for (std::size_t i = 0; i < cell.size(); ++i) cell[i] = new_labels[p.color[i]];
    PairColoring out = PairColoring::from_values(p.n, cell);
    out.namer = namer;
    return out;
}

void adopt(PairColoring& p, const NamerPtr& target) {
    if (p.namer) {
        if (target && target != p.namer) throw PreconditionError("coloring belongs to a different naming context");
        return;
    }
    p.namer = target ? target : std::make_shared<Namer>();
    for (auto& l : p.labels) l = p.namer->intern({tag(Tag::Raw), l});
}

std::vector<std::vector<Point>> fibers_of(const PairColoring& p) {
    std::vector<std::vector<Point>> out;
    std::unordered_map<std::uint32_t, std::size_t> idx;
    for (Point a = 0; a < p.n; ++a) {
        auto [it, fresh] = idx.try_emplace(p.at(a, a), out.size());
        if (fresh) out.emplace_back();
        out[it->second].push_back(a);
    }
    return out;
}

std::vector<std::size_t> class_sizes(const PairColoring& p) {
    std::vector<std::size_t> s(p.rank(), 0);
    for (auto c : p.color) ++s[c];
    return s;
}

PairColoring read_pair_coloring(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            return true;
        }
        return false;
    };
    if (!next_line()) throw FormatError("empty pair-coloring input", lineno + 1);
    std::istringstream hs(line);
    std::string m;
    long long arity = 0, n = 0, r = 0;
    if (!(hs >> m >> arity >> n >> r) || m != "m") throw FormatError("expected header 'm 2 <n> <R>'", lineno, 1);
    if (arity != 2) throw FormatError("pair coloring must have arity 2", lineno, 3);
    if (n < 1 || r < 1) throw FormatError("n and R must be positive", lineno, 5);
    check_cap("pair", static_cast<std::size_t>(n), caps().pair_n);
    const auto nn = static_cast<std::size_t>(n);
    std::vector<std::uint32_t> values(nn * nn);
    for (std::size_t a = 0; a < nn; ++a) {
        if (!next_line()) throw FormatError("missing row " + std::to_string(a), lineno + 1);
        std::size_t col = 0, pos = 0;
        for (std::size_t b = 0; b < nn; ++b) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) throw FormatError("row has too few entries", lineno, line.size() + 1);
            col = pos + 1;
            const auto end = line.find_first_of(" \t\r", pos);
            const std::string tok = line.substr(pos, end - pos);
            long long v = -1;
            try {
                std::size_t used = 0;
                v = std::stoll(tok, &used);
                if (used != tok.size()) v = -1;
            } catch (const std::exception&) {
                v = -1;
            }
            if (v < 0 || v >= r) throw FormatError("color '" + tok + "' not in 0..R-1", lineno, col);
            values[a * nn + b] = static_cast<std::uint32_t>(v);
            pos = end == std::string::npos ? line.size() : end;
        }
        if (line.find_first_not_of(" \t\r", pos) != std::string::npos)
            throw FormatError("row has too many entries", lineno, pos + 1);
    }
    auto p = PairColoring::from_values(nn, values);
    if (p.rank() != static_cast<std::size_t>(r))
        throw FormatError("header declares R=" + std::to_string(r) + " but " + std::to_string(p.rank()) +
                              " colors occur",
                          1);
    return p;
}

void write_pair_coloring(std::ostream& out, const PairColoring& p) {
    out << "m 2 " << p.n << ' ' << p.rank() << '\n';
    for (std::size_t a = 0; a < p.n; ++a) {
        for (std::size_t b = 0; b < p.n; ++b) out << (b ? " " : "") << p.at(a, b);
        out << '\n';
    }
}

}  // namespace ccstab
