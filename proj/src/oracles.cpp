#include "ccstab/oracles.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"

namespace ccstab {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Joint 1-dim refinement of the domain side (ca) and image side (cb).
// Returns false if the two sides have different color histograms.
bool refine_sides(const PairColoring& x, std::vector<std::uint32_t>& ca, std::vector<std::uint32_t>& cb) {
    const std::size_t n = x.n;
    std::size_t count = 0;
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> na(n), nb(n), sig;
        auto name = [&](const std::vector<std::uint32_t>& c, Point v) {
            std::vector<std::uint64_t> e(n);
            for (Point u = 0; u < n; ++u) e[u] = (std::uint64_t{x.at(v, u)} << 32) | c[u];
            std::sort(e.begin(), e.end());
            sig.assign({c[v]});
            for (auto w : e) {
                sig.push_back(static_cast<std::uint32_t>(w >> 32));
                sig.push_back(static_cast<std::uint32_t>(w));
            }
            return ids.emplace(sig, static_cast<std::uint32_t>(ids.size())).first->second;
        };
        for (Point v = 0; v < n; ++v) na[v] = name(ca, v);
        for (Point v = 0; v < n; ++v) nb[v] = name(cb, v);
        ca.swap(na);
        cb.swap(nb);
        std::vector<std::size_t> ha(ids.size()), hb(ids.size());
        for (Point v = 0; v < n; ++v) {
            ++ha[ca[v]];
            ++hb[cb[v]];
        }
        if (ha != hb) return false;
        if (ids.size() == count) return true;
        count = ids.size();
    }
}

std::optional<std::vector<Point>> search(const PairColoring& x, std::vector<PointPair>& prefix) {
    const std::size_t n = x.n;
    std::vector<std::uint32_t> ca(n), cb(n);
    for (Point v = 0; v < n; ++v) ca[v] = cb[v] = x.at(v, v) * (n + 1);
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        ca[prefix[k].first] += static_cast<std::uint32_t>(k + 1);
        cb[prefix[k].second] += static_cast<std::uint32_t>(k + 1);
    }
    if (!refine_sides(x, ca, cb)) return std::nullopt;
    std::map<std::uint32_t, std::size_t> hist;
    for (Point v = 0; v < n; ++v) ++hist[ca[v]];
    Point pick = n;
    for (Point v = 0; v < n && pick == n; ++v)
        if (hist[ca[v]] > 1) pick = v;
    if (pick == n) {
        std::map<std::uint32_t, Point> img;
        for (Point w = 0; w < n; ++w) img[cb[w]] = w;
        std::vector<Point> g(n);
        for (Point v = 0; v < n; ++v) g[v] = img[ca[v]];
        if (!preserves(x, g)) return std::nullopt;
        return g;
    }
    for (Point w = 0; w < n; ++w) {
        if (cb[w] != ca[pick]) continue;
        prefix.emplace_back(pick, w);
        auto g = search(x, prefix);
        prefix.pop_back();
        if (g) return g;
    }
    return std::nullopt;
}

std::vector<std::uint32_t> roots(UnionFind& uf, std::size_t N) {
    std::vector<std::uint32_t> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<std::uint32_t>(uf.find(i));
    return out;
}

}  // namespace

bool preserves(const PairColoring& p, std::span<const Point> g) {
    const std::size_t n = p.n;
    if (g.size() != n) return false;
    for (Point a = 0; a < n; ++a)
        for (Point b = 0; b < n; ++b)
            if (p.at(a, b) != p.at(g[a], g[b])) return false;
    return true;
}

std::optional<std::vector<Point>> find_automorphism(const PairColoring& x, std::span<const PointPair> prefix) {
    for (auto [a, b] : prefix)
        if (a >= x.n || b >= x.n) throw PreconditionError("find_automorphism: point out of range");
    std::vector<PointPair> p(prefix.begin(), prefix.end());
    return search(x, p);
}

OrbitPartition brute_orbits(const PairColoring& x, int max_arity) {
    if (max_arity < 1 || max_arity > 3) throw PreconditionError("brute_orbits: arity must be 1, 2 or 3");
    const std::size_t n = x.n;
    check_cap("orbit", n, caps().orbit_n);
    OrbitPartition out;
    out.n = n;
    UnionFind pts(n);
    for (std::size_t i = n; i-- > 0;) {
        std::vector<PointPair> prefix;
        for (Point k = 0; k < i; ++k) prefix.emplace_back(k, k);
        for (Point c = i + 1; c < n; ++c) {
            if (x.at(c, c) != x.at(i, i) || pts.find(c) == pts.find(i)) continue;
            prefix.emplace_back(i, c);
            auto g = search(x, prefix);
            prefix.pop_back();
            if (!g) continue;
            for (Point v = 0; v < n; ++v) pts.unite(v, (*g)[v]);
            out.generators.push_back(std::move(*g));
        }
    }
    out.points = roots(pts, n);
    UnionFind pairs(n * n);
    for (const auto& g : out.generators)
        for (Point a = 0; a < n; ++a)
            for (Point b = 0; b < n; ++b) pairs.unite(a * n + b, g[a] * n + g[b]);
    const auto pr = roots(pairs, n * n);
    out.pairs = PairColoring::from_values(n, pr);
    if (max_arity == 3) {
        UnionFind tr(n * n * n);
        for (const auto& g : out.generators)
            for (Point a = 0; a < n; ++a)
                for (Point b = 0; b < n; ++b)
                    for (Point c = 0; c < n; ++c) tr.unite((a * n + b) * n + c, (g[a] * n + g[b]) * n + g[c]);
        out.triples = roots(tr, n * n * n);
    }
    return out;
}

PebbleGame::PebbleGame(const PairColoring& g, const PairColoring& h, std::size_t m)
    : n_(g.n), n2_(h.n), pebbles_(m + 1), K_(g.n * h.n + 1) {
    if (m != 2) throw PreconditionError("pebble_game: only m = 2 is supported");
    check_cap("game", std::max(n_, n2_), caps().game_n);
    // Colors are matched by name; the similarity must be a bijection of the
    // color sets that respects the diagonal.
    auto names = [](const PairColoring& p) {
        PairColoring q = p;
        if (!q.namer) adopt(q);
        std::vector<std::uint64_t> fp(q.rank());
        for (std::uint32_t c = 0; c < q.rank(); ++c) fp[c] = q.namer->fingerprint(q.labels[c]);
        return std::make_pair(q, fp);
    };
    auto [gq, gf] = names(g);
    auto [hq, hf] = names(h);
    auto color_set = [](const PairColoring& p, const std::vector<std::uint64_t>& fp) {
        std::set<std::pair<std::uint64_t, bool>> s;
        for (Point a = 0; a < p.n; ++a)
            for (Point b = 0; b < p.n; ++b) s.emplace(fp[p.at(a, b)], a == b);
        return s;
    };
    if (color_set(gq, gf) != color_set(hq, hf)) throw PreconditionError("no standard similarity: color sets differ");
    std::map<std::uint64_t, std::uint32_t> common;
    for (auto f : gf) common.emplace(f, static_cast<std::uint32_t>(common.size()));
    for (auto f : hf) common.emplace(f, static_cast<std::uint32_t>(common.size()));
    cg_.resize(n_ * n_);
    ch_.resize(n2_ * n2_);
    for (std::size_t i = 0; i < cg_.size(); ++i) cg_[i] = common[gf[gq.color[i]]];
    for (std::size_t i = 0; i < ch_.size(); ++i) ch_[i] = common[hf[hq.color[i]]];
    std::size_t total = 1;
    for (std::size_t j = 0; j < pebbles_; ++j) total *= K_;
    win_.assign(total, 0);
}

std::size_t PebbleGame::position(std::span<const Point> x, std::span<const Point> x2) const {
    if (x.size() != x2.size() || x.size() > pebbles_ - 1)
        throw PreconditionError("pebble_game: initial tuples must have equal length at most m");
    std::size_t pos = 0, scale = 1;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] >= n_ || x2[j] >= n2_) throw PreconditionError("pebble_game: point out of range");
        pos += scale * (1 + x[j] * n2_ + x2[j]);
        scale *= K_;
    }
    return pos;
}

bool PebbleGame::local(std::size_t pos) const {
    std::size_t a[4], b[4], k = 0;
    for (std::size_t j = 0; j < pebbles_; ++j, pos /= K_) {
        const std::size_t s = pos % K_;
        if (s == 0) continue;
        a[k] = (s - 1) / n2_;
        b[k] = (s - 1) % n2_;
        ++k;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (cg_[a[i] * n_ + a[j]] != ch_[b[i] * n2_ + b[j]]) return false;
    return true;
}

bool PebbleGame::survives(std::size_t pos) const {
    std::size_t slot[4], scale[4];
    {
        std::size_t p = pos, s = 1;
        for (std::size_t j = 0; j < pebbles_; ++j, p /= K_, s *= K_) {
            slot[j] = p % K_;
            scale[j] = s;
        }
    }
    auto moved = [&](std::size_t j, Point a, Point b) { return pos - slot[j] * scale[j] + (1 + a * n2_ + b) * scale[j]; };
    // Spoiler's set on the second structure, pebble placed on the first.
    {
        std::vector<std::vector<std::uint32_t>> mask(n_, std::vector<std::uint32_t>(pebbles_));
        for (Point a = 0; a < n_; ++a)
            for (std::size_t j = 0; j < pebbles_; ++j)
                for (Point b = 0; b < n2_; ++b)
                    if (win_[moved(j, a, b)]) mask[a][j] |= 1u << b;
        for (std::uint32_t S = 1; S < (1u << n2_); ++S) {
            std::size_t good = 0;
            for (Point a = 0; a < n_; ++a)
                good += std::all_of(mask[a].begin(), mask[a].end(), [&](std::uint32_t m) { return (m & S) != 0; });
            if (good < static_cast<std::size_t>(std::popcount(S))) return false;
        }
    }
    // Spoiler's set on the first structure, pebble placed on the second.
    {
        std::vector<std::vector<std::uint32_t>> mask(n2_, std::vector<std::uint32_t>(pebbles_));
        for (Point b = 0; b < n2_; ++b)
            for (std::size_t j = 0; j < pebbles_; ++j)
                for (Point a = 0; a < n_; ++a)
                    if (win_[moved(j, a, b)]) mask[b][j] |= 1u << a;
        for (std::uint32_t S = 1; S < (1u << n_); ++S) {
            std::size_t good = 0;
            for (Point b = 0; b < n2_; ++b)
                good += std::all_of(mask[b].begin(), mask[b].end(), [&](std::uint32_t m) { return (m & S) != 0; });
            if (good < static_cast<std::size_t>(std::popcount(S))) return false;
        }
    }
    return true;
}

void PebbleGame::solve() {
    for (std::size_t p = 0; p < win_.size(); ++p) win_[p] = local(p);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t p = 0; p < win_.size(); ++p) {
            if (win_[p] && !survives(p)) {
                win_[p] = 0;
                changed = true;
            }
        }
    }
    solved_ = true;
}

Winner PebbleGame::winner(std::span<const Point> x, std::span<const Point> x2) {
    const auto pos = position(x, x2);
    if (!solved_) solve();
    return win_[pos] ? Winner::Duplicator : Winner::Spoiler;
}

Winner pebble_game(const PairColoring& g, const PairColoring& h, std::size_t m, std::span<const Point> x,
                   std::span<const Point> x2) {
    PebbleGame game(g, h, m);
    return game.winner(x, x2);
}

}  // namespace ccstab
