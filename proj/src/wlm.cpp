#include "ccstab/wlm.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"

namespace ccstab {

namespace {

struct WordsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& w) const noexcept {
        std::uint64_t h = w.size();
        for (auto x : w) h = mix64(h ^ x);
        return h;
    }
};

std::size_t ipow(std::size_t n, std::size_t m) {
    std::size_t r = 1;
    while (m--) r *= n;
    return r;
}

void check_arity_cap(std::size_t m, std::size_t n) {
    switch (m) {
        case 2: check_cap("pair", n, caps().pair_n); break;
        case 3: check_cap("wl3", n, caps().wl3_n); break;
        case 4: check_cap("wl4", n, caps().wl4_n); break;
        default: throw PreconditionError("arity must be 2, 3 or 4");
    }
}

std::vector<std::size_t> constant_cells(std::size_t n, std::size_t m) {
    std::size_t step = 0;
    for (std::size_t i = 0; i < m; ++i) step = step * n + 1;
    std::vector<std::size_t> c(n);
    for (std::size_t a = 0; a < n; ++a) c[a] = a * step;
    return c;
}

MaryColoring from_cell_labels(std::size_t m, std::size_t n, std::span<const std::uint32_t> cell, const NamerPtr& namer) {
    MaryColoring f;
    f.m = m;
    f.n = n;
    f.namer = namer;
    const auto first = constant_cells(n, m);
    f.color = dense_renumber(cell, first, f.labels);
    return f;
}

// Dense ids ordered by label fingerprint.
std::vector<std::uint32_t> fingerprint_order(const std::vector<std::uint32_t>& labels, const Namer& namer,
                                             std::vector<std::uint32_t>& by_fp) {
    const std::size_t R = labels.size();
    std::vector<std::uint64_t> fp(R);
    for (std::size_t c = 0; c < R; ++c) fp[c] = namer.fingerprint(labels[c]);
    by_fp.resize(R);
    std::iota(by_fp.begin(), by_fp.end(), 0u);
    std::sort(by_fp.begin(), by_fp.end(), [&](auto a, auto b) { return fp[a] != fp[b] ? fp[a] < fp[b] : labels[a] < labels[b]; });
    std::vector<std::uint32_t> pos(R);
    for (std::uint32_t i = 0; i < R; ++i) pos[by_fp[i]] = i;
    return pos;
}

std::vector<std::uint32_t> round_labels(const MaryColoring& f) {
    const std::size_t n = f.n, m = f.m, N = f.size(), R = f.rank();
    std::vector<std::uint32_t> by_fp;
    const auto pos = fingerprint_order(f.labels, *f.namer, by_fp);
    std::vector<std::uint32_t> c(N);
    for (std::size_t i = 0; i < N; ++i) c[i] = pos[f.color[i]];
    std::vector<std::size_t> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = ipow(n, m - 1 - i);

    std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, WordsHash> table;
    std::vector<std::vector<std::uint64_t>> sigs;
    std::vector<std::uint32_t> local(N);
    std::vector<unsigned __int128> keys(n);
    std::vector<std::uint64_t> sig;
    std::vector<std::size_t> x(m);
    for (std::size_t idx = 0; idx < N; ++idx) {
        for (std::size_t i = 0, r = idx; i < m; ++i) {
            x[i] = r / w[i];
            r %= w[i];
        }
        for (std::size_t a = 0; a < n; ++a) {
            unsigned __int128 k = 0;
            for (std::size_t i = 0; i < m; ++i) k = k * R + c[idx + (a - x[i]) * w[i]];
            keys[a] = k;
        }
        std::sort(keys.begin(), keys.end());
        sig.assign(1, c[idx]);
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && keys[j] == keys[i]) ++j;
            sig.push_back(static_cast<std::uint64_t>(keys[i] >> 64));
            sig.push_back(static_cast<std::uint64_t>(keys[i]));
            sig.push_back(j - i);
            i = j;
        }
        auto [it, fresh] = table.try_emplace(sig, static_cast<std::uint32_t>(sigs.size()));
        if (fresh) sigs.push_back(sig);
        local[idx] = it->second;
    }
    std::vector<std::uint32_t> name(sigs.size());
    std::vector<Namer::Word> key;
    for (std::size_t s = 0; s < sigs.size(); ++s) {
        const auto& g = sigs[s];
        key.assign({tag(Tag::MaryRound), Namer::ref(f.labels[by_fp[g[0]]])});
        for (std::size_t i = 1; i < g.size(); i += 3) {
            unsigned __int128 k = (static_cast<unsigned __int128>(g[i]) << 64) | g[i + 1];
            std::vector<std::uint32_t> comp(m);
            for (std::size_t j = m; j-- > 0;) {
                comp[j] = static_cast<std::uint32_t>(k % R);
                k /= R;
            }
            for (auto cc : comp) key.push_back(Namer::ref(f.labels[by_fp[cc]]));
            key.push_back(g[i + 2]);
        }
        name[s] = f.namer->intern(key);
    }
    std::vector<std::uint32_t> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = name[local[i]];
    return out;
}

std::size_t distinct_labels(const std::vector<MaryColoring>& fs) {
    std::vector<std::uint32_t> all;
    for (const auto& f : fs) all.insert(all.end(), f.labels.begin(), f.labels.end());
    std::sort(all.begin(), all.end());
    return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

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

}  // namespace

std::size_t MaryColoring::index(std::span<const Point> x) const {
    std::size_t idx = 0;
    for (auto v : x) idx = idx * n + v;
    return idx;
}

std::vector<Point> MaryColoring::tuple(std::size_t idx) const {
    std::vector<Point> x(m);
    for (std::size_t i = m; i-- > 0;) {
        x[i] = idx % n;
        idx /= n;
    }
    return x;
}

std::uint32_t equality_pattern(std::span<const Point> x) {
    const std::size_t m = x.size();
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t first = i;
        for (std::size_t j = 0; j < i; ++j)
            if (x[j] == x[i]) {
                first = j;
                break;
            }
        code = code * static_cast<std::uint32_t>(m) + static_cast<std::uint32_t>(first);
    }
    return code;
}

std::size_t transform_count(std::size_t m) { return ipow(m, m); }

std::vector<std::size_t> transform(std::size_t m, std::size_t k) {
    std::vector<std::size_t> s(m);
    for (std::size_t i = m; i-- > 0;) {
        s[i] = k % m;
        k /= m;
    }
    return s;
}

MaryColoring initial_coloring(const PairColoring& x0, std::size_t m) {
    check_arity_cap(m, x0.n);
    PairColoring x = x0;
    if (!x.namer) adopt(x);
    const std::size_t n = x.n, N = ipow(n, m);
    std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, WordsHash> seen;
    std::vector<std::uint32_t> cell(N);
    std::vector<std::uint64_t> k;
    std::vector<Point> t(m);
    for (std::size_t idx = 0; idx < N; ++idx) {
        for (std::size_t i = m, r = idx; i-- > 0;) {
            t[i] = r % n;
            r /= n;
        }
        k.assign({equality_pattern(t)});
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) k.push_back(x.at(t[i], t[j]));
        auto it = seen.find(k);
        if (it == seen.end()) {
            std::vector<Namer::Word> key{tag(Tag::MaryInit), m, k[0]};
            for (std::size_t i = 1; i < k.size(); ++i) key.push_back(Namer::ref(x.labels[k[i]]));
            it = seen.emplace(k, x.namer->intern(key)).first;
        }
        cell[idx] = it->second;
    }
    return from_cell_labels(m, n, cell, x.namer);
}

MaryRefineResult wlm_refine_batch(std::vector<MaryColoring> start, bool record_census) {
    MaryRefineResult res;
    if (start.empty()) return res;
    const NamerPtr namer = start.front().namer;
    for (const auto& f : start)
        if (!f.namer || f.namer != namer) throw PreconditionError("wlm_refine_batch: colorings must share one namer");
    auto snapshot = [&](const std::vector<MaryColoring>& fs) {
        std::vector<Census> c;
        for (const auto& f : fs) c.push_back(census_of(f));
        res.census.push_back(std::move(c));
    };
    if (record_census) snapshot(start);
    std::size_t count = distinct_labels(start);
    for (;;) {
        std::vector<MaryColoring> next;
        for (const auto& f : start) next.push_back(from_cell_labels(f.m, f.n, round_labels(f), namer));
        ++res.iterations;
        if (record_census) snapshot(next);
        const std::size_t c = distinct_labels(next);
        start = std::move(next);
        if (c == count) break;
        count = c;
    }
    res.out = std::move(start);
    return res;
}

MaryColoring wlm_closure(const PairColoring& x, std::size_t m, std::size_t* iterations) {
    std::vector<MaryColoring> v{initial_coloring(x, m)};
    auto r = wlm_refine_batch(std::move(v));
    if (iterations) *iterations = r.iterations;
    return std::move(r.out.front());
}

MaryColoring wlm_refine(const MaryColoring& f0, std::size_t* iterations) {
    check_arity_cap(f0.m, f0.n);
    MaryColoring f = f0;
    if (!f.namer) {
        f.namer = std::make_shared<Namer>();
        for (auto& l : f.labels) l = f.namer->intern({tag(Tag::Raw), l});
    }
    const std::size_t m = f.m, N = f.size(), T = transform_count(m);
    std::vector<std::vector<std::size_t>> sigmas;
    for (std::size_t k = 0; k < T; ++k) sigmas.push_back(transform(m, k));
    std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, WordsHash> seen;
    std::vector<std::uint32_t> cell(N);
    std::vector<std::uint64_t> k;
    std::vector<Point> y(m);
    for (std::size_t idx = 0; idx < N; ++idx) {
        const auto x = f.tuple(idx);
        k.assign({equality_pattern(x)});
        for (const auto& s : sigmas) {
            for (std::size_t i = 0; i < m; ++i) y[i] = x[s[i]];
            k.push_back(f.color[f.index(y)]);
        }
        auto it = seen.find(k);
        if (it == seen.end()) {
            std::vector<Namer::Word> key{tag(Tag::MaryRelabel), m, k[0]};
            for (std::size_t i = 1; i < k.size(); ++i) key.push_back(Namer::ref(f.labels[k[i]]));
            it = seen.emplace(k, f.namer->intern(key)).first;
        }
        cell[idx] = it->second;
    }
    std::vector<MaryColoring> v{from_cell_labels(m, f.n, cell, f.namer)};
    auto r = wlm_refine_batch(std::move(v));
    if (iterations) *iterations = r.iterations;
    return std::move(r.out.front());
}

MaryColoring project(const MaryColoring& f, std::size_t k) {
    if (k < 2 || k >= f.m) throw PreconditionError("project: need 2 <= k < m");
    const std::size_t n = f.n, N = f.size(), tail = ipow(n, f.m - k), K = ipow(n, k);
    UnionFind uf(f.rank());
    for (std::size_t p = 0; p < K; ++p)
        for (std::size_t s = 1; s < tail; ++s) uf.unite(f.color[p * tail], f.color[p * tail + s]);
    (void)N;
    std::map<std::uint32_t, std::vector<std::uint32_t>> members;
    for (std::uint32_t c = 0; c < f.rank(); ++c) members[uf.find(c)].push_back(c);
    std::vector<std::uint32_t> comp_label(f.rank());
    for (auto& [root, cs] : members) {
        std::vector<std::uint32_t> labels;
        for (auto c : cs) labels.push_back(f.labels[c]);
        std::uint32_t label = 0;
        if (f.namer) {
            std::sort(labels.begin(), labels.end(), [&](auto a, auto b) {
                const auto fa = f.namer->fingerprint(a), fb = f.namer->fingerprint(b);
                return fa != fb ? fa < fb : a < b;
            });
            std::vector<Namer::Word> key{tag(Tag::Project), k};
            for (auto l : labels) key.push_back(Namer::ref(l));
            label = f.namer->intern(key);
        } else {
            label = root;
        }
        comp_label[root] = label;
    }
    std::vector<std::uint32_t> cell(K);
    for (std::size_t p = 0; p < K; ++p) cell[p] = comp_label[uf.find(f.color[p * tail])];
    return from_cell_labels(k, n, cell, f.namer);
}

MaryColoring residue(const MaryColoring& f, std::span<const Point> y) {
    if (y.empty() || y.size() > f.m - 2) throw PreconditionError("residue: need 1 <= |y| <= m - 2");
    for (auto v : y)
        if (v >= f.n) throw PreconditionError("residue: point out of range");
    const std::size_t k = f.m - y.size(), n = f.n, K = ipow(n, k), tail = ipow(n, y.size());
    std::size_t suffix = 0;
    for (auto v : y) suffix = suffix * n + v;
    std::vector<std::uint32_t> cell(K);
    for (std::size_t p = 0; p < K; ++p) cell[p] = f.labels[f.color[p * tail + suffix]];
    return from_cell_labels(k, n, cell, f.namer);
}

std::size_t class_multiplicity(const MaryColoring& f, std::uint32_t cls, std::size_t k) {
    if (k < 1 || k > f.m) throw PreconditionError("class_multiplicity: bad k");
    if (cls >= f.rank()) throw PreconditionError("class_multiplicity: no such class");
    const std::size_t tail = ipow(f.n, f.m - k);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.color[i] == cls) members.push_back(i);
    auto count_at = [&](std::size_t idx) {
        const std::size_t base = idx / tail * tail;
        std::size_t c = 0;
        for (std::size_t s = 0; s < tail; ++s) c += f.color[base + s] == cls;
        return c;
    };
    std::mt19937_64 rng(0x5eed + cls);
    const std::size_t v = count_at(members.front());
    for (int i = 0; i < 3; ++i) {
        const std::size_t idx = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
        if (count_at(idx) != v) throw Error("class multiplicity is not constant on the class");
    }
    return v;
}

PairColoring to_pair_coloring(const MaryColoring& f) {
    if (f.m != 2) throw PreconditionError("to_pair_coloring: arity is not 2");
    PairColoring p;
    p.n = f.n;
    p.color = f.color;
    p.labels = f.labels;
    p.namer = f.namer;
    return p;
}

MaryColoring from_pair_coloring(const PairColoring& p) {
    MaryColoring f;
    f.m = 2;
    f.n = p.n;
    f.color = p.color;
    f.labels = p.labels;
    f.namer = p.namer;
    return f;
}

Census census_of(const MaryColoring& f) {
    std::vector<std::size_t> sizes(f.rank(), 0);
    for (auto c : f.color) ++sizes[c];
    Census c;
    for (std::size_t i = 0; i < f.rank(); ++i) c.emplace_back(f.labels[i], sizes[i]);
    std::sort(c.begin(), c.end());
    return c;
}

bool partition_leq(const MaryColoring& x, const MaryColoring& y) {
    if (x.m != y.m || x.n != y.n) return false;
    std::vector<std::uint32_t> host(y.rank(), UINT32_MAX);
    for (std::size_t i = 0; i < x.color.size(); ++i) {
        auto& h = host[y.color[i]];
        if (h == UINT32_MAX) h = x.color[i];
        else if (h != x.color[i]) return false;
    }
    return true;
}

bool same_partition(const MaryColoring& x, const MaryColoring& y) {
    return x.rank() == y.rank() && partition_leq(x, y);
}

MaryReport validate_mary(const MaryColoring& f) {
    MaryReport rep;
    const std::size_t m = f.m, n = f.n, N = f.size(), R = f.rank();
    std::vector<std::size_t> rep_idx(R, SIZE_MAX);
    for (std::size_t i = 0; i < N; ++i)
        if (rep_idx[f.color[i]] == SIZE_MAX) rep_idx[f.color[i]] = i;
    // (C1') equality pattern constant on classes
    std::vector<std::uint32_t> pat(R);
    for (std::uint32_t c = 0; c < R; ++c) pat[c] = equality_pattern(f.tuple(rep_idx[c]));
    for (std::size_t i = 0; i < N && rep.c1; ++i) {
        if (equality_pattern(f.tuple(i)) != pat[f.color[i]]) {
            rep.c1 = false;
            rep.c1_witness = std::pair{f.tuple(rep_idx[f.color[i]]), f.tuple(i)};
        }
    }
    // (C2') images of classes under every transform are classes
    std::vector<std::size_t> sizes(R, 0);
    for (auto c : f.color) ++sizes[c];
    std::vector<Point> y(m);
    for (std::size_t k = 0; k < transform_count(m) && rep.c2; ++k) {
        const auto s = transform(m, k);
        std::vector<std::uint32_t> target(R, UINT32_MAX);
        std::vector<std::vector<std::size_t>> image(R);
        for (std::size_t i = 0; i < N; ++i) {
            const auto x = f.tuple(i);
            for (std::size_t j = 0; j < m; ++j) y[j] = x[s[j]];
            const std::size_t yi = f.index(y);
            auto& t = target[f.color[i]];
            if (t == UINT32_MAX) t = f.color[yi];
            else if (t != f.color[yi]) {
                rep.c2 = false;
                rep.c2_witness = std::pair{f.color[i], s};
                break;
            }
            image[f.color[i]].push_back(yi);
        }
        for (std::uint32_t c = 0; c < R && rep.c2; ++c) {
            auto& im = image[c];
            std::sort(im.begin(), im.end());
            im.erase(std::unique(im.begin(), im.end()), im.end());
            if (im.size() != sizes[target[c]]) {
                rep.c2 = false;
                rep.c2_witness = std::pair{c, s};
            }
        }
    }
    // (C3') counts n(x; X_1..X_m) constant on classes
    std::vector<std::size_t> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = ipow(n, m - 1 - i);
    auto counts = [&](std::size_t idx) {
        const auto x = f.tuple(idx);
        std::vector<std::vector<std::uint32_t>> v(n, std::vector<std::uint32_t>(m));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < m; ++i) v[a][i] = f.color[idx + (a - x[i]) * w[i]];
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<std::vector<std::vector<std::uint32_t>>> ref(R);
    for (std::uint32_t c = 0; c < R; ++c) ref[c] = counts(rep_idx[c]);
    std::vector<std::size_t> probe;
    if (N * n <= 1000000 * std::size_t{4}) {
        probe.resize(N);
        std::iota(probe.begin(), probe.end(), std::size_t{0});
    } else {
        rep.c3_exhaustive = false;
        std::mt19937_64 rng(12345);
        for (int i = 0; i < 20000; ++i) probe.push_back(std::uniform_int_distribution<std::size_t>(0, N - 1)(rng));
    }
    for (auto i : probe) {
        if (counts(i) != ref[f.color[i]]) {
            rep.c3 = false;
            rep.c3_witness = std::pair{f.tuple(rep_idx[f.color[i]]), f.tuple(i)};
            break;
        }
    }
    return rep;
}

void write_mary(std::ostream& out, const MaryColoring& f) {
    out << "m " << f.m << ' ' << f.n << ' ' << f.rank() << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) out << f.color[i] << ((i + 1) % f.n == 0 ? '\n' : ' ');
}

MaryColoring read_mary(std::istream& in) {
    std::string tok;
    std::size_t m = 0, n = 0, R = 0;
    if (!(in >> tok) || tok != "m" || !(in >> m >> n >> R)) throw FormatError("expected header 'm <arity> <n> <R>'", 1, 1);
    check_arity_cap(m, n);
    if (n == 0 || R == 0) throw FormatError("n and R must be positive", 1);
    std::vector<std::uint32_t> raw(ipow(n, m));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        long long v = -1;
        if (!(in >> v) || v < 0 || static_cast<std::size_t>(v) >= R)
            throw FormatError("color " + std::to_string(i) + " missing or not in 0..R-1", 2 + i / n);
        raw[i] = static_cast<std::uint32_t>(v);
    }
    MaryColoring f = from_cell_labels(m, n, raw, nullptr);
    if (f.rank() != R) throw FormatError("header declares R=" + std::to_string(R) + " but " + std::to_string(f.rank()) + " colors occur", 1);
    return f;
}

}  // namespace ccstab
