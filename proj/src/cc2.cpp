#include "ccstab/cc2.hpp"

#include <algorithm>
#include <unordered_map>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/refine.hpp"

namespace ccstab {

namespace {

PairColoring with_labels(std::size_t n, std::span<const std::uint32_t> cell_label, const NamerPtr& namer) {
    PairColoring p = PairColoring::from_values(n, cell_label);
    p.namer = namer;
    return p;
}

// Sorted (r * R + s, count) over gamma for the pair (a,b).
void triple_counts(const PairColoring& p, Point a, Point b, std::vector<std::uint32_t>& cnt,
                   std::vector<std::uint64_t>& touched, std::vector<std::pair<std::uint64_t, std::uint32_t>>& out) {
    const std::size_t n = p.n, R = p.rank();
    touched.clear();
    out.clear();
    for (Point g = 0; g < n; ++g) {
        const std::uint64_t idx = std::uint64_t{p.at(a, g)} * R + p.at(g, b);
        if (cnt.empty()) {
            touched.push_back(idx);
        } else if (cnt[idx]++ == 0) {
            touched.push_back(idx);
        }
    }
    std::sort(touched.begin(), touched.end());
    if (cnt.empty()) {
        for (std::size_t i = 0; i < touched.size();) {
            std::size_t j = i;
            while (j < touched.size() && touched[j] == touched[i]) ++j;
            out.emplace_back(touched[i], static_cast<std::uint32_t>(j - i));
            i = j;
        }
    } else {
        for (auto idx : touched) {
            out.emplace_back(idx, cnt[idx]);
            cnt[idx] = 0;
        }
    }
}

}  // namespace

CoherentConfiguration as_cc(PairColoring p, std::size_t iterations) {
    const auto rb = validate_rainbow(p);
    if (!rb.ok()) throw PreconditionError("not a rainbow");
    CoherentConfiguration cc;
    cc.iterations = iterations;
    cc.fibers = fibers_of(p);
    cc.fiber_of.assign(p.n, 0);
    for (std::uint32_t f = 0; f < cc.fibers.size(); ++f)
        for (Point a : cc.fibers[f]) cc.fiber_of[a] = f;
    const std::size_t R = p.rank();
    cc.supports.assign(R, {UINT32_MAX, UINT32_MAX});
    cc.valencies.assign(R, 0);
    cc.right_valencies.assign(R, 0);
    std::vector<Point> left(R), right(R);
    for (Point a = 0; a < p.n; ++a) {
        for (Point b = 0; b < p.n; ++b) {
            const auto c = p.at(a, b);
            auto& s = cc.supports[c];
            const std::pair<std::uint32_t, std::uint32_t> fb{cc.fiber_of[a], cc.fiber_of[b]};
            if (s.first == UINT32_MAX) {
                s = fb;
                left[c] = a;
                right[c] = b;
            } else if (s != fb) {
                throw PreconditionError("class is not inside a product of fibers");
            }
        }
    }
    for (Point x = 0; x < p.n; ++x) {
        for (std::uint32_t c = 0; c < R; ++c) {
            if (p.at(left[c], x) == c) ++cc.valencies[c];
            if (p.at(x, right[c]) == c) ++cc.right_valencies[c];
        }
    }
    cc.coloring = std::move(p);
    return cc;
}

CoherentConfiguration wl_closure(const PairColoring& x, std::span<const Relation> distinguished) {
    check_cap("pair", x.n, caps().pair_n);
    PairColoring start = x;
    if (!start.namer) adopt(start);
    std::size_t it = 0;
    auto out = refine(initial_split(start, distinguished), &it);
    return as_cc(std::move(out), it);
}

IntersectionTensor intersection_numbers(const CoherentConfiguration& cc) {
    const PairColoring& p = cc.coloring;
    const std::size_t R = p.rank(), n = p.n;
    IntersectionTensor T;
    T.R = R;
    T.c.assign(R * R * R, 0);
    std::vector<PointPair> first(R, {SIZE_MAX, 0}), last(R);
    for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) {
            const auto c = p.at(a, b);
            if (first[c].first == SIZE_MAX) first[c] = {a, b};
            last[c] = {a, b};
        }
    }
    std::vector<std::uint32_t> check(R * R);
    for (std::uint32_t t = 0; t < R; ++t) {
        auto [a, b] = first[t];
        for (Point g = 0; g < n; ++g) ++T.c[(std::size_t{p.at(a, g)} * R + p.at(g, b)) * R + t];
        if (last[t] == first[t]) continue;
        std::fill(check.begin(), check.end(), 0);
        auto [a2, b2] = last[t];
        for (Point g = 0; g < n; ++g) ++check[std::size_t{p.at(a2, g)} * R + p.at(g, b2)];
        for (std::size_t rs = 0; rs < R * R; ++rs)
            if (check[rs] != T.c[rs * R + t]) throw Error("intersection numbers not constant on a class");
    }
    return T;
}

CCReport validate_cc(const PairColoring& p) {
    CCReport rep;
    const auto rb = validate_rainbow(p);
    rep.c1 = rb.c1;
    rep.c2 = rb.c2;
    rep.c1_witness = rb.c1_witness;
    rep.c2_witness = rb.c2_witness;
    const std::size_t n = p.n, R = p.rank();
    std::vector<std::uint32_t> cnt(R * R <= (std::size_t{1} << 22) ? R * R : 0, 0);
    std::vector<std::uint64_t> touched;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> cur;
    std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> rep_counts(R);
    std::vector<PointPair> rep_pair(R);
    std::vector<char> have(R, 0);
    for (Point a = 0; a < n && rep.c3; ++a) {
        for (Point b = 0; b < n; ++b) {
            const auto t = p.at(a, b);
            triple_counts(p, a, b, cnt, touched, cur);
            if (!have[t]) {
                have[t] = 1;
                rep_counts[t] = cur;
                rep_pair[t] = {a, b};
                continue;
            }
            if (cur == rep_counts[t]) continue;
            // find the first (r,s) where the counts differ
            const auto& ref = rep_counts[t];
            std::size_t i = 0, j = 0;
            std::uint64_t key = 0;
            std::uint32_t c_ref = 0, c_cur = 0;
            while (true) {
                const std::uint64_t kr = i < ref.size() ? ref[i].first : UINT64_MAX;
                const std::uint64_t kc = j < cur.size() ? cur[j].first : UINT64_MAX;
                key = std::min(kr, kc);
                c_ref = kr == key ? ref[i].second : 0;
                c_cur = kc == key ? cur[j].second : 0;
                if (c_ref != c_cur) break;
                i += kr == key;
                j += kc == key;
            }
            rep.c3 = false;
            rep.c3_witness = CCReport::C3Witness{static_cast<std::uint32_t>(key / R), static_cast<std::uint32_t>(key % R),
                                                 t, rep_pair[t], {a, b}, c_ref, c_cur};
            break;
        }
    }
    return rep;
}

CoherentConfiguration restrict(const CoherentConfiguration& cc, std::span<const Point> delta) {
    std::vector<Point> d(delta.begin(), delta.end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    if (d.empty()) throw PreconditionError("restrict: empty set");
    std::vector<char> in(cc.n(), 0);
    for (Point a : d) {
        if (a >= cc.n()) throw PreconditionError("restrict: point out of range");
        in[a] = 1;
    }
    for (const auto& f : cc.fibers) {
        const bool first = in[f.front()];
        for (Point a : f)
            if (static_cast<bool>(in[a]) != first) throw PreconditionError("restrict: not a homogeneity set");
    }
    const std::size_t m = d.size();
    std::vector<std::uint32_t> cell(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) cell[i * m + j] = cc.coloring.label_at(d[i], d[j]);
    return as_cc(with_labels(m, cell, cc.coloring.namer));
}

CoherentConfiguration tensor_square(const CoherentConfiguration& cc) {
    check_cap("two_extension", cc.n(), caps().two_extension_n);
    PairColoring base = cc.coloring;
    if (!base.namer) adopt(base);
    const std::size_t n = base.n, R = base.rank(), N = n * n;
    std::vector<std::uint32_t> tl(R * R);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t s = 0; s < R; ++s)
            tl[r * R + s] = base.namer->intern({tag(Tag::Tensor), Namer::ref(base.labels[r]), Namer::ref(base.labels[s])});
    std::vector<std::uint32_t> cell(N * N);
    for (std::size_t x1 = 0; x1 < n; ++x1)
        for (std::size_t x2 = 0; x2 < n; ++x2)
            for (std::size_t y1 = 0; y1 < n; ++y1)
                for (std::size_t y2 = 0; y2 < n; ++y2)
                    cell[(x1 * n + x2) * N + y1 * n + y2] = tl[std::size_t{base.at(x1, y1)} * R + base.at(x2, y2)];
    return as_cc(with_labels(N, cell, base.namer));
}

CoherentConfiguration point_extension(const CoherentConfiguration& cc, std::span<const Point> y) {
    std::vector<Relation> t;
    for (Point a : y) {
        if (a >= cc.n()) throw PreconditionError("point_extension: point out of range");
        t.push_back({{a, a}});
    }
    return wl_closure(cc.coloring, t);
}

CoherentConfiguration two_extension(const CoherentConfiguration& cc) {
    const auto ts = tensor_square(cc);
    const std::size_t n = cc.n();
    std::vector<Relation> t(1);
    for (Point x = 0; x < n; ++x) t[0].push_back({x * n + x, x * n + x});
    PairColoring start = initial_split(ts.coloring, t);
    std::size_t it = 0;
    auto out = refine(std::move(start), &it);
    return as_cc(std::move(out), it);
}

CoherentConfiguration two_closure_from(const CoherentConfiguration& ext, std::size_t n) {
    if (ext.n() != n * n) throw PreconditionError("two_closure: size mismatch");
    std::vector<std::uint32_t> cell(n * n);
    for (Point a = 0; a < n; ++a)
        for (Point b = 0; b < n; ++b) cell[a * n + b] = ext.coloring.label_at(a * n + a, b * n + b);
    return as_cc(with_labels(n, cell, ext.coloring.namer));
}

CoherentConfiguration two_closure(const CoherentConfiguration& cc) { return two_closure_from(two_extension(cc), cc.n()); }

ParabolicReport parabolic_report(const CoherentConfiguration& ext, const CoherentConfiguration& base) {
    const std::size_t n = base.n(), N = ext.n();
    if (N != n * n) throw PreconditionError("parabolic_report: size mismatch");
    ParabolicReport rep;
    const std::size_t R = ext.rank();
    std::vector<int> state(R, 0);  // 1 inside e, 2 outside
    std::vector<PointPair> first(R);
    for (std::size_t u = 0; u < N; ++u) {
        for (std::size_t v = 0; v < N; ++v) {
            const auto c = ext.coloring.at(u, v);
            const int s = (u % n == v % n) ? 1 : 2;
            if (state[c] == 0) {
                state[c] = s;
                first[c] = {u, v};
            } else if (state[c] != s) {
                rep.e_is_union = false;
            }
        }
    }
    rep.row_of_class.assign(R, -1);
    for (std::uint32_t c = 0; c < R; ++c) {
        if (state[c] != 1) continue;
        rep.classes.push_back(c);
        const Point alpha = first[c].first % n, beta = first[c].first / n, gamma = first[c].second / n;
        std::vector<Point> pts{alpha, beta, gamma};
        std::sort(pts.begin(), pts.end());
        const auto distinct = static_cast<std::size_t>(std::unique(pts.begin(), pts.end()) - pts.begin());
        int row = 0;
        if (distinct == 1) {
            row = 0;
        } else if (distinct == 2) {
            row = 1;
        } else {
            const auto& p = base.coloring;
            const auto r1 = p.at(alpha, beta), r2 = p.at(beta, gamma), r3 = p.at(alpha, gamma);
            row = (r1 == r2 && r2 == r3) ? 2 : 3;
        }
        rep.row_of_class[c] = row;
        ++rep.row_counts[static_cast<std::size_t>(row)];
    }
    return rep;
}

CoherentConfiguration intersect_cc(const CoherentConfiguration& a, const CoherentConfiguration& b) {
    if (a.n() != b.n()) throw PreconditionError("intersect_cc: ground sets differ");
    auto j = join_partitions(a.coloring, b.coloring);
    if (!validate_cc(j).ok()) throw Error("intersection is not coherent");
    return as_cc(std::move(j));
}

}  // namespace ccstab
