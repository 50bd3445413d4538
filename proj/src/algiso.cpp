#include "ccstab/algiso.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

#include "ccstab/errors.hpp"
#include "ccstab/extension.hpp"
#include "ccstab/stab.hpp"
#include "ccstab/wlm.hpp"

namespace ccstab {

namespace {

std::uint64_t raw_fingerprint(std::uint32_t raw) {
    Namer tmp;
    return tmp.fingerprint(tmp.intern({tag(Tag::Raw), raw}));
}

std::uint64_t label_fingerprint(const PairColoring& p, std::uint32_t c) {
    return p.namer ? p.namer->fingerprint(p.labels[c]) : raw_fingerprint(p.labels[c]);
}

std::uint32_t free_name(Namer& nm, std::uint64_t fp) {
    return nm.intern({tag(Tag::SeedFree), fp >> 32, fp & 0xffffffffu});
}

bool is_diagonal_class(const PairColoring& p, std::uint32_t c) {
    for (Point a = 0; a < p.n; ++a)
        if (p.at(a, a) == c) return true;
    return false;
}

std::vector<std::uint32_t> diag_class_of_fiber(const CoherentConfiguration& cc) {
    std::vector<std::uint32_t> d(cc.fibers.size());
    for (std::size_t f = 0; f < d.size(); ++f) d[f] = cc.coloring.at(cc.fibers[f][0], cc.fibers[f][0]);
    return d;
}

bool supports_agree(const CoherentConfiguration& a, const CoherentConfiguration& b, std::span<const std::uint32_t> phi) {
    const auto da = diag_class_of_fiber(a), db = diag_class_of_fiber(b);
    for (std::size_t c = 0; c < a.rank(); ++c) {
        const auto [l, r] = a.supports[c];
        const auto [l2, r2] = b.supports[phi[c]];
        if (phi[da[l]] != db[l2] || phi[da[r]] != db[r2]) return false;
    }
    return true;
}

// Dense class of b with each label, for a and b in one namer.
std::optional<std::vector<std::uint32_t>> match_by_label(const PairColoring& a, const PairColoring& b) {
    if (a.rank() != b.rank()) return std::nullopt;
    std::unordered_map<std::uint32_t, std::uint32_t> where;
    for (std::uint32_t c = 0; c < b.rank(); ++c) where[b.labels[c]] = c;
    std::vector<std::uint32_t> phi(a.rank());
    for (std::uint32_t c = 0; c < a.rank(); ++c) {
        auto it = where.find(a.labels[c]);
        if (it == where.end()) return std::nullopt;
        phi[c] = it->second;
    }
    return phi;
}

// Both colorings recolored into a fresh namer so that source class c and
// target class phi[c] share the name Seed(c).
std::pair<PairColoring, PairColoring> seed_pair(const AlgIsoWitness& w) {
    auto nm = std::make_shared<Namer>();
    const auto& a = w.source->coloring;
    const auto& b = w.target->coloring;
    std::vector<std::uint32_t> la(a.rank()), lb(b.rank());
    for (std::uint32_t c = 0; c < a.rank(); ++c) {
        la[c] = nm->intern({tag(Tag::Seed), c});
        lb[w.phi[c]] = la[c];
    }
    return {recolor(a, la, nm), recolor(b, lb, nm)};
}

// The two inputs in one namer; raw labels are interned as Raw, engine names
// of a foreign namer by fingerprint.
std::pair<PairColoring, PairColoring> share_naming(const PairColoring& g, const PairColoring& h) {
    PairColoring x = g, y = h;
    if (!x.namer && !y.namer) {
        adopt(x);
        adopt(y, x.namer);
        return {x, y};
    }
    if (x.namer && x.namer == y.namer) return {x, y};
    auto nm = std::make_shared<Namer>();
    auto move_in = [&](const PairColoring& p) {
        std::vector<std::uint32_t> l(p.rank());
        for (std::uint32_t c = 0; c < p.rank(); ++c) l[c] = free_name(*nm, label_fingerprint(p, c));
        return recolor(p, l, nm);
    };
    return {move_in(x), move_in(y)};
}

Census fp_sorted(const Census& c, const Namer& nm) {
    Census s = c;
    std::sort(s.begin(), s.end(), [&](const auto& x, const auto& y) {
        const auto fx = nm.fingerprint(x.first), fy = nm.fingerprint(y.first);
        return fx != fy ? fx < fy : x.first < y.first;
    });
    return s;
}

nlohmann::json divergence_json(std::size_t round, const Census& a, const Census& b, const Namer& nm) {
    nlohmann::json j;
    j["round"] = round;
    j["rank_a"] = a.size();
    j["rank_b"] = b.size();
    j["differences"] = census_difference(a, b, nm);
    return j;
}

nlohmann::json color_map_json(const std::vector<std::uint32_t>& phi) {
    nlohmann::json m = nlohmann::json::array();
    for (std::size_t c = 0; c < phi.size(); ++c) m.push_back({c, phi[c]});
    return m;
}

}  // namespace

std::string name_hex(std::uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

nlohmann::json census_json(const Census& c, const Namer& nm) {
    nlohmann::json out = nlohmann::json::array();
    for (auto [l, s] : fp_sorted(c, nm)) out.push_back({{"name", name_hex(nm.fingerprint(l))}, {"size", s}});
    return out;
}

nlohmann::json census_difference(const Census& a, const Census& b, const Namer& nm) {
    std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> m;
    for (auto [l, s] : a) m[l].first = s;
    for (auto [l, s] : b) m[l].second = s;
    std::vector<std::pair<std::uint64_t, std::pair<std::size_t, std::size_t>>> d;
    for (auto& [l, v] : m)
        if (v.first != v.second) d.push_back({nm.fingerprint(l), v});
    std::sort(d.begin(), d.end());
    nlohmann::json out = nlohmann::json::array();
    for (auto& [fp, v] : d) out.push_back({{"name", name_hex(fp)}, {"size_a", v.first}, {"size_b", v.second}});
    return out;
}

CanonicalColoring canonical_form(const CoherentConfiguration& cc) {
    CanonicalColoring out;
    out.cc = cc;
    const auto& p = cc.coloring;
    const std::size_t R = p.rank();
    std::vector<std::uint64_t> fp(R);
    for (std::uint32_t c = 0; c < R; ++c) fp[c] = label_fingerprint(p, c);
    const auto sizes = class_sizes(p);
    out.order.resize(R);
    std::iota(out.order.begin(), out.order.end(), 0u);
    std::sort(out.order.begin(), out.order.end(), [&](auto x, auto y) {
        if (fp[x] != fp[y]) return fp[x] < fp[y];
        return sizes[x] != sizes[y] ? sizes[x] < sizes[y] : x < y;
    });
    out.position.resize(R);
    for (std::uint32_t i = 0; i < R; ++i) out.position[out.order[i]] = i;
    for (auto c : out.order) {
        CanonicalColoring::Entry e;
        e.name = fp[c];
        e.size = sizes[c];
        e.valency = cc.valencies[c];
        e.left_support = cc.fibers[cc.supports[c].first].size();
        e.right_support = cc.fibers[cc.supports[c].second].size();
        out.census.push_back(e);
    }
    const auto T = intersection_numbers(cc);
    out.tensor.R = R;
    out.tensor.c.assign(R * R * R, 0);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t t = 0; t < R; ++t)
                out.tensor.c[(r * R + s) * R + t] = T.at(out.order[r], out.order[s], out.order[t]);
    return out;
}

bool same_census(const CanonicalColoring& a, const CanonicalColoring& b) { return a.census == b.census; }
bool same_tensor(const CanonicalColoring& a, const CanonicalColoring& b) {
    return a.tensor.R == b.tensor.R && a.tensor.c == b.tensor.c;
}

bool tensors_agree(const CoherentConfiguration& a, const CoherentConfiguration& b, std::span<const std::uint32_t> phi) {
    const std::size_t R = a.rank();
    if (b.rank() != R || phi.size() != R) return false;
    const auto Ta = intersection_numbers(a), Tb = intersection_numbers(b);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t t = 0; t < R; ++t)
                if (Ta.at(r, s, t) != Tb.at(phi[r], phi[s], phi[t])) return false;
    return true;
}

AlgIsoAttempt try_alg_iso(const CoherentConfiguration& a, const CoherentConfiguration& b, const ColorMap& seed) {
    AlgIsoAttempt res;
    auto nm = std::make_shared<Namer>();
    res.namer = nm;
    const auto& pa = a.coloring;
    const auto& pb = b.coloring;
    std::vector<int> used_a(pa.rank()), used_b(pb.rank());
    for (auto [ca, cb] : seed) {
        if (ca >= pa.rank() || cb >= pb.rank()) throw PreconditionError("seed color out of range");
        if (used_a[ca]++ || used_b[cb]++) throw PreconditionError("seed is not injective");
        if (is_diagonal_class(pa, ca) != is_diagonal_class(pb, cb))
            throw PreconditionError("seed maps a diagonal class to an off-diagonal one");
    }
    if (pa.n != pb.n) {
        res.diverging_round = 0;
        res.reason = "ground sets differ in size";
        return res;
    }
    std::vector<std::uint32_t> la(pa.rank()), lb(pb.rank());
    for (std::uint32_t c = 0; c < pa.rank(); ++c) la[c] = free_name(*nm, label_fingerprint(pa, c));
    for (std::uint32_t c = 0; c < pb.rank(); ++c) lb[c] = free_name(*nm, label_fingerprint(pb, c));
    for (std::size_t i = 0; i < seed.size(); ++i) {
        la[seed[i].first] = lb[seed[i].second] = nm->intern({tag(Tag::Seed), i});
    }
    std::vector<PairColoring> start{recolor(pa, la, nm), recolor(pb, lb, nm)};
    if (start[0].rank() != pa.rank() || start[1].rank() != pb.rank()) throw Error("class names collide");
    auto run = refine_batch(std::move(start), true);
    for (std::size_t r = 0; r < run.census.size(); ++r) {
        if (run.census[r][0] != run.census[r][1]) {
            res.diverging_round = r;
            res.census_a = run.census[r][0];
            res.census_b = run.census[r][1];
            res.reason = "censuses differ";
            return res;
        }
    }
    if (run.out[0].rank() != pa.rank()) throw PreconditionError("find_alg_iso: input is not coherent");
    auto phi = match_by_label(run.out[0], run.out[1]);
    if (!phi) throw Error("find_alg_iso: equal censuses without a label matching");
    AlgIsoWitness w;
    w.source = std::make_shared<const CoherentConfiguration>(a);
    w.target = std::make_shared<const CoherentConfiguration>(b);
    w.phi = *phi;
    w.tensors_match = tensors_agree(a, b, w.phi);
    w.supports_match = supports_agree(a, b, w.phi);
    if (!w.tensors_match || !w.supports_match) {
        res.reason = w.tensors_match ? "supports differ" : "intersection numbers differ";
        return res;
    }
    res.witness = std::move(w);
    return res;
}

std::optional<AlgIsoWitness> find_alg_iso(const CoherentConfiguration& a, const CoherentConfiguration& b,
                                          const ColorMap& seed) {
    return try_alg_iso(a, b, seed).witness;
}

AlgIsoWitness identity_witness(const CoherentConfiguration& cc) {
    AlgIsoWitness w;
    w.source = w.target = std::make_shared<const CoherentConfiguration>(cc);
    w.phi.resize(cc.rank());
    std::iota(w.phi.begin(), w.phi.end(), 0u);
    w.tensors_match = w.supports_match = true;
    return w;
}

std::optional<AlgIsoWitness> extend_point(const AlgIsoWitness& w, std::span<const Point> x, std::span<const Point> x2) {
    if (x.size() != x2.size()) throw PreconditionError("extend_point: tuple length mismatch");
    for (Point a : x)
        if (a >= w.source->n()) throw PreconditionError("extend_point: point out of range");
    for (Point a : x2)
        if (a >= w.target->n()) throw PreconditionError("extend_point: point out of range");
    auto [A, B] = seed_pair(w);
    std::vector<Relation> ta, tb;
    for (Point a : x) ta.push_back({{a, a}});
    for (Point a : x2) tb.push_back({{a, a}});
    std::vector<PairColoring> start{initial_split(A, ta), initial_split(B, tb)};
    auto run = refine_batch(std::move(start), true);
    for (const auto& round : run.census)
        if (round[0] != round[1]) return std::nullopt;
    auto phi = match_by_label(run.out[0], run.out[1]);
    if (!phi) return std::nullopt;
    auto sa = std::make_shared<const CoherentConfiguration>(as_cc(std::move(run.out[0]), run.iterations));
    auto sb = std::make_shared<const CoherentConfiguration>(as_cc(std::move(run.out[1]), run.iterations));
    // Classwise: the image of a class inside s lies inside w(s).
    const auto& fa = sa->coloring;
    const auto& fb = sb->coloring;
    std::vector<std::uint32_t> src(fa.rank()), tgt(fb.rank());
    for (std::size_t i = 0; i < fa.color.size(); ++i) src[fa.color[i]] = w.source->coloring.color[i];
    for (std::size_t i = 0; i < fb.color.size(); ++i) tgt[fb.color[i]] = w.target->coloring.color[i];
    for (std::uint32_t c = 0; c < fa.rank(); ++c)
        if (w.phi[src[c]] != tgt[(*phi)[c]]) throw Error("extend_point: extension does not extend the seed map");
    AlgIsoWitness out;
    out.source = sa;
    out.target = sb;
    out.phi = std::move(*phi);
    out.tensors_match = tensors_agree(*sa, *sb, out.phi);
    out.supports_match = supports_agree(*sa, *sb, out.phi);
    if (!out.tensors_match || !out.supports_match) return std::nullopt;
    out.points = std::make_pair(std::vector<Point>(x.begin(), x.end()), std::vector<Point>(x2.begin(), x2.end()));
    return out;
}

AlgIsoWitness compose(const AlgIsoWitness& w1, const AlgIsoWitness& w2) {
    if (!same_partition(w1.target->coloring, w2.source->coloring))
        throw PreconditionError("compose: configurations do not match");
    AlgIsoWitness w;
    w.source = w1.source;
    w.target = w2.target;
    // dense ids of the shared middle configuration may differ between the two
    const auto& mid1 = w1.target->coloring;
    const auto& mid2 = w2.source->coloring;
    std::vector<std::uint32_t> bridge(mid1.rank());
    for (std::size_t i = 0; i < mid1.color.size(); ++i) bridge[mid1.color[i]] = mid2.color[i];
    w.phi.resize(w1.phi.size());
    for (std::size_t c = 0; c < w.phi.size(); ++c) w.phi[c] = w2.phi[bridge[w1.phi[c]]];
    w.tensors_match = w1.tensors_match && w2.tensors_match;
    w.supports_match = w1.supports_match && w2.supports_match;
    return w;
}

SesquiReport sesquiclosed_check(const CoherentConfiguration& cc) {
    SesquiReport rep;
    ExtensionCache cache(cc.coloring);
    cache.fill_points();
    const auto& p = cc.coloring;
    const std::size_t n = p.n;
    for (Point a = 0; a < n; ++a) {
        const auto& e = cache.point(a).coloring;
        // fibers of X_a by diagonal color, grouped under the color of (a, b)
        std::map<std::uint32_t, std::map<std::uint32_t, std::vector<Point>>> parts;
        for (Point b = 0; b < n; ++b) parts[p.at(a, b)][e.at(b, b)].push_back(b);
        for (auto& [s, fibers] : parts) {
            if (fibers.size() > 1) {
                rep.s1 = false;
                if (!rep.s1_witness) rep.s1_witness = SesquiReport::S1Witness{a, s, fibers.begin()->second};
            }
        }
    }
    for (const auto& fiber : cc.fibers) {
        const auto id = cache.point(fiber[0]).census_id;
        for (Point a : fiber) {
            if (cache.point(a).census_id != id) {
                rep.s2 = false;
                if (!rep.s2_witness) rep.s2_witness = std::make_pair(fiber[0], a);
            }
        }
    }
    return rep;
}

SesquiAlgIsoReport sesquiclosed_algiso_report(const AlgIsoWitness& w) {
    SesquiAlgIsoReport rep;
    auto [A, B] = seed_pair(w);
    ExtensionCache ca(std::move(A)), cb(std::move(B));
    ca.fill_points();
    cb.fill_points();
    const auto& src = *w.source;
    const auto& tgt = *w.target;
    const auto db = diag_class_of_fiber(tgt);
    for (const auto& fiber : src.fibers) {
        const auto d = w.phi[src.coloring.at(fiber[0], fiber[0])];
        const auto fb = std::find(db.begin(), db.end(), d) - db.begin();
        const auto& fiber2 = tgt.fibers[fb];
        const Point a2 = fiber2[0];
        for (Point a : fiber) {
            if (ca.point(a).census_id != cb.point(a2).census_id) {
                rep.ok = false;
                if (!rep.witness) rep.witness = std::make_pair(a, a2);
            }
        }
        for (Point b : fiber2) {
            if (ca.point(fiber[0]).census_id != cb.point(b).census_id) {
                rep.ok = false;
                if (!rep.witness) rep.witness = std::make_pair(fiber[0], b);
            }
        }
    }
    return rep;
}

bool sesquiclosed_algiso_check(const AlgIsoWitness& w) { return sesquiclosed_algiso_report(w).ok; }

nlohmann::json to_json(const Verdict& v) {
    return {{"method", v.method}, {"verdict", v.equivalent ? "equivalent" : "distinguished"}, {"certificate", v.certificate}};
}

void require_standard_similarity(const PairColoring& g, const PairColoring& h) {
    if (g.n != h.n) throw PreconditionError("no standard similarity: ground sets differ in size");
    auto named = [](const PairColoring& p) {
        const auto sizes = class_sizes(p);
        std::vector<std::tuple<std::uint64_t, bool, std::size_t>> c;
        for (std::uint32_t k = 0; k < p.rank(); ++k) c.emplace_back(label_fingerprint(p, k), is_diagonal_class(p, k), sizes[k]);
        std::sort(c.begin(), c.end());
        return c;
    };
    if (named(g) != named(h)) throw PreconditionError("no standard similarity: color censuses differ");
    const auto tg = transpose_map(g), th = transpose_map(h);
    if (!tg || !th) throw PreconditionError("no standard similarity: input is not a rainbow");
}

Verdict wl_equivalent(const PairColoring& g, const PairColoring& h) {
    require_standard_similarity(g, h);
    auto [x, y] = share_naming(g, h);
    Verdict v;
    v.method = "wl";
    std::vector<PairColoring> start{initial_split(x, {}), initial_split(y, {})};
    auto run = refine_batch(std::move(start), true);
    for (std::size_t r = 0; r < run.census.size(); ++r) {
        if (run.census[r][0] != run.census[r][1]) {
            v.certificate = divergence_json(r, run.census[r][0], run.census[r][1], *x.namer);
            return v;
        }
    }
    v.equivalent = true;
    v.certificate = {{"rounds", run.iterations}, {"rank", run.out[0].rank()}};
    return v;
}

Verdict wlm_equivalent(const PairColoring& g, const PairColoring& h, std::size_t m) {
    require_standard_similarity(g, h);
    auto [x, y] = share_naming(g, h);
    Verdict v;
    v.method = "wl" + std::to_string(m);
    std::vector<MaryColoring> start{initial_coloring(x, m), initial_coloring(y, m)};
    auto run = wlm_refine_batch(std::move(start), true);
    for (std::size_t r = 0; r < run.census.size(); ++r) {
        if (run.census[r][0] != run.census[r][1]) {
            v.certificate = divergence_json(r, run.census[r][0], run.census[r][1], *x.namer);
            return v;
        }
    }
    v.equivalent = true;
    v.certificate = {{"rounds", run.iterations}, {"rank", run.out[0].rank()}};
    return v;
}

Verdict wld_equivalent(const PairColoring& g, const PairColoring& h) {
    require_standard_similarity(g, h);
    auto [x, y] = share_naming(g, h);
    Verdict v;
    v.method = "wld";
    const auto wa = sesquiclosure(x);
    const auto wb = sesquiclosure(y);
    auto att = try_alg_iso(wa, wb, {});
    if (!att.witness) {
        v.certificate = {{"stage", "algebraic_isomorphism"}, {"reason", att.reason}};
        if (att.diverging_round)
            v.certificate["census"] = divergence_json(*att.diverging_round, att.census_a, att.census_b, *att.namer);
        return v;
    }
    const auto& w = *att.witness;
    // w must extend the standard similarity: raw colors agree classwise.
    {
        std::vector<std::size_t> rep(wb.rank(), SIZE_MAX);
        for (std::size_t i = 0; i < wb.coloring.color.size(); ++i)
            if (rep[wb.coloring.color[i]] == SIZE_MAX) rep[wb.coloring.color[i]] = i;
        std::vector<bool> done(wa.rank());
        for (std::size_t i = 0; i < wa.coloring.color.size(); ++i) {
            const auto c = wa.coloring.color[i];
            if (done[c]) continue;
            done[c] = true;
            const auto j = rep[w.phi[c]];
            if (label_fingerprint(x, x.color[i]) != label_fingerprint(y, y.color[j])) {
                v.certificate = {{"stage", "similarity"}, {"reason", "closure map does not extend the standard similarity"}};
                return v;
            }
        }
    }
    const auto rep = sesquiclosed_algiso_report(w);
    if (!rep.ok) {
        v.certificate = {{"stage", "sesquiclosed"},
                         {"reason", "no point extension"},
                         {"alpha", rep.witness->first},
                         {"alpha_prime", rep.witness->second}};
        return v;
    }
    v.equivalent = true;
    v.certificate = {{"rank", wa.rank()}, {"color_map", color_map_json(w.phi)}};
    return v;
}

Verdict deepstab_equivalent(const PairColoring& g, const PairColoring& h, std::span<const int> selected) {
    require_standard_similarity(g, h);
    auto [x, y] = share_naming(g, h);
    Verdict v;
    v.method = "deepstab";
    const auto wa = deep_stab(x, selected);
    const auto wb = deep_stab(y, selected);
    auto att = try_alg_iso(wa, wb, {});
    if (!att.witness) {
        v.certificate = {{"stage", "algebraic_isomorphism"}, {"reason", att.reason}};
        if (att.diverging_round)
            v.certificate["census"] = divergence_json(*att.diverging_round, att.census_a, att.census_b, *att.namer);
        return v;
    }
    v.equivalent = true;
    v.certificate = {{"rank", wa.rank()}, {"color_map", color_map_json(att.witness->phi)}};
    return v;
}

}  // namespace ccstab
