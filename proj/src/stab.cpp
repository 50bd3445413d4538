#include "ccstab/stab.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/refine.hpp"

namespace ccstab {

namespace {

// Dense class ids for per-item names, by first occurrence.
SimClasses classes_from_names(int i, std::size_t n, const std::vector<std::uint32_t>& item_name) {
    SimClasses out;
    out.index = i;
    out.n = n;
    out.class_of.resize(item_name.size());
    std::unordered_map<std::uint32_t, std::uint32_t> id;
    for (std::size_t k = 0; k < item_name.size(); ++k) {
        auto [it, fresh] = id.emplace(item_name[k], static_cast<std::uint32_t>(out.names.size()));
        if (fresh) out.names.push_back(item_name[k]);
        out.class_of[k] = it->second;
    }
    return out;
}

// Sizes of the groups of equal keys, as the sorted value set (or, in strict
// mode, the sorted multiset over all members).
void group_values(std::vector<std::uint64_t>& keys, bool strict, std::vector<Namer::Word>& out) {
    std::sort(keys.begin(), keys.end());
    std::vector<std::uint64_t> sizes;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        const auto k = j - i;
        if (strict) {
            for (std::size_t r = 0; r < k; ++r) sizes.push_back(k);
        } else {
            sizes.push_back(k);
        }
        i = j;
    }
    std::sort(sizes.begin(), sizes.end());
    if (!strict) sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    out.insert(out.end(), sizes.begin(), sizes.end());
}

std::uint64_t ext_key(const Extension& e, std::size_t cell) {
    return (std::uint64_t{e.census_id} << 32) | e.coloring.labels[e.coloring.color[cell]];
}

}  // namespace

std::vector<Relation> SimClasses::family() const {
    std::vector<Relation> t(names.size());
    if (index == 1) {
        for (Point a = 0; a < n; ++a) t[class_of[a]].push_back({a, a});
    } else {
        for (std::size_t c = 0; c < class_of.size(); ++c) t[class_of[c]].push_back({c / n, c % n});
    }
    return t;
}

SimClasses sim_classes(const CoherentConfiguration& cc, int i, const SimOptions& opt, ExtensionCache* cache) {
    if (i < 1 || i > 4) throw PreconditionError("sim_classes: index must be 1..4");
    std::unique_ptr<ExtensionCache> own;
    if (!cache) {
        own = std::make_unique<ExtensionCache>(cc.coloring);
        cache = own.get();
    }
    if (cache->n() != cc.n()) throw PreconditionError("sim_classes: cache does not match");
    const std::size_t n = cc.n();
    Namer& nm = *cache->namer();
    const auto& base = cache->base();
    std::vector<std::uint32_t> item_name;
    std::vector<Namer::Word> key;
    std::vector<std::uint64_t> keys;
    if (i == 1 || i == 2) cache->fill_points();
    if (i == 3 || i == 4) cache->fill_pairs();
    switch (i) {
        case 1:
            for (Point a = 0; a < n; ++a) item_name.push_back(nm.intern({tag(Tag::Sim1), Namer::ref(cache->point(a).census_id)}));
            break;
        case 2:
            for (std::size_t x = 0; x < n * n; ++x) {
                keys.clear();
                for (Point a = 0; a < n; ++a) keys.push_back(ext_key(cache->point(a), x));
                key.assign({tag(Tag::Sim2), Namer::ref(base.labels[base.color[x]]), opt.strict ? 1u : 0u});
                group_values(keys, opt.strict, key);
                item_name.push_back(nm.intern(key));
            }
            break;
        case 3:
            for (std::size_t x = 0; x < n * n; ++x)
                item_name.push_back(nm.intern({tag(Tag::Sim3), Namer::ref(cache->pair(x / n, x % n).census_id)}));
            break;
        case 4:
            for (std::size_t x = 0; x < n * n; ++x) {
                keys.clear();
                for (std::size_t y = 0; y < n * n; ++y) keys.push_back(ext_key(cache->pair(y / n, y % n), x));
                key.assign({tag(Tag::Sim4), Namer::ref(cache->pair(x / n, x % n).census_id), opt.strict ? 1u : 0u});
                group_values(keys, opt.strict, key);
                item_name.push_back(nm.intern(key));
            }
            break;
    }
    return classes_from_names(i, n, item_name);
}

CoherentConfiguration sigma(const CoherentConfiguration& cc, int i, const SimOptions& opt, ExtensionCache* cache) {
    std::unique_ptr<ExtensionCache> own;
    if (!cache) {
        own = std::make_unique<ExtensionCache>(cc.coloring);
        cache = own.get();
    }
    const auto cls = sim_classes(cc, i, opt, cache);
    const std::size_t n = cc.n();
    const auto& base = cache->base();
    std::vector<std::uint32_t> mark(n * n);
    if (i == 1) {
        std::fill(mark.begin(), mark.end(), cache->namer()->intern({tag(Tag::Sim1)}));
        for (Point a = 0; a < n; ++a) mark[a * n + a] = cls.names[cls.class_of[a]];
    } else {
        for (std::size_t x = 0; x < n * n; ++x) mark[x] = cls.names[cls.class_of[x]];
    }
    std::size_t it = 0;
    auto out = refine(initial_split_marked(base, mark), &it);
    return as_cc(std::move(out), it);
}

std::size_t n_y_count(const CoherentConfiguration& cc, PointPair x, PointPair y) {
    const std::size_t n = cc.n();
    if (x.first >= n || x.second >= n || y.first >= n || y.second >= n) throw PreconditionError("n_y_count: point out of range");
    ExtensionCache cache(cc.coloring);
    const std::size_t cell = x.first * n + x.second;
    const auto k = ext_key(cache.pair(y.first, y.second), cell);
    std::size_t count = 0;
    for (Point a = 0; a < n; ++a)
        for (Point b = 0; b < n; ++b) count += ext_key(cache.pair(a, b), cell) == k;
    return count;
}

std::size_t n_alpha_count(const CoherentConfiguration& cc, PointPair x, Point alpha) {
    const std::size_t n = cc.n();
    if (x.first >= n || x.second >= n || alpha >= n) throw PreconditionError("n_alpha_count: point out of range");
    ExtensionCache cache(cc.coloring);
    const std::size_t cell = x.first * n + x.second;
    const auto k = ext_key(cache.point(alpha), cell);
    std::size_t count = 0;
    for (Point a = 0; a < n; ++a) count += ext_key(cache.point(a), cell) == k;
    return count;
}

StabResult deep_stab_traced(const PairColoring& x, std::span<const int> order, const SimOptions& opt) {
    for (int i : order)
        if (i < 1 || i > 4) throw PreconditionError("deep_stab: sigma index must be 1..4");
    if (std::any_of(order.begin(), order.end(), [](int i) { return i >= 3; }))
        check_cap("two_point", x.n, caps().two_point_n);
    StabResult res;
    res.cc = wl_closure(x);
    auto cache = std::make_unique<ExtensionCache>(res.cc.coloring);
    std::size_t iteration = 0;
    for (std::size_t k = 0; k < order.size();) {
        auto next = sigma(res.cc, order[k], opt, cache.get());
        res.trace.push_back({++iteration, order[k], res.cc.rank(), next.rank()});
        if (next.rank() > res.cc.rank()) {
            res.cc = std::move(next);
            cache = std::make_unique<ExtensionCache>(res.cc.coloring);
            k = 0;
        } else {
            ++k;
        }
    }
    return res;
}

CoherentConfiguration deep_stab(const PairColoring& x, std::span<const int> selected, const SimOptions& opt) {
    std::vector<int> order(selected.begin(), selected.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    return deep_stab_traced(x, order, opt).cc;
}

StabResult sesquiclosure_traced(const PairColoring& x) {
    static constexpr int kOrder[] = {1, 2};
    return deep_stab_traced(x, kOrder);
}

CoherentConfiguration sesquiclosure(const PairColoring& x) { return sesquiclosure_traced(x).cc; }

}  // namespace ccstab
