#include "ccstab/extension.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/refine.hpp"

namespace ccstab {

std::uint32_t census_name(const PairColoring& p) {
    auto c = census_of(p);
    const Namer& nm = *p.namer;
    std::sort(c.begin(), c.end(), [&](const auto& x, const auto& y) {
        const auto fx = nm.fingerprint(x.first), fy = nm.fingerprint(y.first);
        return fx != fy ? fx < fy : x.first < y.first;
    });
    std::vector<Namer::Word> key{tag(Tag::Census)};
    for (auto [l, s] : c) {
        key.push_back(Namer::ref(l));
        key.push_back(s);
    }
    return p.namer->intern(key);
}

Extension compute_extension(const PairColoring& base, std::span<const Point> y) {
    if (!base.namer) throw PreconditionError("compute_extension: base has no namer");
    std::vector<Relation> t;
    for (Point a : y) {
        if (a >= base.n) throw PreconditionError("compute_extension: point out of range");
        t.push_back({{a, a}});
    }
    Extension e;
    e.coloring = refine(initial_split(base, t), &e.iterations);
    e.census_id = census_name(e.coloring);
    return e;
}

ExtensionCache::ExtensionCache(PairColoring base) : base_(std::move(base)) {
    if (!base_.namer) adopt(base_);
    points_.resize(base_.n);
}

const Extension& ExtensionCache::point(Point a) {
    if (a >= n()) throw PreconditionError("ExtensionCache: point out of range");
    if (!points_[a]) {
        const Point y[1] = {a};
        points_[a] = std::make_unique<Extension>(compute_extension(base_, y));
    }
    return *points_[a];
}

const Extension& ExtensionCache::pair(Point a, Point b) {
    check_cap("two_point", n(), caps().two_point_n);
    if (a >= n() || b >= n()) throw PreconditionError("ExtensionCache: point out of range");
    if (pairs_.empty()) pairs_.resize(n() * n());
    auto& slot = pairs_[a * n() + b];
    if (!slot) {
        const Point y[2] = {a, b};
        slot = std::make_unique<Extension>(compute_extension(base_, y));
    }
    return *slot;
}

namespace {

// Fills empty slots; slot i is the extension at make_y(i).
template <class MakeY>
void fill(const PairColoring& base, std::vector<std::unique_ptr<Extension>>& slots, MakeY make_y) {
    const unsigned T = std::max(1u, std::min<unsigned>(num_threads(), static_cast<unsigned>(slots.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < slots.size();) {
            if (slots[i]) continue;
            const auto y = make_y(i);
            slots[i] = std::make_unique<Extension>(compute_extension(base, y));
        }
    };
    if (T == 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
}

}  // namespace

void ExtensionCache::fill_points() {
    fill(base_, points_, [](std::size_t i) { return std::vector<Point>{i}; });
}

void ExtensionCache::fill_pairs() {
    check_cap("two_point", n(), caps().two_point_n);
    if (pairs_.empty()) pairs_.resize(n() * n());
    const std::size_t m = n();
    fill(base_, pairs_, [m](std::size_t i) { return std::vector<Point>{i / m, i % m}; });
}

}  // namespace ccstab
