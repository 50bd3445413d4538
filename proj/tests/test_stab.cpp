#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "ccstab/algiso.hpp"
#include "ccstab/cc2.hpp"
#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/extension.hpp"
#include "ccstab/graph.hpp"
#include "ccstab/oracles.hpp"
#include "ccstab/planes.hpp"
#include "ccstab/stab.hpp"
#include "ccstab/wlm.hpp"
#include "test_util.hpp"

using namespace ccstab;

namespace {

Graph shrikhande_rook() { return disjoint_union(shrikhande_graph(), rook_graph(4)); }

constexpr std::array<int, 4> kAll{1, 2, 3, 4};
constexpr std::array<int, 2> kOneTwo{1, 2};

PairColoring pr2_wl3(const PairColoring& x) { return to_pair_coloring(project(wlm_closure(x, 3), 2)); }

}  // namespace

TEST_CASE("similarity classes") {
    SUBCASE("complete graph, points") {
        for (std::size_t n = 3; n <= 6; ++n) {
            const auto s = wl_closure(to_rainbow(complete_graph(n)));
            CHECK(sim_classes(s, 1).count() == 1);
        }
    }
    SUBCASE("Shrikhande plus rook splits into its components") {
        const auto s = wl_closure(to_rainbow(shrikhande_rook()));
        const auto c = sim_classes(s, 1);
        REQUIRE(c.count() == 2);
        for (Point a = 0; a < 32; ++a) CHECK(c.class_of[a] == c.class_of[a < 16 ? 0 : 16]);
        CHECK(c.class_of[0] != c.class_of[16]);
    }
    SUBCASE("complete graph, pairs") {
        for (std::size_t n = 4; n <= 5; ++n) {
            const auto s = wl_closure(to_rainbow(complete_graph(n)));
            const auto c = sim_classes(s, 3);
            CHECK(c.count() == 2);
            // pairwise extension oracle
            const auto id = identity_witness(s);
            for (Point a = 0; a < n; ++a)
                for (Point b = 0; b < n; ++b) {
                    if (a == b) continue;
                    const std::array<Point, 2> x{0, 1}, y{a, b};
                    CHECK(extend_point(id, x, y));
                    CHECK(c.class_of[a * n + b] == c.class_of[1]);
                }
        }
    }
    SUBCASE("classes sit inside fibers and basis relations") {
        for (const auto& g : {petersen_graph(), path_graph(5), shrikhande_graph(), cycle_graph(6)}) {
            const auto s = wl_closure(to_rainbow(g));
            const std::size_t n = g.n;
            for (int i = 1; i <= 4; ++i) {
                const auto c = sim_classes(s, i);
                std::vector<std::set<std::uint32_t>> hosts(c.count());
                if (i == 1) {
                    for (Point a = 0; a < n; ++a) hosts[c.class_of[a]].insert(s.fiber_of[a]);
                } else {
                    for (std::size_t cell = 0; cell < n * n; ++cell) hosts[c.class_of[cell]].insert(s.coloring.color[cell]);
                }
                for (const auto& h : hosts) CHECK(h.size() == 1);
            }
            // sim_4 refines sim_3
            const auto c3 = sim_classes(s, 3), c4 = sim_classes(s, 4);
            std::vector<std::set<std::uint32_t>> up(c4.count());
            for (std::size_t cell = 0; cell < n * n; ++cell) up[c4.class_of[cell]].insert(c3.class_of[cell]);
            for (const auto& h : up) CHECK(h.size() == 1);
        }
    }
}

TEST_CASE("sigma operators") {
    SUBCASE("sigma_1 fixes complete graphs") {
        const auto s = wl_closure(to_rainbow(complete_graph(5)));
        CHECK(same_partition(sigma(s, 1).coloring, s.coloring));
    }
    SUBCASE("sigma_1 separates Shrikhande from rook") {
        const auto s = wl_closure(to_rainbow(shrikhande_rook()));
        CHECK(sigma(s, 1).fibers.size() >= 2);
    }
    SUBCASE("sigma_2 fixes plane schemes") {
        for (unsigned q : {2u, 3u}) {
            const auto s = plane_scheme(pg2(q));
            CHECK(same_partition(sigma(s, 2).coloring, s.coloring));
        }
    }
    SUBCASE("strict matching refines the default") {
        for (const auto& g : {shrikhande_graph(), path_graph(6), petersen_graph()}) {
            const auto s = wl_closure(to_rainbow(g));
            for (int i : {2, 4}) {
                const auto loose = sigma(s, i), strict = sigma(s, i, SimOptions{true});
                CHECK(partition_leq(loose.coloring, strict.coloring));
                CHECK(partition_leq(s.coloring, loose.coloring));
            }
        }
    }
    SUBCASE("automorphisms survive every sigma") {
        for (std::size_t n = 3; n <= 6; ++n)
            for (const auto& g : all_graphs(n)) {
                const auto x = to_rainbow(g);
                const auto s = wl_closure(x);
                const auto gens = brute_orbits(x).generators;
                for (int i = 1; i <= 4; ++i) {
                    const auto out = sigma(s, i);
                    for (const auto& h : gens) CHECK(preserves(out.coloring, h));
                }
            }
    }
}

TEST_CASE("sesquiclosure") {
    SUBCASE("complete graph") {
        CHECK(sesquiclosure(to_rainbow(complete_graph(5))).rank() == 2);
    }
    SUBCASE("plane schemes are fixed") {
        for (unsigned q : {2u, 3u, 4u}) {
            const auto s = plane_scheme(pg2(q));
            CHECK(same_partition(sesquiclosure(s.coloring).coloring, s.coloring));
        }
    }
    SUBCASE("Shrikhande: the non-adjacency relation splits") {
        const auto x = to_rainbow(shrikhande_graph());
        const auto wld = sesquiclosure(x);
        CHECK(wld.rank() == 4);
        CHECK(test_util::sorted_valencies(wld) == std::vector<std::size_t>{1, 3, 6, 6});
        const Caps saved = caps();
        apply_cap_override("orbit=16");
        CHECK(same_partition(wld.coloring, brute_orbits(x).pairs));
        set_caps(saved);
    }
    SUBCASE("output is sesquiclosed and below the WL_3 projection") {
        for (const auto& ng : named_graphs()) {
            if (ng.g.n > 16) continue;
            CAPTURE(ng.name);
            const auto x = to_rainbow(ng.g);
            const auto wld = sesquiclosure(x);
            CHECK(sesquiclosed_check(wld).ok());
            CHECK(partition_leq(wl_closure(x).coloring, wld.coloring));
            CHECK(same_partition(pr2_wl3(x), wld.coloring));
        }
    }
    SUBCASE("intersection of sesquiclosed configurations") {
        for (const auto& g : {petersen_graph(), shrikhande_graph(), path_graph(6)}) {
            auto x = to_rainbow(g);
            adopt(x);
            const std::array<Relation, 1> t{Relation{{1, 1}}};
            const auto a = sesquiclosure(x), b = sesquiclosure(initial_split(x, t));
            CHECK(sesquiclosed_check(intersect_cc(a, b)).ok());
        }
    }
}

TEST_CASE("depth-1 stabilization") {
    SUBCASE("complete graph") {
        CHECK(deep_stab(to_rainbow(complete_graph(5)), kAll).rank() == 2);
    }
    SUBCASE("components of Shrikhande plus rook become fibers") {
        const auto w = deep_stab(to_rainbow(shrikhande_rook()), kOneTwo);
        REQUIRE(w.fibers.size() >= 2);
        for (Point a = 0; a < 16; ++a)
            for (Point b = 16; b < 32; ++b) CHECK(w.fiber_of[a] != w.fiber_of[b]);
    }
    SUBCASE("selection {1,2} is the sesquiclosure") {
        for (const auto& g : {shrikhande_graph(), path_graph(6), petersen_graph()}) {
            const auto x = to_rainbow(g);
            CHECK(same_partition(deep_stab(x, kOneTwo).coloring, sesquiclosure(x).coloring));
        }
    }
    SUBCASE("trace records every application") {
        const auto r = deep_stab_traced(to_rainbow(shrikhande_graph()), kOneTwo);
        REQUIRE_FALSE(r.trace.empty());
        CHECK(r.trace.front().rank_before == 3);
        CHECK(r.trace.back().rank_after == r.cc.rank());
        for (std::size_t k = 0; k < r.trace.size(); ++k) CHECK(r.trace[k].iteration == k + 1);
    }
    SUBCASE("fixed points under shuffled orders") {
        std::mt19937 rng(21);
        std::size_t differ = 0, runs = 0;
        for (std::size_t n = 3; n <= 6; ++n)
            for (const auto& g : all_graphs(n)) {
                const auto x = to_rainbow(g);
                const auto ref = deep_stab(x, kAll);
                std::array<int, 4> order = kAll;
                std::shuffle(order.begin(), order.end(), rng);
                const auto other = deep_stab_traced(x, order).cc;
                for (int i = 1; i <= 4; ++i) CHECK(sigma(other, i).rank() == other.rank());
                ++runs;
                differ += !same_partition(ref.coloring, other.coloring);
            }
        MESSAGE("shuffled sigma orders: " << differ << " of " << runs << " fixed points differ");
    }
    SUBCASE("caps") {
        Caps c = caps();
        const Caps saved = c;
        c.two_point_n = 8;
        set_caps(c);
        CHECK_THROWS_AS(deep_stab(to_rainbow(petersen_graph()), kAll), CapExceeded);
        CHECK_NOTHROW(deep_stab(to_rainbow(petersen_graph()), kOneTwo));
        set_caps(saved);
        CHECK_THROWS_AS(deep_stab(to_rainbow(petersen_graph()), std::array<int, 1>{5}), PreconditionError);
    }
}

TEST_CASE("extension counts") {
    SUBCASE("n_y(x) is at least one") {
        for (const auto& g : {path_graph(4), cycle_graph(5)}) {
            const auto s = wl_closure(to_rainbow(g));
            for (Point a = 0; a < g.n; ++a)
                for (Point b = 0; b < g.n; ++b)
                    for (Point c = 0; c < g.n; ++c)
                        for (Point d = 0; d < g.n; d += 2) CHECK(n_y_count(s, {a, b}, {c, d}) >= 1);
        }
    }
    SUBCASE("complete graph on four points") {
        const auto s = wl_closure(to_rainbow(complete_graph(4)));
        CHECK(n_alpha_count(s, {0, 1}, 2) == 2);
        CHECK(n_y_count(s, {0, 1}, {2, 2}) == 2);
    }
    SUBCASE("counts are invariant under automorphisms") {
        const auto x = to_rainbow(petersen_graph());
        const auto s = wl_closure(x);
        const auto gens = brute_orbits(x).generators;
        std::mt19937 rng(8);
        for (int trial = 0; trial < 20; ++trial) {
            const Point a = rng() % 10, b = rng() % 10, c = rng() % 10, d = rng() % 10;
            for (const auto& h : gens) {
                CHECK(n_y_count(s, {a, b}, {c, d}) == n_y_count(s, {h[a], h[b]}, {h[c], h[d]}));
                CHECK(n_alpha_count(s, {a, b}, c) == n_alpha_count(s, {h[a], h[b]}, h[c]));
            }
        }
    }
}

TEST_CASE("extension cache") {
    const auto s = wl_closure(to_rainbow(shrikhande_graph()));
    SUBCASE("entries equal a fresh computation") {
        ExtensionCache cache(s.coloring);
        for (Point a = 0; a < 16; a += 3) {
            const std::array<Point, 1> y{a};
            const auto fresh = compute_extension(cache.base(), y);
            CHECK(cache.point(a).coloring.color == fresh.coloring.color);
            CHECK(cache.point(a).coloring.labels == fresh.coloring.labels);
            CHECK(cache.point(a).census_id == fresh.census_id);
            const std::array<Point, 2> z{a, (a + 5) % 16};
            CHECK(cache.pair(z[0], z[1]).census_id == compute_extension(cache.base(), z).census_id);
        }
    }
    SUBCASE("parallel fill matches sequential") {
        ExtensionCache seq(s.coloring);
        seq.fill_points();
        set_num_threads(4);
        ExtensionCache par(s.coloring);
        par.fill_points();
        set_num_threads(1);
        for (Point a = 0; a < 16; ++a) CHECK(seq.point(a).coloring.color == par.point(a).coloring.color);
        // names are interned per namer; compare the census names through fingerprints
        for (Point a = 0; a < 16; ++a)
            CHECK(seq.namer()->fingerprint(seq.point(a).census_id) == par.namer()->fingerprint(par.point(a).census_id));
    }
}
