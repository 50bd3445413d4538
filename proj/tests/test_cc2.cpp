#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>

#include "ccstab/cc2.hpp"
#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/graph.hpp"
#include "ccstab/oracles.hpp"
#include "ccstab/planes.hpp"
#include "ccstab/refine.hpp"
#include "ccstab/stab.hpp"
#include "test_util.hpp"

using namespace ccstab;
using test_util::sorted_valencies;
using test_util::triangle_count;

namespace {

std::uint32_t class_with_label(const PairColoring& p, std::uint32_t label) {
    const auto it = std::find(p.labels.begin(), p.labels.end(), label);
    REQUIRE(it != p.labels.end());
    return static_cast<std::uint32_t>(it - p.labels.begin());
}

PairColoring individualize(const PairColoring& x, Point a) {
    PairColoring y = x;
    if (!y.namer) adopt(y);
    const std::array<Relation, 1> t{Relation{{a, a}}};
    return initial_split(y, t);
}

}  // namespace

TEST_CASE("closure of small graphs") {
    SUBCASE("complete graph") {
        const auto cc = wl_closure(to_rainbow(complete_graph(4)));
        CHECK(cc.rank() == 2);
        CHECK(cc.valencies == std::vector<std::size_t>{1, 3});
    }
    SUBCASE("Petersen equals its orbit configuration") {
        const auto x = to_rainbow(petersen_graph());
        const auto cc = wl_closure(x);
        CHECK(cc.rank() == 3);
        CHECK(sorted_valencies(cc) == std::vector<std::size_t>{1, 3, 6});
        CHECK(validate_cc(cc.coloring).ok());
        CHECK(same_partition(cc.coloring, brute_orbits(x).pairs));
    }
    SUBCASE("Heawood") {
        const auto cc = wl_closure(to_rainbow(heawood_graph()));
        CHECK(cc.rank() == 4);
        CHECK(cc.valencies == std::vector<std::size_t>{1, 6, 3, 4});
    }
}

TEST_CASE("intersection numbers") {
    SUBCASE("complete graph") {
        const auto cc = wl_closure(to_rainbow(complete_graph(4)));
        const auto T = intersection_numbers(cc);
        CHECK(T.at(1, 1, 1) == 2);
    }
    SUBCASE("Petersen is triangle-free") {
        const auto x = to_rainbow(petersen_graph());
        const auto cc = wl_closure(x);
        const auto g = petersen_graph();
        Point v = 1;
        while (!g.edge(0, v)) ++v;
        const auto e = cc.coloring.at(0, v);
        std::size_t triangles = 0;
        for (Point a = 0; a < 10; ++a)
            for (Point b = 0; b < 10; ++b)
                for (Point c = 0; c < 10; ++c) triangles += g.edge(a, b) && g.edge(b, c) && g.edge(a, c);
        REQUIRE(triangles == 0);
        CHECK(intersection_numbers(cc).at(e, e, e) == 0);
    }
    SUBCASE("Fano plane: two points on one common line") {
        const auto p = pg2(2);
        const auto cc = plane_scheme(p);
        const auto s1 = class_with_label(cc.coloring, 1), s2 = class_with_label(cc.coloring, 2);
        // count lines through two distinct points directly
        for (Point a = 0; a < 7; ++a)
            for (Point b = a + 1; b < 7; ++b) {
                std::size_t common = 0;
                for (const auto& l : p.lines)
                    common += std::count(l.begin(), l.end(), a) && std::count(l.begin(), l.end(), b);
                CHECK(common == 1);
            }
        CHECK(intersection_numbers(cc).at(s2, s2, s1) == 1);
    }
    SUBCASE("agree with direct counts and the row-sum identity") {
        for (const auto& g : {petersen_graph(), heawood_graph(), disjoint_union(complete_graph(3), complete_graph(4)),
                              path_graph(5)}) {
            const auto cc = wl_closure(to_rainbow(g));
            const auto T = intersection_numbers(cc);
            const std::size_t R = cc.rank(), n = cc.n();
            for (Point a = 0; a < n; ++a)
                for (Point b = 0; b < n; ++b) {
                    const auto t = cc.coloring.at(a, b);
                    for (std::uint32_t r = 0; r < R; ++r) {
                        std::size_t row = 0;
                        for (std::uint32_t s = 0; s < R; ++s) {
                            CHECK(T.at(r, s, t) == triangle_count(cc.coloring, a, b, r, s));
                            row += T.at(r, s, t);
                        }
                        const bool left = cc.supports[r].first == cc.supports[t].first;
                        CHECK(row == (left ? cc.valencies[r] : 0));
                    }
                }
        }
    }
}

TEST_CASE("coherence validation") {
    CHECK(validate_cc(PairColoring::trivial(2)).ok());
    CHECK(validate_cc(PairColoring::trivial(5)).ok());

    const auto p3 = to_rainbow(path_graph(3));
    const auto rep = validate_cc(p3);
    CHECK(rep.c1);
    CHECK(rep.c2);
    CHECK_FALSE(rep.c3);
    REQUIRE(rep.c3_witness);
    const auto& w = *rep.c3_witness;
    const auto canon = canonical_renumber(p3);
    CHECK(triangle_count(canon, w.first.first, w.first.second, w.r, w.s) == w.count_first);
    CHECK(triangle_count(canon, w.second.first, w.second.second, w.r, w.s) == w.count_second);
    CHECK(w.count_first != w.count_second);

    for (const auto& ng : named_graphs()) {
        if (ng.g.n > 16) continue;
        CAPTURE(ng.name);
        CHECK(validate_cc(wl_closure(to_rainbow(ng.g)).coloring).ok());
    }
}

TEST_CASE("restriction") {
    const auto pet = wl_closure(to_rainbow(petersen_graph()));
    std::vector<Point> all(10);
    for (Point a = 0; a < 10; ++a) all[a] = a;
    CHECK(restrict(pet, all).coloring.color == pet.coloring.color);

    const auto u = wl_closure(to_rainbow(disjoint_union(complete_graph(3), complete_graph(4))));
    REQUIRE(u.fibers.size() == 2);
    const auto& small = u.fibers[0].size() == 3 ? u.fibers[0] : u.fibers[1];
    const auto r = restrict(u, small);
    CHECK(r.n() == 3);
    CHECK(r.rank() == 2);

    const std::vector<Point> bad{0, 1};
    CHECK_THROWS_AS(restrict(u, bad), PreconditionError);
}

TEST_CASE("tensor square") {
    const auto k2 = wl_closure(to_rainbow(complete_graph(2)));
    const auto t2 = tensor_square(k2);
    CHECK(t2.n() == 4);
    CHECK(t2.rank() == 4);

    const auto k3 = wl_closure(to_rainbow(complete_graph(3)));
    const auto t3 = tensor_square(k3);
    const auto& c = k3.coloring;
    for (Point x = 0; x < 9; ++x)
        for (Point y = 0; y < 9; ++y)
            for (Point u = 0; u < 9; ++u)
                for (Point v = 0; v < 9; ++v) {
                    const bool same = t3.coloring.at(x, y) == t3.coloring.at(u, v);
                    const bool def = c.at(x / 3, y / 3) == c.at(u / 3, v / 3) && c.at(x % 3, y % 3) == c.at(u % 3, v % 3);
                    CHECK(same == def);
                }

    const auto fano = tensor_square(plane_scheme(pg2(2)));
    CHECK(fano.rank() == 16);
    CHECK(validate_cc(fano.coloring).ok());
}

TEST_CASE("point extensions") {
    SUBCASE("plane schemes have rank 24") {
        for (unsigned q : {3u, 4u, 5u}) {
            CAPTURE(q);
            const auto p = pg2(q);
            const auto scheme = plane_scheme(p);
            for (Point a : {Point{0}, Point(p.points + 1)}) {
                const std::array<Point, 1> y{a};
                const auto ext = point_extension(scheme, y);
                CHECK(ext.rank() == 24);
                std::multiset<std::size_t> sizes;
                for (const auto& f : ext.fibers) sizes.insert(f.size());
                CHECK(sizes == std::multiset<std::size_t>{1, q * q + q, q + 1, q * q});
                // fibers are the sets alpha s_i
                for (const auto& f : ext.fibers) {
                    const int rel = plane_relation(p, a, f[0]);
                    for (Point b : f) CHECK(plane_relation(p, a, b) == rel);
                }
            }
        }
    }
    SUBCASE("Shrikhande has four fibers at every point") {
        const auto cc = wl_closure(to_rainbow(shrikhande_graph()));
        for (Point a = 0; a < 16; ++a) {
            const std::array<Point, 1> y{a};
            CHECK(point_extension(cc, y).fibers.size() == 4);
        }
    }
    SUBCASE("complete graphs match the stabilizer orbits") {
        for (std::size_t n = 4; n <= 6; ++n) {
            const auto x = to_rainbow(complete_graph(n));
            const auto cc = wl_closure(x);
            const std::array<Point, 1> y{1};
            const auto ext = point_extension(cc, y);
            CHECK(ext.rank() == 5);
            CHECK(same_partition(ext.coloring, brute_orbits(individualize(x, 1)).pairs));
        }
    }
}

TEST_CASE("2-extension and 2-closure") {
    SUBCASE("2-closure of a plane scheme is the scheme") {
        for (unsigned q : {2u, 3u}) {
            const auto s = plane_scheme(pg2(q));
            CHECK(same_partition(two_closure(s).coloring, s.coloring));
        }
    }
    SUBCASE("e is a parabolic of the complete graph 2-extension") {
        const auto k3 = wl_closure(to_rainbow(complete_graph(3)));
        const auto ext = two_extension(k3);
        CHECK(parabolic_report(ext, k3).e_is_union);
    }
    SUBCASE("classes inside e match the one-point extension rank") {
        const auto s = plane_scheme(pg2(3));
        const auto ext = two_extension(s);
        CHECK(ext.rank() == 208);
        const auto par = parabolic_report(ext, s);
        CHECK(par.e_is_union);
        const std::array<Point, 1> y{0};
        CHECK(par.classes.size() == point_extension(s, y).rank());
        CHECK(par.row_counts == std::array<std::size_t, 4>{1, 9, 2, 12});
    }
    SUBCASE("2-closure is above the sesquiclosure") {
        for (const auto& ng : named_graphs()) {
            if (ng.g.n > 16) continue;
            CAPTURE(ng.name);
            const auto x = to_rainbow(ng.g);
            CHECK(partition_leq(sesquiclosure(x).coloring, two_closure(wl_closure(x)).coloring));
        }
    }
    SUBCASE("cap") {
        Caps c = caps();
        const Caps saved = c;
        c.two_extension_n = 5;
        set_caps(c);
        CHECK_THROWS_AS(two_extension(wl_closure(to_rainbow(complete_graph(6)))), CapExceeded);
        set_caps(saved);
    }
}

TEST_CASE("intersection of configurations") {
    const auto pet = wl_closure(to_rainbow(petersen_graph()));
    CHECK(same_partition(intersect_cc(pet, pet).coloring, pet.coloring));
    const auto disc = as_cc(PairColoring::discrete(10));
    CHECK(same_partition(intersect_cc(disc, pet).coloring, pet.coloring));
    const std::array<Point, 1> a{0}, b{3};
    const auto m = intersect_cc(point_extension(pet, a), point_extension(pet, b));
    CHECK(validate_cc(m.coloring).ok());
    CHECK(partition_leq(pet.coloring, m.coloring));
    CHECK_THROWS_AS(intersect_cc(pet, wl_closure(to_rainbow(complete_graph(3)))), PreconditionError);
}

TEST_CASE("closure is a closure operator on small graphs") {
    for (std::size_t n = 2; n <= 5; ++n)
        for (const auto& g : all_graphs(n)) {
            const auto x = to_rainbow(g);
            const auto cx = wl_closure(x);
            CHECK(partition_leq(x, cx.coloring));
            CHECK(same_partition(wl_closure(cx.coloring).coloring, cx.coloring));
            const auto y = individualize(x, 0);
            CHECK(partition_leq(cx.coloring, wl_closure(y).coloring));
        }
}

TEST_CASE("automorphisms preserve the closure") {
    for (std::size_t n = 3; n <= 6; ++n)
        for (const auto& g : all_graphs(n)) {
            const auto x = to_rainbow(g);
            const auto cc = wl_closure(x);
            const auto auts = test_util::all_automorphisms(x);
            for (const auto& h : auts) CHECK(preserves(cc.coloring, h));
            // orbit partition refines the closure
            CHECK(partition_leq(cc.coloring, brute_orbits(x).pairs));
        }
}
