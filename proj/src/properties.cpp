#include "ccstab/properties.hpp"

#include <array>
#include <functional>

#include "ccstab/algiso.hpp"
#include "ccstab/cc2.hpp"
#include "ccstab/config.hpp"
#include "ccstab/oracles.hpp"
#include "ccstab/refine.hpp"
#include "ccstab/stab.hpp"
#include "ccstab/wlm.hpp"

namespace ccstab {

namespace {

PairColoring pr2(const MaryColoring& f) { return to_pair_coloring(project(f, 2)); }

// x with the loop at point 0 distinguished; y >= x.
PairColoring individualized(const PairColoring& x) {
    PairColoring a = x;
    if (!a.namer) adopt(a);
    const std::array<Relation, 1> t{Relation{{0, 0}}};
    return initial_split(a, t);
}

struct Collector {
    std::vector<PropertyCheck> out;
    void add(std::string name, bool ok, std::string detail = {}) {
        out.push_back({std::move(name), ok, std::move(detail)});
    }
};

void closure_laws(Collector& c, const std::string& op, const PairColoring& x,
                  const std::function<PairColoring(const PairColoring&)>& f) {
    const auto fx = f(x);
    c.add(op + "_extensive", partition_leq(x, fx));
    c.add(op + "_idempotent", same_partition(f(fx), fx));
    const auto y = individualized(x);
    c.add(op + "_monotone", partition_leq(fx, f(y)));
}

}  // namespace

std::vector<PropertyCheck> graph_properties(const PairColoring& x, const PropertyOptions& opt) {
    Collector c;
    const std::size_t n = x.n;
    const auto& cap = caps();
    const std::array<int, 2> s12{1, 2};
    const std::array<int, 4> s1234{1, 2, 3, 4};
    const bool two_point = n <= cap.two_point_n;

    const auto wl = wl_closure(x);
    const auto rep = validate_cc(wl.coloring);
    c.add("wl_valid", rep.ok());

    const auto wld = sesquiclosure(x);
    const auto sq = sesquiclosed_check(wld);
    c.add("wld_sesquiclosed", sq.ok(), "s1=" + std::to_string(sq.s1) + " s2=" + std::to_string(sq.s2));
    c.add("wl_leq_wld", partition_leq(wl.coloring, wld.coloring));

    if (n <= cap.wl3_n) {
        const auto wl3 = wlm_closure(x, 3);
        const auto p3 = pr2(wl3);
        c.add("pr2_wl3_eq_wld", same_partition(p3, wld.coloring),
              "ranks " + std::to_string(p3.rank()) + " / " + std::to_string(wld.rank()));
        c.add("wl3_of_wld_eq_wl3", same_partition(wlm_closure(wld.coloring, 3), wl3));

        if (opt.deep && two_point && n <= cap.wl4_n) {
            const auto w = deep_stab(x, s1234);
            const auto p4 = pr2(wlm_closure(x, 4));
            c.add("sandwich_lower", partition_leq(p3, w.coloring));
            c.add("sandwich_upper", partition_leq(w.coloring, p4),
                  "ranks " + std::to_string(p3.rank()) + " <= " + std::to_string(w.rank()) + " <= " +
                      std::to_string(p4.rank()));
        }

        const auto y = individualized(x);
        const auto init = initial_coloring(x, 3);
        c.add("wl3_extensive", partition_leq(init, wl3));
        c.add("wl3_idempotent", same_partition(wlm_refine(wl3), wl3));
        c.add("wl3_monotone", partition_leq(wl3, wlm_closure(y, 3)));
    }

    {
        const auto y = individualized(x);
        const auto wy = sesquiclosure(y);
        const auto meet = intersect_cc(wld, wy);
        c.add("sesquiclosed_intersection", sesquiclosed_check(meet).ok());
    }

    if (n <= cap.two_extension_n && n <= 16) {
        const auto bar = two_closure(wl);
        c.add("two_closure_geq_wld", partition_leq(wld.coloring, bar.coloring));
    }

    closure_laws(c, "wl", x, [](const PairColoring& p) { return wl_closure(p).coloring; });
    closure_laws(c, "wld", x, [](const PairColoring& p) { return sesquiclosure(p).coloring; });
    if (two_point)
        closure_laws(c, "deep_stab", x, [&](const PairColoring& p) { return deep_stab(p, s1234).coloring; });
    else
        closure_laws(c, "deep_stab12", x, [&](const PairColoring& p) { return deep_stab(p, s12).coloring; });

    if (opt.automorphisms && n <= cap.orbit_n) {
        const auto orb = brute_orbits(x);
        c.add("wl_leq_orbits", partition_leq(wl.coloring, orb.pairs));
        for (int i = 1; i <= 4; ++i) {
            if (i >= 3 && !two_point) break;
            const auto s = sigma(wl, i);
            bool ok = true;
            for (const auto& g : orb.generators) ok = ok && preserves(s.coloring, g);
            c.add("sigma" + std::to_string(i) + "_preserves_aut", ok,
                  std::to_string(orb.generators.size()) + " generators");
        }
    }
    return c.out;
}

}  // namespace ccstab
