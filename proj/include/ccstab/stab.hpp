#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccstab/cc2.hpp"
#include "ccstab/extension.hpp"

namespace ccstab {

struct SimOptions {
    /// Match the counts n_alpha(x) / n_y(x) as multisets instead of sets.
    bool strict = false;
};

/// Classes of ~_i. For i = 1 the classes partition the points; otherwise
/// they partition the cells a * n + b.
struct SimClasses {
    int index = 0;
    std::size_t n = 0;
    std::vector<std::uint32_t> class_of;  // dense class id per point or cell
    std::vector<std::uint32_t> names;     // interned name per class
    std::size_t count() const noexcept { return names.size(); }
    /// T_i: the classes as relations (for i = 1 the reflexive relations 1_C).
    std::vector<Relation> family() const;
};

/// `cache`, if given, must be built on cc.coloring (same namer and labels).
SimClasses sim_classes(const CoherentConfiguration& cc, int i, const SimOptions& opt = {},
                       ExtensionCache* cache = nullptr);

/// sigma_i(X) = WL(X, T_i).
CoherentConfiguration sigma(const CoherentConfiguration& cc, int i, const SimOptions& opt = {},
                            ExtensionCache* cache = nullptr);

/// n_y(x): pairs y' whose extension is name-equal to X_y and give x the same color.
std::size_t n_y_count(const CoherentConfiguration& cc, PointPair x, PointPair y);
/// n_alpha(x), computed from one-point extensions.
std::size_t n_alpha_count(const CoherentConfiguration& cc, PointPair x, Point alpha);

struct StabStep {
    std::size_t iteration = 0;
    int sigma = 0;
    std::size_t rank_before = 0, rank_after = 0;
};

struct StabResult {
    CoherentConfiguration cc;
    std::vector<StabStep> trace;
};

/// Fixed point of the sigma_i for i in `order`, tried in that order and
/// restarted from the front after every strict growth. Starts from
/// wl_closure(x).
StabResult deep_stab_traced(const PairColoring& x, std::span<const int> order, const SimOptions& opt = {});
/// `selected` is applied in ascending order.
CoherentConfiguration deep_stab(const PairColoring& x, std::span<const int> selected, const SimOptions& opt = {});

/// WLD(x): the sigma_1 / sigma_2 fixed point.
CoherentConfiguration sesquiclosure(const PairColoring& x);
StabResult sesquiclosure_traced(const PairColoring& x);

}  // namespace ccstab
