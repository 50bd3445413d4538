#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccstab/core.hpp"

namespace ccstab {

struct CoherentConfiguration {
    PairColoring coloring;
    std::vector<std::vector<Point>> fibers;
    std::vector<std::uint32_t> fiber_of;  // point -> fiber index
    // per class: (left fiber, right fiber), |alpha s| for alpha on the left,
    // |s beta| for beta on the right
    std::vector<std::pair<std::uint32_t, std::uint32_t>> supports;
    std::vector<std::size_t> valencies;
    std::vector<std::size_t> right_valencies;
    std::size_t iterations = 0;

    std::size_t n() const noexcept { return coloring.n; }
    std::size_t rank() const noexcept { return coloring.rank(); }
};

/// Wraps a coloring that is known to be coherent; fills fibers, supports and
/// valencies. Throws PreconditionError if (C1), (C2) or the fiber-product
/// condition fail. (C3) is not rechecked here; see validate_cc.
CoherentConfiguration as_cc(PairColoring p, std::size_t iterations = 0);

/// Coherent closure WL(x, T). A coloring without a namer is adopted into a
/// fresh one (the input itself is not modified).
CoherentConfiguration wl_closure(const PairColoring& x, std::span<const Relation> distinguished = {});

/// c_{r,s}^t as a flat R^3 array indexed [(r * R + s) * R + t].
struct IntersectionTensor {
    std::size_t R = 0;
    std::vector<std::uint32_t> c;
    std::uint32_t at(std::size_t r, std::size_t s, std::size_t t) const { return c[(r * R + s) * R + t]; }
};

IntersectionTensor intersection_numbers(const CoherentConfiguration& cc);

struct CCReport {
    bool c1 = true, c2 = true, c3 = true;
    std::optional<PointPair> c1_witness;
    std::optional<std::pair<PointPair, PointPair>> c2_witness;
    struct C3Witness {
        std::uint32_t r, s, t;
        PointPair first, second;
        std::uint32_t count_first, count_second;
    };
    std::optional<C3Witness> c3_witness;
    bool ok() const noexcept { return c1 && c2 && c3; }
};

CCReport validate_cc(const PairColoring& p);

/// Restriction to a homogeneity set; points are renumbered in increasing order
/// of `delta`. Labels are kept.
CoherentConfiguration restrict(const CoherentConfiguration& cc, std::span<const Point> delta);

/// Tensor square on Omega^2, point (x1,x2) numbered x1 * n + x2.
CoherentConfiguration tensor_square(const CoherentConfiguration& cc);

/// X_y: closure with every singleton 1_{y_i} distinguished (as separate sets,
/// so the order of y matters).
CoherentConfiguration point_extension(const CoherentConfiguration& cc, std::span<const Point> y);

CoherentConfiguration two_extension(const CoherentConfiguration& cc);
/// Restriction of the 2-extension to diag(Omega^2), pulled back to Omega.
CoherentConfiguration two_closure_from(const CoherentConfiguration& ext, std::size_t n);
CoherentConfiguration two_closure(const CoherentConfiguration& cc);

/// Classes of a 2-extension inside the parabolic e (pairs with equal second
/// coordinate), grouped by the type of the point triple of a representative
/// ((beta,alpha),(gamma,alpha)).
struct ParabolicReport {
    bool e_is_union = true;
    std::vector<std::uint32_t> classes;  // dense ids in the 2-extension
    // rows: all three points equal; exactly two distinct; three distinct
    // points pairwise in one basis relation of X; three distinct otherwise
    std::array<std::size_t, 4> row_counts{};
    std::vector<int> row_of_class;
};

ParabolicReport parabolic_report(const CoherentConfiguration& ext, const CoherentConfiguration& base);

/// Intersection of coherent configurations: join of the two partitions.
CoherentConfiguration intersect_cc(const CoherentConfiguration& a, const CoherentConfiguration& b);

}  // namespace ccstab
