#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ccstab/core.hpp"

namespace ccstab {

/// A point extension refined on its own inside the namer of its base.
///
/// Let X and X' be colorings in one namer whose classes are matched by equal
/// labels. Then that matching has the yy'-extension iff the extensions at y
/// and y' have equal `census_id`, and the extension maps each class to the
/// class with the same label. Equal final labels encode the whole history of
/// intersection numbers, so no separate search is needed.
struct Extension {
    PairColoring coloring;
    std::uint32_t census_id = 0;
    std::size_t iterations = 0;
};

/// Interned name of the census of p: (label, size) entries in fingerprint order.
std::uint32_t census_name(const PairColoring& p);

/// X_y with each 1_{y_i} distinguished as its own set. `base` must have a namer.
Extension compute_extension(const PairColoring& base, std::span<const Point> y);

/// Memoized one-point and two-point extensions of one base coloring.
class ExtensionCache {
public:
    /// A base without a namer is adopted into a fresh one.
    explicit ExtensionCache(PairColoring base);

    const PairColoring& base() const noexcept { return base_; }
    const NamerPtr& namer() const noexcept { return base_.namer; }
    std::size_t n() const noexcept { return base_.n; }

    const Extension& point(Point a);
    /// Two-point extension at (a,b); checks the two_point cap.
    const Extension& pair(Point a, Point b);

    /// Computes every missing entry, in parallel when threads are enabled.
    void fill_points();
    void fill_pairs();

private:
    PairColoring base_;
    std::vector<std::unique_ptr<Extension>> points_;
    std::vector<std::unique_ptr<Extension>> pairs_;
};

}  // namespace ccstab
