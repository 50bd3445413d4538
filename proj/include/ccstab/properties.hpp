#pragma once

#include <string>
#include <vector>

#include "ccstab/core.hpp"

namespace ccstab {

struct PropertyCheck {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct PropertyOptions {
    bool deep = true;           // sandwich with W and pr_2 WL_4
    bool automorphisms = true;  // sigma_i against brute-forced generators
};

/// Cross-engine identities for one rainbow: closure validity, the WLD / WL_3
/// identities, the sandwich, closure-operator laws and automorphism
/// preservation. Steps whose caps would be exceeded are skipped.
std::vector<PropertyCheck> graph_properties(const PairColoring& x, const PropertyOptions& opt = {});

}  // namespace ccstab
