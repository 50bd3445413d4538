#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ccstab/graph.hpp"
#include "ccstab/properties.hpp"

using namespace ccstab;

namespace {

std::size_t failures(const Graph& g, const PropertyOptions& opt = {}) {
    std::size_t bad = 0;
    for (const auto& c : graph_properties(to_rainbow(g), opt)) {
        if (c.ok) continue;
        ++bad;
        MESSAGE(c.name << ": " << c.detail);
    }
    return bad;
}

}  // namespace

TEST_CASE("properties on all graphs with at most 5 vertices") {
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& g : all_graphs(n)) CHECK(failures(g) == 0);
}

TEST_CASE("properties on small named graphs") {
    for (const auto& ng : named_graphs()) {
        if (ng.g.n > 14) continue;
        CAPTURE(ng.name);
        CHECK(failures(ng.g) == 0);
    }
}

TEST_CASE("shallow checks skip the sandwich") {
    const auto deep = graph_properties(to_rainbow(petersen_graph()));
    const auto shallow = graph_properties(to_rainbow(petersen_graph()), PropertyOptions{false, false});
    CHECK(shallow.size() < deep.size());
    for (const auto& c : shallow) CHECK(c.name.rfind("sandwich", 0) == std::string::npos);
}
