#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccstab/algiso.hpp"
#include "ccstab/cc2.hpp"
#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/graph.hpp"
#include "ccstab/oracles.hpp"
#include "ccstab/planes.hpp"
#include "ccstab/properties.hpp"
#include "ccstab/stab.hpp"
#include "ccstab/wlm.hpp"
#include "json.hpp"

using namespace ccstab;
using ojson = nlohmann::ordered_json;

namespace {

// A pair-coloring file starts with an `m` header; anything else is a graph.
PairColoring load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::istringstream probe(text);
    std::string line;
    bool pair = false;
    while (std::getline(probe, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        pair = line[pos] == 'm';
        break;
    }
    std::istringstream is(text);
    try {
        if (pair) return read_pair_coloring(is);
        return to_rainbow(read_graph(is));
    } catch (const FormatError& e) {
        throw Error(path + ": " + e.what());
    }
}

ojson cc_report(const CoherentConfiguration& cc, bool tensor) {
    ojson j;
    j["rank"] = cc.rank();
    j["valencies"] = cc.valencies;
    j["n"] = cc.n();
    j["fibers"] = cc.fibers;
    j["iterations"] = cc.iterations;
    if (tensor) {
        const auto T = intersection_numbers(cc);
        ojson entries = ojson::array();
        const std::size_t R = cc.rank();
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t s = 0; s < R; ++s)
                for (std::size_t t = 0; t < R; ++t)
                    if (const auto v = T.at(r, s, t)) entries.push_back({r, s, t, v});
        j["intersection_numbers"] = entries;
    }
    return j;
}

ojson trace_json(const std::vector<StabStep>& trace) {
    ojson t = ojson::array();
    for (const auto& s : trace)
        t.push_back({{"iteration", s.iteration}, {"sigma", s.sigma}, {"rank_before", s.rank_before},
                     {"rank_after", s.rank_after}});
    return t;
}

void dump_coloring(const std::string& path, const PairColoring& p) {
    if (path.empty()) return;
    std::ofstream out(path);
    write_pair_coloring(out, p);
}

std::vector<Point> parse_points(const std::string& s) {
    std::vector<Point> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) throw PreconditionError("bad point list: " + s);
        out.push_back(v);
    }
    return out;
}

void check_points(const std::vector<Point>& y, std::size_t n) {
    for (auto a : y)
        if (a >= n) throw PreconditionError("point " + std::to_string(a) + " out of range");
}

void emit(const ojson& j, bool pretty) { std::cout << (pretty ? j.dump(2) : j.dump()) << "\n"; }

ojson to_ojson(const nlohmann::json& j) { return ojson::parse(j.dump()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent configurations, Weisfeiler-Leman closures and depth-1 stabilization"};
    app.require_subcommand(1);
    bool pretty = false;
    unsigned threads = 1;
    app.add_flag("--pretty", pretty, "Indent JSON output");
    app.add_option("--threads", threads, "Bound on internal parallelism")->check(CLI::PositiveNumber);

    std::string in1, in2, dump;
    bool tensor = false;

    auto* refine_cmd = app.add_subcommand("refine", "2-dim WL closure report");
    refine_cmd->add_option("input", in1)->required();
    refine_cmd->add_flag("--tensor", tensor, "Include nonzero intersection numbers");
    refine_cmd->add_option("--dump", dump, "Write the closure as a pair-coloring file");

    std::size_t m = 3;
    auto* wlm_cmd = app.add_subcommand("wlm", "m-dim WL closure census");
    wlm_cmd->add_option("--m", m, "Arity")->check(CLI::Range(2, 4));
    wlm_cmd->add_option("input", in1)->required();
    wlm_cmd->add_option("--dump", dump, "Write the m-ary coloring");

    auto* wld_cmd = app.add_subcommand("wld", "Sesquiclosure report");
    wld_cmd->add_option("input", in1)->required();
    wld_cmd->add_flag("--tensor", tensor);
    wld_cmd->add_option("--dump", dump);

    std::vector<int> sigmas{1, 2, 3, 4};
    bool strict = false;
    auto* deep_cmd = app.add_subcommand("deepstab", "Depth-1 stabilization report with trace");
    deep_cmd->add_option("--sigmas", sigmas, "Selected operators")->delimiter(',')->check(CLI::Range(1, 4));
    deep_cmd->add_flag("--strict", strict, "Multiset matching for the count relations");
    deep_cmd->add_option("input", in1)->required();
    deep_cmd->add_option("--dump", dump);

    int sigma_i = 1;
    auto* sigma_cmd = app.add_subcommand("sigma", "One sigma_i applied to the WL closure");
    sigma_cmd->add_option("--i", sigma_i)->required()->check(CLI::Range(1, 4));
    sigma_cmd->add_flag("--strict", strict);
    sigma_cmd->add_option("input", in1)->required();
    sigma_cmd->add_option("--dump", dump);

    std::string points_arg, points_arg2;
    auto* extend_cmd = app.add_subcommand("extend", "Point extension of the WL closure");
    extend_cmd->add_option("--points", points_arg, "Comma-separated points")->required();
    extend_cmd->add_option("input", in1)->required();
    extend_cmd->add_flag("--tensor", tensor);
    extend_cmd->add_option("--dump", dump);

    std::string method = "wld";
    auto* compare_cmd = app.add_subcommand("compare", "Equivalence verdict for two inputs");
    compare_cmd->add_option("--method", method)->check(CLI::IsMember({"wl", "wl3", "wl4", "wld", "deepstab"}));
    compare_cmd->add_option("first", in1)->required();
    compare_cmd->add_option("second", in2)->required();

    unsigned q = 0;
    std::string load;
    bool dual = false, report = false;
    std::size_t max_ext_q = 4;
    auto* plane_cmd = app.add_subcommand("plane", "Projective plane scheme and rank report");
    auto* q_opt = plane_cmd->add_option("--q", q, "Order of PG(2,q)");
    auto* load_opt = plane_cmd->add_option("--load", load, "Plane file");
    q_opt->excludes(load_opt);
    plane_cmd->add_flag("--dual", dual);
    plane_cmd->add_flag("--report", report, "Two-extension and one-point extension report");
    plane_cmd->add_option("--max-two-extension-q", max_ext_q, "Largest q for the 2-extension");

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force references");
    oracle_cmd->require_subcommand(1);
    int arity = 2;
    auto* orbits_cmd = oracle_cmd->add_subcommand("orbits", "Automorphism orbits");
    orbits_cmd->add_option("--arity", arity)->check(CLI::Range(1, 3));
    orbits_cmd->add_option("input", in1)->required();
    auto* game_cmd = oracle_cmd->add_subcommand("game", "Bijective pebble game, m = 2");
    game_cmd->add_option("--x", points_arg, "Pebbled points in the first input")->required();
    game_cmd->add_option("--y", points_arg2, "Pebbled points in the second input")->required();
    game_cmd->add_option("first", in1)->required();
    game_cmd->add_option("second", in2)->required();

    std::size_t max_n = 7;
    bool shallow = false;
    auto* corpus_cmd = app.add_subcommand("corpus", "Property suite over the built-in graphs");
    corpus_cmd->add_option("--max-n", max_n, "Largest exhaustive order")->check(CLI::Range(1, 7));
    corpus_cmd->add_flag("--shallow", shallow, "Skip the sandwich and automorphism checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        apply_cap_override_from_env();
        set_num_threads(threads);

        if (*refine_cmd) {
            const auto cc = wl_closure(load_input(in1));
            dump_coloring(dump, cc.coloring);
            emit(cc_report(cc, tensor), pretty);
        } else if (*wlm_cmd) {
            const auto x = load_input(in1);
            std::size_t it = 0;
            const auto f = wlm_closure(x, m, &it);
            if (!dump.empty()) {
                std::ofstream out(dump);
                write_mary(out, f);
            }
            ojson j;
            j["m"] = m;
            j["rank"] = f.rank();
            j["iterations"] = it;
            j["census"] = to_ojson(census_json(census_of(f), *f.namer));
            const auto p2 = as_cc(to_pair_coloring(project(f, 2)));
            j["pr2_rank"] = p2.rank();
            j["pr2_valencies"] = p2.valencies;
            emit(j, pretty);
        } else if (*wld_cmd) {
            const auto res = sesquiclosure_traced(load_input(in1));
            dump_coloring(dump, res.cc.coloring);
            auto j = cc_report(res.cc, tensor);
            const auto sq = sesquiclosed_check(res.cc);
            j["s1"] = sq.s1;
            j["s2"] = sq.s2;
            j["trace"] = trace_json(res.trace);
            emit(j, pretty);
        } else if (*deep_cmd) {
            std::sort(sigmas.begin(), sigmas.end());
            sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
            const auto res = deep_stab_traced(load_input(in1), sigmas, SimOptions{strict});
            dump_coloring(dump, res.cc.coloring);
            auto j = cc_report(res.cc, false);
            j["sigmas"] = sigmas;
            j["strict"] = strict;
            j["trace"] = trace_json(res.trace);
            emit(j, pretty);
        } else if (*sigma_cmd) {
            const auto base = wl_closure(load_input(in1));
            const SimOptions opt{strict};
            ExtensionCache cache(base.coloring);
            const auto sim = sim_classes(base, sigma_i, opt, &cache);
            const auto out = sigma(base, sigma_i, opt, &cache);
            dump_coloring(dump, out.coloring);
            auto j = cc_report(out, false);
            j["i"] = sigma_i;
            j["strict"] = strict;
            j["input_rank"] = base.rank();
            j["sim_classes"] = sim.count();
            j["grew"] = out.rank() > base.rank();
            emit(j, pretty);
        } else if (*extend_cmd) {
            const auto base = wl_closure(load_input(in1));
            const auto y = parse_points(points_arg);
            check_points(y, base.n());
            const auto ext = point_extension(base, y);
            dump_coloring(dump, ext.coloring);
            auto j = cc_report(ext, tensor);
            j["points"] = y;
            j["base_rank"] = base.rank();
            emit(j, pretty);
        } else if (*compare_cmd) {
            const auto g = load_input(in1), h = load_input(in2);
            Verdict v;
            if (method == "wl") v = wl_equivalent(g, h);
            else if (method == "wl3") v = wlm_equivalent(g, h, 3);
            else if (method == "wl4") v = wlm_equivalent(g, h, 4);
            else if (method == "wld") v = wld_equivalent(g, h);
            else {
                const std::vector<int> all{1, 2, 3, 4};
                v = deepstab_equivalent(g, h, all);
            }
            emit(to_ojson(to_json(v)), pretty);
            return v.equivalent ? 0 : 1;
        } else if (*plane_cmd) {
            if (!*q_opt && !*load_opt) throw PreconditionError("plane needs --q or --load");
            auto p = *q_opt ? pg2(q) : load_plane_file(load);
            if (dual) p = dual_plane(p);
            if (report) {
                PlaneReportOptions opt;
                opt.max_two_extension_q = max_ext_q;
                emit(to_ojson(plane_report(p, opt)), pretty);
            } else {
                const auto scheme = plane_scheme(p);
                ojson j;
                j["q"] = p.q;
                j["points"] = p.points;
                j["lines"] = p.lines.size();
                j["scheme_rank"] = scheme.rank();
                j["valencies"] = scheme.valencies;
                j["wl_equals_scheme"] = same_partition(wl_closure(incidence_graph(p)).coloring, scheme.coloring);
                emit(j, pretty);
            }
        } else if (*orbits_cmd) {
            const auto orb = brute_orbits(load_input(in1), arity);
            ojson j;
            j["n"] = orb.n;
            j["point_orbits"] = orb.points;
            if (arity >= 2) {
                j["pair_orbit_rank"] = orb.pairs.rank();
                j["pair_orbits"] = orb.pairs.color;
            }
            if (arity >= 3) {
                std::uint32_t top = 0;
                for (auto t : orb.triples) top = std::max(top, t + 1);
                j["triple_orbit_count"] = top;
            }
            j["generators"] = orb.generators;
            emit(j, pretty);
        } else if (*game_cmd) {
            const auto g = load_input(in1), h = load_input(in2);
            const auto x = parse_points(points_arg), y = parse_points(points_arg2);
            if (x.size() != y.size()) throw PreconditionError("--x and --y need the same length");
            check_points(x, g.n);
            check_points(y, h.n);
            const auto w = pebble_game(g, h, 2, x, y);
            ojson j;
            j["m"] = 2;
            j["x"] = x;
            j["y"] = y;
            j["winner"] = w == Winner::Duplicator ? "Duplicator" : "Spoiler";
            emit(j, pretty);
        } else if (*corpus_cmd) {
            PropertyOptions opt;
            opt.deep = opt.automorphisms = !shallow;
            std::size_t graphs = 0, checks = 0;
            ojson failures = ojson::array();
            for (const auto& ng : corpus(max_n)) {
                ++graphs;
                for (const auto& c : graph_properties(to_rainbow(ng.g), opt)) {
                    ++checks;
                    if (!c.ok) failures.push_back({{"graph", ng.name}, {"check", c.name}, {"detail", c.detail}});
                }
            }
            ojson j;
            j["max_n"] = max_n;
            j["graphs"] = graphs;
            j["checks"] = checks;
            j["failures"] = failures;
            emit(j, pretty);
            return failures.empty() ? 0 : 1;
        }
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
