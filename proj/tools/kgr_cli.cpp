#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "kgr/errors.hpp"
#include "kgr/runner.hpp"

namespace {

std::vector<int> parse_degree(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
    if (out.empty()) throw kgr::malformed_spec("empty degree");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kgr: finite higher-rank graphs, cylinder measures and "
                 "Cuntz-Krieger representation checks"};
    app.require_subcommand(1);

    kgr::cli::Options opt;
    if (const char* env = std::getenv("KGR_TOL")) opt.tol = std::atof(env);
    app.add_option("--tol", opt.tol, "numeric tolerance for double-valued checks");
    app.add_flag("--exact", opt.exact, "require rational inputs and exactly zero deviations");
    app.add_option("--jobs", opt.jobs, "run independent check groups concurrently")
        ->check(CLI::Range(1, 64));
    app.add_flag("--timing", opt.timing, "include wall time in the report");

    std::string graph, measure, measure2, sys1, sys2, interval;
    std::string degree_str = "1";
    std::vector<std::string> measures;
    int depth = 3, max_depth = 6;
    std::string cap_str = "1";
    bool rainbow = false;

    auto* validate = app.add_subcommand("validate", "load a graph and verify all axioms");
    validate->fallthrough();
    validate->add_option("graph", graph)->required();

    auto* paths = app.add_subcommand("paths", "enumerate the paths of a degree");
    paths->fallthrough();
    paths->add_option("graph", graph)->required();
    paths->add_option("--degree", degree_str, "comma-separated degree vector")->required();
    paths->add_flag("--rainbow", rainbow, "include the rainbow edge sequence");

    auto* mcheck = app.add_subcommand("measure-check", "Kolmogorov consistency of a measure");
    mcheck->fallthrough();
    mcheck->add_option("graph", graph)->required();
    mcheck->add_option("measure", measure)->required();
    mcheck->add_option("--depth", depth, "total degree to check to")->required();

    auto* ck = app.add_subcommand("ck-verify", "Cuntz-Krieger and PVM identities");
    ck->fallthrough();
    ck->add_option("graph", graph)->required();
    ck->add_option("measure", measure)->required();
    ck->add_option("--depth", depth, "ambient depth M")->required();
    ck->add_option("--cap", cap_str, "degree cap (single int or comma-separated)");

    auto* monic = app.add_subcommand("monic-check", "sigma-algebra generation check");
    monic->fallthrough();
    monic->add_option("graph", graph);
    monic->add_option("measure", measure);
    monic->add_option("--interval", interval, "interval SBFS file instead of a measure");
    monic->add_option("--max-depth", max_depth)->required();

    auto* disj = app.add_subcommand("disjointness", "Hellinger affinity trend of two measures");
    disj->fallthrough();
    disj->add_option("graph", graph)->required();
    disj->add_option("m1", measure)->required();
    disj->add_option("m2", measure2)->required();
    disj->add_option("--max-depth", max_depth)->required();

    auto* comm = app.add_subcommand("commutant", "shift-invariant functions at finite depth");
    comm->fallthrough();
    comm->add_option("graph", graph)->required();
    comm->add_option("measure", measure)->required();
    comm->add_option("--depth", depth)->required();

    auto* equiv = app.add_subcommand("equiv", "unitary equivalence of two projective systems");
    equiv->fallthrough();
    equiv->add_option("graph", graph)->required();
    equiv->add_option("sys1", sys1)->required();
    equiv->add_option("sys2", sys2)->required();
    equiv->add_option("--depth", depth)->required();

    auto* univ = app.add_subcommand("universal-check",
                                    "universal-space isometry, intertwining and nu_y checks");
    univ->fallthrough();
    univ->add_option("graph", graph)->required();
    univ->add_option("measures", measures)->required()->expected(-1);
    univ->add_option("--depth", depth)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        kgr::cli::Outcome out;
        if (*validate) {
            out = kgr::cli::cmd_validate(graph, opt);
        } else if (*paths) {
            out = kgr::cli::cmd_paths(graph, parse_degree(degree_str), rainbow, opt);
        } else if (*mcheck) {
            out = kgr::cli::cmd_measure_check(graph, measure, depth, opt);
        } else if (*ck) {
            out = kgr::cli::cmd_ck_verify(graph, measure, depth, parse_degree(cap_str), opt);
        } else if (*monic) {
            if (!interval.empty()) {
                out = kgr::cli::cmd_monic_check_interval(interval, max_depth, opt);
            } else {
                if (graph.empty() || measure.empty())
                    throw kgr::malformed_spec("monic-check needs GRAPH MEASURE or --interval");
                out = kgr::cli::cmd_monic_check_pathspace(graph, measure, max_depth, opt);
            }
        } else if (*disj) {
            out = kgr::cli::cmd_disjointness(graph, measure, measure2, max_depth, opt);
        } else if (*comm) {
            out = kgr::cli::cmd_commutant(graph, measure, depth, opt);
        } else if (*equiv) {
            out = kgr::cli::cmd_equiv(graph, sys1, sys2, depth, opt);
        } else if (*univ) {
            out = kgr::cli::cmd_universal_check(graph, measures, depth, opt);
        }
        std::cout << out.report.dump(2) << std::endl;
        return out.exit_code;
    } catch (const kgr::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
