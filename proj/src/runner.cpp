#include "kgr/runner.hpp"

#include <chrono>
#include <future>
#include <random>

#include "kgr/io.hpp"
#include "kgr/repn.hpp"
#include "kgr/universal.hpp"

namespace kgr::cli {

using nlohmann::ordered_json;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

ordered_json report_skeleton(const std::string& command,
                             const std::vector<std::string>& input_files) {
    ordered_json rep;
    rep["schema"] = "kgr-report/1";
    rep["command"] = command;
    ordered_json inputs = ordered_json::object();
    for (const auto& f : input_files) inputs[f] = io::file_hash(f);
    rep["inputs"] = inputs;
    rep["checks"] = ordered_json::array();
    rep["verdicts"] = ordered_json::object();
    return rep;
}

ordered_json check_to_json(const CheckRecord& c) {
    ordered_json j;
    j["name"] = c.name;
    j["subspace_depth"] = c.subspace_depth;
    j["max_deviation"] = c.max_deviation;
    j["exact"] = c.exact;
    j["pass"] = c.pass;
    j["witnesses"] = c.witnesses;
    return j;
}

void append_checks(ordered_json& rep, const VerifyReport& vr) {
    for (const auto& c : vr.checks) rep["checks"].push_back(check_to_json(c));
}

void finish(Outcome& out, const Options& opt, const Timer& timer, bool pass) {
    out.report["pass"] = pass;
    if (opt.timing) out.report["wall_ms"] = timer.ms();
    if (out.exit_code == 0 && !pass) out.exit_code = 1;
}

void require_exact_measure(const CylinderMeasure& mu, const Options& opt) {
    if (opt.exact && !mu.total().is_exact())
        throw exactness_error("--exact requires rational measure data");
}

bool enforce_exact(const Options& opt, const VerifyReport& vr) {
    if (!opt.exact) return vr.pass;
    for (const auto& c : vr.checks)
        if (!c.exact) return false;
    return vr.pass;
}

Degree to_degree(const KGraph& g, const std::vector<int>& v) {
    if (static_cast<int>(v.size()) == 1 && g.k() > 1) return Degree(g.k(), v[0]);
    if (static_cast<int>(v.size()) != g.k())
        throw malformed_spec("degree needs " + std::to_string(g.k()) + " components");
    return v;
}

} // namespace

Outcome cmd_validate(const std::string& graph_file, const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("validate", {graph_file});
    auto g = io::load_graph_file(graph_file);
    out.report["verdicts"]["valid"] = true;
    out.report["graph"] = {{"k", g->k()},
                           {"vertices", g->vertex_count()},
                           {"edges", g->edge_count()},
                           {"strongly_connected", g->strongly_connected()}};
    finish(out, opt, timer, true);
    return out;
}

Outcome cmd_paths(const std::string& graph_file, const std::vector<int>& degree, bool rainbow,
                  const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("paths", {graph_file});
    auto g = io::load_graph_file(graph_file);
    Degree n = to_degree(*g, degree);
    auto paths = enumerate_paths(*g, n);
    ordered_json arr = ordered_json::array();
    for (const Path& p : paths) {
        if (!rainbow) {
            arr.push_back(p.str());
            continue;
        }
        ordered_json item;
        item["path"] = p.str();
        std::vector<std::string> rb;
        for (EdgeId e : rainbow_form(p)) rb.push_back(g->edge(e).name);
        item["rainbow"] = rb;
        arr.push_back(item);
    }
    out.report["degree"] = degree_str(n);
    out.report["count"] = paths.size();
    out.report["paths"] = arr;
    finish(out, opt, timer, true);
    return out;
}

Outcome cmd_measure_check(const std::string& graph_file, const std::string& measure_file,
                          int depth, const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("measure-check", {graph_file, measure_file});
    auto g = io::load_graph_file(graph_file);
    auto mu = io::load_measure_file(*g, measure_file);
    require_exact_measure(mu, opt);
    auto rep = verify_consistency(mu, depth, opt.tol);
    CheckRecord rec{"kolmogorov-consistency", depth, rep.max_deviation, rep.exact, rep.pass,
                    rep.witnesses};
    out.report["checks"].push_back(check_to_json(rec));
    out.report["measure"] = {{"kind", mu.kind()},
                             {"degenerate", mu.degenerate()},
                             {"total", mu.total().to_double()},
                             {"exact", mu.total().is_exact()}};
    bool pass = opt.exact ? rep.exact && rep.pass : rep.pass;
    out.report["verdicts"]["consistent"] = pass;
    finish(out, opt, timer, pass);
    return out;
}

Outcome cmd_ck_verify(const std::string& graph_file, const std::string& measure_file, int depth,
                      const std::vector<int>& cap_in, const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("ck-verify", {graph_file, measure_file});
    auto g = io::load_graph_file(graph_file);
    auto mu = io::load_measure_file(*g, measure_file);
    require_exact_measure(mu, opt);
    Degree cap = to_degree(*g, cap_in);
    int sys_depth = depth - degree_max(cap);
    if (sys_depth < 1)
        throw malformed_spec("depth must exceed the cap by at least 1");
    auto sys = standard_system(mu, sys_depth, cap);
    auto rep = build_truncation(sys, depth, cap);

    VerifyReport ck, pvm;
    if (opt.jobs > 1) {
        auto fut = std::async(std::launch::async, [&] { return verify_ck(rep, opt.tol); });
        pvm = pvm_checks(rep, opt.tol);
        ck = fut.get();
    } else {
        ck = verify_ck(rep, opt.tol);
        pvm = pvm_checks(rep, opt.tol);
    }
    append_checks(out.report, ck);
    append_checks(out.report, pvm);
    out.report["space"] = {{"ambient_depth", depth},
                           {"dim", rep.space().dim()},
                           {"dropped_null_atoms", sys.dropped_null_atoms().size()}};
    bool pass = enforce_exact(opt, ck) && enforce_exact(opt, pvm);
    out.report["verdicts"]["cuntz-krieger"] = ck.pass;
    out.report["verdicts"]["projection-valued-measure"] = pvm.pass;
    finish(out, opt, timer, pass);
    return out;
}

Outcome cmd_monic_check_pathspace(const std::string& graph_file,
                                  const std::string& measure_file, int max_depth,
                                  const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("monic-check", {graph_file, measure_file});
    auto g = io::load_graph_file(graph_file);
    auto mu = io::load_measure_file(*g, measure_file);
    require_exact_measure(mu, opt);
    auto rep = monic_sigma_check_pathspace(mu, max_depth);
    ordered_json levels = ordered_json::array();
    for (const auto& lvl : rep.levels)
        levels.push_back({{"level", lvl.level},
                          {"mesh", lvl.mesh},
                          {"groups", lvl.groups},
                          {"unseparated_atoms", lvl.unseparated_atoms}});
    out.report["levels"] = levels;
    out.report["obstructions"] = rep.obstructions;
    out.report["verdicts"]["monic"] = rep.verdict;

    // rank certificate at the deepest affordable truncation
    int m = std::min(max_depth, 5);
    if (m >= 2) {
        auto sys = standard_system(mu, m - 1, degree_uniform(g->k(), 1));
        auto trunc = build_truncation(sys, m, degree_uniform(g->k(), 1));
        auto span = monic_span_check(trunc, trunc.space().constant_one());
        out.report["span_rank"] = {{"depth", m},
                                   {"rank", span.rank},
                                   {"dim", span.dim},
                                   {"full", span.monic_at_depth}};
    }
    finish(out, opt, timer, rep.verdict == "monic-likely");
    return out;
}

Outcome cmd_monic_check_interval(const std::string& interval_file, int max_depth,
                                 const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("monic-check", {interval_file});
    auto loaded = io::load_interval_system_file(interval_file);
    auto rep = monic_sigma_check_interval(*loaded.system, max_depth);
    ordered_json levels = ordered_json::array();
    for (const auto& lvl : rep.levels)
        levels.push_back({{"level", lvl.level},
                          {"mesh", lvl.mesh},
                          {"atoms", lvl.atoms},
                          {"stable_atoms", lvl.stable_atoms}});
    out.report["levels"] = levels;
    out.report["obstructions"] = rep.obstructions;
    out.report["verdicts"]["monic"] = rep.verdict;
    finish(out, opt, timer, rep.verdict == "monic-likely");
    return out;
}

Outcome cmd_disjointness(const std::string& graph_file, const std::string& m1_file,
                         const std::string& m2_file, int max_depth, const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("disjointness", {graph_file, m1_file, m2_file});
    auto g = io::load_graph_file(graph_file);
    auto mu = io::load_measure_file(*g, m1_file);
    auto nu = io::load_measure_file(*g, m2_file);
    require_exact_measure(mu, opt);
    require_exact_measure(nu, opt);
    auto rep = hellinger_affinity(mu, nu, max_depth);
    ordered_json h = ordered_json::array();
    for (const auto& v : rep.affinity) h.push_back(v.to_double());
    out.report["hellinger"] = h;
    out.report["verdicts"]["measures"] = rep.verdict;
    out.report["verdicts"]["representations"] =
        rep.verdict == "singular-likely"
            ? "disjoint-likely"
            : (rep.verdict == "equivalent-likely" ? "not-disjoint-likely" : "inconclusive");
    finish(out, opt, timer, true);
    return out;
}

Outcome cmd_commutant(const std::string& graph_file, const std::string& measure_file, int depth,
                      const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("commutant", {graph_file, measure_file});
    auto g = io::load_graph_file(graph_file);
    auto mu = io::load_measure_file(*g, measure_file);
    require_exact_measure(mu, opt);
    auto rep = commutant_invariants(mu, depth);
    out.report["dimension"] = rep.dimension;
    ordered_json classes = ordered_json::array();
    for (const auto& cls : rep.classes) {
        ordered_json c = ordered_json::array();
        for (const Path& atom : cls) c.push_back(atom.str());
        classes.push_back(c);
    }
    out.report["classes"] = classes;
    out.report["verdicts"]["invariant_dimension"] = rep.dimension;
    out.report["verdicts"]["irreducibility_obstruction"] = rep.dimension > 1;
    finish(out, opt, timer, true);
    return out;
}

Outcome cmd_equiv(const std::string& graph_file, const std::string& sys1_file,
                  const std::string& sys2_file, int depth, const Options& opt) {
    Timer timer;
    Outcome out;
    out.report = report_skeleton("equiv", {graph_file, sys1_file, sys2_file});
    auto g = io::load_graph_file(graph_file);
    Degree cap = degree_uniform(g->k(), 1);
    int sys_depth = depth + degree_max(cap);
    auto sys_s = io::load_system_file(*g, sys1_file, sys_depth, cap);
    auto sys_t = io::load_system_file(*g, sys2_file, sys_depth, cap);
    auto rep = equivalence_check(sys_s, sys_t, depth, opt.tol);
    out.report["verdicts"]["equivalence"] = rep.verdict;
    out.report["witnesses"] = rep.witnesses;
    out.report["max_deviation"] = rep.max_deviation;
    if (rep.h) {
        ordered_json h = ordered_json::object();
        for (const auto& [atom, v] : rep.h->values()) h[atom.str()] = v.to_double();
        out.report["h"] = h;
    }
    finish(out, opt, timer, rep.verdict == "equivalent");
    return out;
}

Outcome cmd_universal_check(const std::string& graph_file,
                            const std::vector<std::string>& measure_files, int depth,
                            const Options& opt) {
    Timer timer;
    Outcome out;
    std::vector<std::string> inputs{graph_file};
    inputs.insert(inputs.end(), measure_files.begin(), measure_files.end());
    out.report = report_skeleton("universal-check", inputs);
    auto g = io::load_graph_file(graph_file);
    if (measure_files.empty()) throw malformed_spec("universal-check needs measures");
    std::vector<CylinderMeasure> family;
    for (const auto& f : measure_files) {
        family.push_back(io::load_measure_file(*g, f));
        require_exact_measure(family.back(), opt);
    }

    bool pass = true;

    // isometry + intertwining for the standard system of each measure, with
    // seeded rational trial functions
    std::mt19937 rng(0x5eed);
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    Degree cap = degree_uniform(g->k(), 1);
    for (size_t i = 0; i < family.size(); ++i) {
        auto sys = standard_system(family[i], depth, cap);
        std::vector<CylinderFunction> trials;
        for (int t = 0; t < 5; ++t) {
            std::map<Path, Scalar> vals;
            for (const Path& atom : enumerate_paths(*g, degree_uniform(g->k(), depth)))
                vals.emplace(atom, Scalar(Rational(num(rng), den(rng))));
            trials.emplace_back(*g, depth, std::move(vals));
        }
        auto vr = embed_and_intertwine(sys, trials, opt.tol);
        for (auto c : vr.checks) {
            c.name = "measure" + std::to_string(i) + ":" + c.name;
            out.report["checks"].push_back(check_to_json(c));
        }
        pass = pass && enforce_exact(opt, vr);

        // nu_{1 sqrt(d mu)} must reproduce mu
        auto nu = nu_measure(UniversalVector::unit(family[i], depth));
        CheckRecord nu_rec{"measure" + std::to_string(i) + ":nu-of-unit", depth};
        for (const Path& atom : enumerate_paths(*g, degree_uniform(g->k(), depth))) {
            Scalar dev = nu.mass(atom) - family[i].mass(atom);
            if (!dev.is_zero()) {
                nu_rec.exact = false;
                nu_rec.max_deviation = std::max(nu_rec.max_deviation, dev.abs_double());
            }
        }
        nu_rec.pass = nu_rec.exact || nu_rec.max_deviation <= opt.tol;
        out.report["checks"].push_back(check_to_json(nu_rec));
        pass = pass && nu_rec.pass;
    }

    // pairwise inner products of unit vectors = Hellinger affinity at depth
    ordered_json gram = ordered_json::array();
    for (size_t i = 0; i < family.size(); ++i) {
        for (size_t j = i + 1; j < family.size(); ++j) {
            Scalar ip = universal_inner(UniversalVector::unit(family[i], depth),
                                        UniversalVector::unit(family[j], depth));
            auto hel = hellinger_affinity(family[i], family[j], depth);
            Scalar dev = ip - hel.affinity.back();
            gram.push_back({{"pair", {i, j}},
                            {"inner", ip.to_double()},
                            {"matches_hellinger", dev.is_zero() || dev.abs_double() <= opt.tol}});
            pass = pass && (dev.is_zero() || dev.abs_double() <= opt.tol);
        }
    }
    out.report["unit_gram"] = gram;

    // commutant relation with the constant multiplier family
    std::vector<CylinderFunction> mult(family.size(),
                                       CylinderFunction::constant(*g, depth, Scalar::one()));
    auto crep = commutant_relation_check(family, mult, cap, depth);
    out.report["verdicts"]["commutant_relation"] = crep.relation_holds;
    out.report["verdicts"]["commutant_agreement"] = crep.equivalent;
    pass = pass && crep.equivalent;

    finish(out, opt, timer, pass);
    return out;
}

} // namespace kgr::cli
