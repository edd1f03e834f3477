#ifndef KGR_RUNNER_HPP
#define KGR_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kgr::cli {

// Shared knobs for every subcommand. Tolerance resolution order:
// --tol flag, KGR_TOL environment variable, 1e-9.
struct Options {
    double tol = 1e-9;
    bool exact = false;   // require exact-rational inputs and zero deviations
    int jobs = 1;         // >1 runs independent check groups concurrently
    bool timing = false;  // include wall_ms in the report (breaks byte-identity)
};

struct Outcome {
    int exit_code = 0; // 0 pass, 1 check failed, 2 input error
    nlohmann::ordered_json report;
};

Outcome cmd_validate(const std::string& graph_file, const Options& opt);
Outcome cmd_paths(const std::string& graph_file, const std::vector<int>& degree, bool rainbow,
                  const Options& opt);
Outcome cmd_measure_check(const std::string& graph_file, const std::string& measure_file,
                          int depth, const Options& opt);
Outcome cmd_ck_verify(const std::string& graph_file, const std::string& measure_file, int depth,
                      const std::vector<int>& cap, const Options& opt);
Outcome cmd_monic_check_pathspace(const std::string& graph_file,
                                  const std::string& measure_file, int max_depth,
                                  const Options& opt);
Outcome cmd_monic_check_interval(const std::string& interval_file, int max_depth,
                                 const Options& opt);
Outcome cmd_disjointness(const std::string& graph_file, const std::string& m1_file,
                         const std::string& m2_file, int max_depth, const Options& opt);
Outcome cmd_commutant(const std::string& graph_file, const std::string& measure_file, int depth,
                      const Options& opt);
Outcome cmd_equiv(const std::string& graph_file, const std::string& sys1_file,
                  const std::string& sys2_file, int depth, const Options& opt);
Outcome cmd_universal_check(const std::string& graph_file,
                            const std::vector<std::string>& measure_files, int depth,
                            const Options& opt);

} // namespace kgr::cli

#endif
