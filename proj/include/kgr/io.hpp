#ifndef KGR_IO_HPP
#define KGR_IO_HPP

#include <memory>
#include <string>

#include <json.hpp>

#include "kgr/interval.hpp"
#include "kgr/measures.hpp"
#include "kgr/projsys.hpp"

namespace kgr::io {

using json = nlohmann::json;

// Strings parse as exact rationals ("p/q", "3", "0.25"); integer JSON
// numbers stay exact; floating-point JSON numbers become doubles.
Scalar parse_scalar(const json& v);

// Graph file: {"k": int, "vertices": [names], "edges": [{"name","color",
// "source","range"}], "squares": [{"left":[f,g],"right":[g2,f2]}]}.
// 1-graphs omit "squares".
std::shared_ptr<KGraph> load_graph(const json& j);
std::shared_ptr<KGraph> load_graph_file(const std::string& path);

// Measure file: {"type": "bernoulli"|"markov"|"perron-frobenius"|"table",
// ...} with an optional "scale" factor.
CylinderMeasure load_measure(const KGraph& g, const json& j);
CylinderMeasure load_measure_file(const KGraph& g, const std::string& path);

// Path in normal form: vertex name, or edge names joined with '.'.
Path parse_path(const KGraph& g, const std::string& s);

// {"depth": D, "values": {path: q}} (missing atoms are 0)
CylinderFunction parse_function(const KGraph& g, const json& j);

// Interval SBFS file: {"space":"unit-interval", "graph": file-or-object,
// "domains": {v: [[a,b],...]}, "maps": {edge: {"slope","offset"}}}.
struct LoadedIntervalSystem {
    std::shared_ptr<KGraph> graph;
    std::shared_ptr<IntervalSystem> system;
};
LoadedIntervalSystem load_interval_system_file(const std::string& path);

// System spec: {"measure": file-or-object, "rescale": function (optional),
// "signs": {"edge_parity": [edge names]} (optional)}.
ProjectiveSystem load_system(const KGraph& g, const json& j, const std::string& base_dir,
                             int depth, const Degree& cap);
ProjectiveSystem load_system_file(const KGraph& g, const std::string& path, int depth,
                                  const Degree& cap);

json read_json_file(const std::string& path);
std::string file_hash(const std::string& path); // FNV-1a 64 as hex, "missing" if absent

} // namespace kgr::io

#endif
