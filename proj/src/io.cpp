#include "kgr/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace kgr::io {

namespace fs = std::filesystem;

Scalar parse_scalar(const json& v) {
    if (v.is_string()) return Scalar(Rational::parse(v.get<std::string>()));
    if (v.is_number_integer()) return Scalar(Rational(v.get<long long>()));
    if (v.is_number_float()) return Scalar::approx(v.get<double>());
    throw malformed_spec("expected a rational string or number, got " + v.dump());
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw malformed_spec("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw malformed_spec("bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

std::shared_ptr<KGraph> load_graph(const json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("vertices") || !j.contains("edges"))
        throw malformed_spec("graph file needs k, vertices and edges");
    int k = j.at("k").get<int>();
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::map<std::string, VertexId> vid;
    for (size_t i = 0; i < vertices.size(); ++i) vid[vertices[i]] = static_cast<VertexId>(i);

    std::vector<EdgeData> edges;
    for (const auto& e : j.at("edges")) {
        EdgeData ed;
        ed.name = e.at("name").get<std::string>();
        ed.color = e.at("color").get<int>();
        auto src = e.at("source").get<std::string>();
        auto rng = e.at("range").get<std::string>();
        if (!vid.count(src) || !vid.count(rng))
            throw malformed_spec("edge '" + ed.name + "' references an unknown vertex");
        ed.source = vid.at(src);
        ed.range = vid.at(rng);
        edges.push_back(ed);
    }
    std::vector<std::pair<std::pair<std::string, std::string>,
                          std::pair<std::string, std::string>>>
        squares;
    if (j.contains("squares")) {
        for (const auto& s : j.at("squares")) {
            auto left = s.at("left").get<std::vector<std::string>>();
            auto right = s.at("right").get<std::vector<std::string>>();
            if (left.size() != 2 || right.size() != 2)
                throw malformed_spec("square entries must be pairs");
            squares.push_back({{left[0], left[1]}, {right[0], right[1]}});
        }
    }
    return std::make_shared<KGraph>(k, std::move(vertices), std::move(edges), squares);
}

std::shared_ptr<KGraph> load_graph_file(const std::string& path) {
    return load_graph(read_json_file(path));
}

Path parse_path(const KGraph& g, const std::string& s) {
    // vertex name?
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.vertex_name(v) == s) return Path(g, v);
    std::vector<EdgeId> seq;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '.')) {
        auto id = g.edge_id(part);
        if (!id) throw malformed_spec("unknown edge '" + part + "' in path '" + s + "'");
        seq.push_back(*id);
    }
    if (seq.empty()) throw malformed_spec("empty path string");
    return Path::from_edge_sequence(g, seq);
}

CylinderFunction parse_function(const KGraph& g, const json& j) {
    int depth = j.at("depth").get<int>();
    std::map<Path, Scalar> vals;
    if (j.contains("values")) {
        for (const auto& [key, v] : j.at("values").items()) {
            Path p = parse_path(g, key);
            if (p.degree() != degree_uniform(g.k(), depth))
                throw malformed_spec("function key '" + key + "' does not have depth " +
                                     std::to_string(depth));
            vals.emplace(p, parse_scalar(v));
        }
    }
    return CylinderFunction(g, depth, std::move(vals));
}

CylinderMeasure load_measure(const KGraph& g, const json& j) {
    if (!j.contains("type")) throw malformed_spec("measure file needs a type");
    std::string type = j.at("type").get<std::string>();
    CylinderMeasure mu;
    if (type == "bernoulli") {
        std::map<VertexId, Scalar> mass;
        for (const auto& [name, v] : j.at("vertex_mass").items())
            mass[g.vertex_id(name)] = parse_scalar(v);
        std::map<EdgeId, Scalar> w;
        for (const auto& [name, v] : j.at("edge_weight").items()) {
            auto id = g.edge_id(name);
            if (!id) throw malformed_spec("unknown edge '" + name + "' in edge_weight");
            w[*id] = parse_scalar(v);
        }
        mu = bernoulli_measure(g, mass, w);
    } else if (type == "markov") {
        int color = j.at("alphabet_color").get<int>();
        std::vector<Scalar> st;
        for (const auto& v : j.at("lambda")) st.push_back(parse_scalar(v));
        std::vector<std::vector<Scalar>> tr;
        for (const auto& row : j.at("T")) {
            std::vector<Scalar> r;
            for (const auto& v : row) r.push_back(parse_scalar(v));
            tr.push_back(std::move(r));
        }
        std::vector<EdgeId> alphabet;
        if (j.contains("alphabet")) {
            for (const auto& name : j.at("alphabet")) {
                auto id = g.edge_id(name.get<std::string>());
                if (!id) throw malformed_spec("unknown alphabet edge");
                alphabet.push_back(*id);
            }
        }
        mu = markov_measure(g, color, st, tr, alphabet);
    } else if (type == "perron-frobenius") {
        mu = perron_frobenius_measure(g);
    } else if (type == "table") {
        int depth = j.at("depth").get<int>();
        std::map<Path, Scalar> vals;
        for (const auto& [key, v] : j.at("values").items())
            vals.emplace(parse_path(g, key), parse_scalar(v));
        mu = table_measure(g, depth, vals);
    } else {
        throw malformed_spec("unknown measure type '" + type + "'");
    }
    if (j.contains("scale")) mu = scale_measure(mu, parse_scalar(j.at("scale")));
    return mu;
}

CylinderMeasure load_measure_file(const KGraph& g, const std::string& path) {
    return load_measure(g, read_json_file(path));
}

LoadedIntervalSystem load_interval_system_file(const std::string& path) {
    json j = read_json_file(path);
    if (j.value("space", "") != std::string("unit-interval"))
        throw malformed_spec("interval file must declare \"space\": \"unit-interval\"");
    LoadedIntervalSystem out;
    if (!j.contains("graph")) throw malformed_spec("interval file needs a graph");
    if (j.at("graph").is_string()) {
        fs::path base = fs::path(path).parent_path();
        out.graph = load_graph_file((base / j.at("graph").get<std::string>()).string());
    } else {
        out.graph = load_graph(j.at("graph"));
    }
    const KGraph& g = *out.graph;
    std::map<VertexId, IntervalSet> domains;
    for (const auto& [name, pieces] : j.at("domains").items()) {
        std::vector<std::pair<Rational, Rational>> ivs;
        for (const auto& pair : pieces) {
            if (!pair.is_array() || pair.size() != 2)
                throw malformed_spec("domain pieces must be [lo, hi] pairs");
            ivs.push_back({parse_scalar(pair[0]).rational_value(),
                           parse_scalar(pair[1]).rational_value()});
        }
        domains[g.vertex_id(name)] = IntervalSet::from_pieces(std::move(ivs));
    }
    std::map<EdgeId, AffineMap> maps;
    for (const auto& [name, m] : j.at("maps").items()) {
        auto id = g.edge_id(name);
        if (!id) throw malformed_spec("unknown edge '" + name + "' in maps");
        maps[*id] = {parse_scalar(m.at("slope")).rational_value(),
                     parse_scalar(m.at("offset")).rational_value()};
    }
    out.system = std::make_shared<IntervalSystem>(g, std::move(domains), std::move(maps));
    return out;
}

ProjectiveSystem load_system(const KGraph& g, const json& j, const std::string& base_dir,
                             int depth, const Degree& cap) {
    if (!j.contains("measure")) throw malformed_spec("system spec needs a measure");
    CylinderMeasure mu;
    if (j.at("measure").is_string()) {
        fs::path base(base_dir);
        mu = load_measure_file(g, (base / j.at("measure").get<std::string>()).string());
    } else {
        mu = load_measure(g, j.at("measure"));
    }
    ProjectiveSystem sys = standard_system(mu, depth, cap);
    if (j.contains("rescale")) sys = rescale_system(sys, parse_function(g, j.at("rescale")));
    if (j.contains("signs")) {
        std::vector<EdgeId> marked;
        for (const auto& name : j.at("signs").at("edge_parity")) {
            auto id = g.edge_id(name.get<std::string>());
            if (!id) throw malformed_spec("unknown edge in signs.edge_parity");
            marked.push_back(*id);
        }
        sys = character_signs(sys, marked);
    }
    return sys;
}

ProjectiveSystem load_system_file(const KGraph& g, const std::string& path, int depth,
                                  const Degree& cap) {
    return load_system(g, read_json_file(path), fs::path(path).parent_path().string(), depth,
                       cap);
}

} // namespace kgr::io
