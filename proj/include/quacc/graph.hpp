#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace quacc {

using EdgeKey = std::pair<std::string, std::string>;  // always (min, max)

inline EdgeKey make_edge(const std::string& a, const std::string& b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

/// Undirected skeleton with separating-set records for removed edges.
struct Skeleton {
    std::vector<std::string> vertices;
    std::set<EdgeKey> edges;
    std::map<EdgeKey, std::vector<std::string>> sepsets;
    double alpha = 0.05;
    std::string test_id;

    bool has_edge(const std::string& a, const std::string& b) const {
        return edges.count(make_edge(a, b)) > 0;
    }
};

/// Ground-truth undirected structure of a synthetic generator.
struct TrueGraph {
    std::vector<std::string> vertices;
    std::set<EdgeKey> edges;
};

/// Graphviz DOT rendering of an undirected skeleton.
inline std::string to_dot(const Skeleton& sk, const std::string& name = "skeleton") {
    std::string out = "graph " + name + " {\n";
    for (const auto& v : sk.vertices) out += "  \"" + v + "\";\n";
    for (const auto& [a, b] : sk.edges) out += "  \"" + a + "\" -- \"" + b + "\";\n";
    out += "}\n";
    return out;
}

}  // namespace quacc
