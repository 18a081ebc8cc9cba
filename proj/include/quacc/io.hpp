#pragma once

#include <json.hpp>

#include "quacc/quacc.hpp"
#include "quacc/graph.hpp"
#include "quacc/synth.hpp"

namespace quacc {

using json = nlohmann::json;

inline json to_json(const QuantileFit& fit) {
    return {{"tau", fit.tau},
            {"coefficients", std::vector<double>(fit.coefficients.data(),
                                                 fit.coefficients.data() + fit.coefficients.size())},
            {"n_train", fit.n_train},
            {"objective", fit.objective}};
}

inline json to_json(const QuaccResult& r) {
    json folds = json::array();
    for (const auto& f : r.folds)
        folds.push_back({{"fold", f.fold},
                         {"n_k", f.n_k},
                         {"rho_k", f.rho_k},
                         {"var_k", f.var_k},
                         {"kappa_y", f.kappa_y},
                         {"kappa_x", f.kappa_x},
                         {"v_tau", f.v_tau},
                         {"v_xy", f.v_xy},
                         {"sigma2_qy", f.sigma2_qy},
                         {"sigma2_qx", f.sigma2_qx},
                         {"density_crossing", f.density_crossing}});
    return {{"tau", r.tau},         {"rho_hat", r.rho_hat},   {"rho_star", r.rho_star},
            {"null_value", r.null_value}, {"z", r.z},         {"p_value", r.p_value},
            {"n_effective", r.n_effective}, {"folds", folds}};
}

inline json to_json(const Skeleton& sk) {
    json edges = json::array();
    for (const auto& [a, b] : sk.edges) edges.push_back({a, b});
    json sepsets = json::array();
    for (const auto& [e, s] : sk.sepsets)
        sepsets.push_back({{"pair", {e.first, e.second}}, {"sepset", s}});
    return {{"vertices", sk.vertices}, {"edges", edges},   {"sepsets", sepsets},
            {"alpha", sk.alpha},       {"test", sk.test_id}};
}

inline json to_json(const TrueGraph& g) {
    json edges = json::array();
    for (const auto& [a, b] : g.edges) edges.push_back({a, b});
    return {{"vertices", g.vertices}, {"edges", edges}};
}

inline json to_json(const DgpSpec& spec) {
    return {{"setting", spec.setting}, {"n", spec.n},        {"theta", spec.theta},
            {"alphas", spec.alphas},   {"betas", spec.betas}, {"gammas", spec.gammas},
            {"seed", spec.seed}};
}

inline void write_csv(const Dataset& d, std::ostream& os) {
    for (std::size_t j = 0; j < d.columns.size(); ++j)
        os << (j ? "," : "") << d.columns[j].name;
    os << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        for (std::size_t j = 0; j < d.columns.size(); ++j) {
            if (j) os << ",";
            const double v = d.columns[j].values[i];
            if (!is_missing(v)) os << v;
        }
        os << "\n";
    }
}

}  // namespace quacc
