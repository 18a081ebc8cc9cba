#pragma once

#include "quacc/graph.hpp"

#include <stdexcept>
#include <algorithm>

namespace quacc {

struct RecoveryMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double shd_normalized = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0;
};

/// Precision/recall/normalized structural Hamming distance of an estimated
/// skeleton against the generating structure, over unordered vertex pairs.
inline RecoveryMetrics recovery(const Skeleton& est, const TrueGraph& truth) {
    std::vector<std::string> a = est.vertices, b = truth.vertices;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw std::invalid_argument("recovery: vertex-set mismatch");

    RecoveryMetrics m;
    for (const auto& e : est.edges)
        (truth.edges.count(e) ? m.tp : m.fp)++;
    for (const auto& e : truth.edges)
        if (!est.edges.count(e)) ++m.fn;

    if (m.tp + m.fp == 0)
        m.precision = truth.edges.empty() ? 1.0 : 0.0;
    else
        m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    m.recall = truth.edges.empty() ? 1.0
                                   : static_cast<double>(m.tp) /
                                         static_cast<double>(truth.edges.size());
    const double p = static_cast<double>(est.vertices.size());
    m.shd_normalized = static_cast<double>(m.fp + m.fn) / (p * (p - 1.0) / 2.0);
    return m;
}

/// Groups replicate rejection outcomes by copula parameter.
inline std::vector<std::pair<double, double>> rejection_curve(
    const std::vector<std::pair<double, bool>>& results) {
    if (results.empty()) throw std::invalid_argument("rejection_curve: empty input");
    std::map<double, std::pair<std::size_t, std::size_t>> buckets;  // theta -> (rejected, total)
    for (const auto& [theta, rejected] : results) {
        auto& b = buckets[theta];
        if (rejected) ++b.first;
        ++b.second;
    }
    std::vector<std::pair<double, double>> curve;
    for (const auto& [theta, b] : buckets)
        curve.emplace_back(theta, static_cast<double>(b.first) / static_cast<double>(b.second));
    return curve;
}

}  // namespace quacc
