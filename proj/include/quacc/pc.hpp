#pragma once

#include <map>
#include <set>

#include "quacc/citest.hpp"
#include "quacc/graph.hpp"

namespace quacc {

namespace detail {

/// Lexicographic size-l combinations of [0, m).
inline bool next_combination(std::vector<std::size_t>& comb, std::size_t m) {
    const std::size_t l = comb.size();
    for (std::size_t i = l; i-- > 0;) {
        if (comb[i] < m - (l - i)) {
            ++comb[i];
            for (std::size_t j = i + 1; j < l; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline uint64_t pair_test_seed(uint64_t master, std::size_t a, std::size_t b,
                               const std::vector<std::size_t>& subset) {
    uint64_t h = master ^ splitmix64(0x9d5f0c1a2b3e4d5cULL + std::min(a, b) * 1315423911ULL +
                                     std::max(a, b) * 2654435761ULL);
    for (std::size_t s : subset) h = splitmix64(h ^ (s + 0x1000193ULL));
    return h;
}

}  // namespace detail

/// PC adjacency phase (stable variant): adjacencies are frozen at the start
/// of each conditioning order, so the output does not depend on the pair
/// iteration order. Per-test seeds derive from the master seed and the
/// unordered pair plus conditioning set.
inline Skeleton pc_skeleton(const Dataset& data, const std::vector<std::string>& vars,
                            const CITest& test, double alpha, std::size_t max_order,
                            uint64_t seed) {
    const std::size_t m = vars.size();
    if (m < 2) throw std::invalid_argument("pc_skeleton: need at least 2 variables");
    for (const auto& v : vars) (void)data.column(v);

    Skeleton sk;
    sk.vertices = vars;
    sk.alpha = alpha;
    sk.test_id = test.id();

    std::vector<std::set<std::size_t>> adj(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (a != b) adj[a].insert(b);

    for (std::size_t order = 0; order <= max_order; ++order) {
        const auto snapshot = adj;
        bool any_supported = false;
        std::set<std::pair<std::size_t, std::size_t>> removed;

        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b : snapshot[a]) {
                if (removed.count({std::min(a, b), std::max(a, b)})) continue;
                std::vector<std::size_t> pool(snapshot[a].begin(), snapshot[a].end());
                pool.erase(std::find(pool.begin(), pool.end(), b));
                if (pool.size() < order) continue;
                any_supported = true;

                std::vector<std::size_t> comb(order);
                std::iota(comb.begin(), comb.end(), 0);
                bool more = order > 0 || true;
                do {
                    std::vector<std::size_t> subset_idx;
                    std::vector<std::string> S;
                    for (std::size_t i : comb) {
                        subset_idx.push_back(pool[i]);
                        S.push_back(vars[pool[i]]);
                    }
                    CITestOutcome out;
                    try {
                        out = test.run(data, vars[a], vars[b], S, alpha,
                                       detail::pair_test_seed(seed, a, b, subset_idx));
                    } catch (const std::exception& e) {
                        throw std::runtime_error("pc_skeleton: test failed for (" + vars[a] +
                                                 ", " + vars[b] + " | " +
                                                 std::to_string(S.size()) + "-set): " + e.what());
                    }
                    if (out.independent) {
                        removed.insert({std::min(a, b), std::max(a, b)});
                        sk.sepsets[make_edge(vars[a], vars[b])] = S;
                        break;
                    }
                    more = order > 0 && detail::next_combination(comb, pool.size());
                } while (more);
            }
        }

        for (const auto& [a, b] : removed) {
            adj[a].erase(b);
            adj[b].erase(a);
        }
        if (!any_supported && order > 0) break;
    }

    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b : adj[a])
            if (a < b) sk.edges.insert(make_edge(vars[a], vars[b]));
    return sk;
}

/// Keeps an edge iff strictly more than half of the input skeletons have it.
inline Skeleton majority_vote(const std::vector<Skeleton>& skeletons) {
    if (skeletons.empty()) throw std::invalid_argument("majority_vote: empty input");
    const auto& verts = skeletons.front().vertices;
    for (const auto& s : skeletons)
        if (s.vertices != verts) throw std::invalid_argument("majority_vote: vertex-set mismatch");

    std::map<EdgeKey, std::size_t> counts;
    for (const auto& s : skeletons)
        for (const auto& e : s.edges) ++counts[e];

    Skeleton out;
    out.vertices = verts;
    out.alpha = skeletons.front().alpha;
    out.test_id = skeletons.front().test_id + " [majority of " +
                  std::to_string(skeletons.size()) + "]";
    for (const auto& [e, c] : counts)
        if (2 * c > skeletons.size()) out.edges.insert(e);
    return out;
}

}  // namespace quacc
