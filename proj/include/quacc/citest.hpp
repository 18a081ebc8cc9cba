#pragma once

#include "quacc/quacc.hpp"

namespace quacc {

struct CITestOutcome {
    double p_value = 1.0;
    double statistic = 0.0;
    std::size_t n_used = 0;
    bool independent = true;
};

/// QuACC-backed conditional independence decision.
inline CITestOutcome ci_quacc(const Dataset& data, const std::string& x, const std::string& y,
                              const std::vector<std::string>& S, double tau, double alpha,
                              Rng& rng, const QuaccOptions& opt = {},
                              bool accept_on_insufficient = false) {
    try {
        const QuaccResult r = quacc_test(data, y, x, S, tau, rng, opt);
        return {r.p_value, r.z, r.n_effective, r.p_value >= alpha};
    } catch (const std::runtime_error& e) {
        if (accept_on_insufficient &&
            std::string(e.what()).find("insufficient n") != std::string::npos)
            return {1.0, 0.0, 0, true};
        throw;
    }
}

/// Fisher-z test of zero partial correlation, computed from the precision
/// matrix of the complete-case covariance over {x,y} union S.
inline CITestOutcome ci_partial_corr(const Dataset& data, const std::string& x,
                                     const std::string& y, const std::vector<std::string>& S,
                                     double alpha) {
    if (x == y) throw std::invalid_argument("ci_partial_corr: degenerate pair");
    // Canonical column order makes the statistic bit-exact symmetric in the pair.
    std::vector<std::string> used = {std::min(x, y), std::max(x, y)};
    for (const auto& s : S) {
        if (s == x || s == y)
            throw std::invalid_argument("ci_partial_corr: conditioning set overlaps the pair");
        used.push_back(s);
    }
    const Dataset d = pairwise_complete(data, used);
    const std::size_t n = d.n_rows;
    const std::size_t q = used.size();
    if (n <= q + 3) throw std::runtime_error("ci_partial_corr: insufficient n");

    Eigen::MatrixXd M(n, q);
    for (std::size_t j = 0; j < q; ++j) {
        const auto& c = d.column(used[j]).values;
        for (std::size_t i = 0; i < n; ++i) M(i, j) = c[i];
    }
    const Eigen::RowVectorXd mean = M.colwise().mean();
    M.rowwise() -= mean;
    const Eigen::MatrixXd cov = (M.transpose() * M) / static_cast<double>(n - 1);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
    if (!lu.isInvertible()) throw std::runtime_error("ci_partial_corr: singular covariance");
    const Eigen::MatrixXd prec = lu.inverse();
    double r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    r = std::clamp(r, -1.0 + 1e-15, 1.0 - 1e-15);

    const double z =
        std::sqrt(static_cast<double>(n - S.size()) - 3.0) * std::atanh(r);
    const double p = 2.0 * (1.0 - norm_cdf(std::fabs(z)));
    return {p, z, n, p >= alpha};
}

/// Interface consumed by the PC adjacency phase. Implementations must be
/// symmetric in (x, y) for a fixed seed.
class CITest {
public:
    virtual ~CITest() = default;
    virtual CITestOutcome run(const Dataset& data, const std::string& x, const std::string& y,
                              const std::vector<std::string>& S, double alpha,
                              uint64_t seed) const = 0;
    virtual std::string id() const = 0;
};

class QuaccCITest final : public CITest {
public:
    QuaccCITest(double tau, QuaccOptions opt = {}, bool accept_on_insufficient = false)
        : tau_(tau), opt_(opt), accept_on_insufficient_(accept_on_insufficient) {}

    CITestOutcome run(const Dataset& data, const std::string& x, const std::string& y,
                      const std::vector<std::string>& S, double alpha,
                      uint64_t seed) const override {
        Rng rng(seed);
        return ci_quacc(data, x, y, S, tau_, alpha, rng, opt_, accept_on_insufficient_);
    }

    std::string id() const override { return "quacc(tau=" + std::to_string(tau_) + ")"; }

private:
    double tau_;
    QuaccOptions opt_;
    bool accept_on_insufficient_;
};

class PartialCorrCITest final : public CITest {
public:
    CITestOutcome run(const Dataset& data, const std::string& x, const std::string& y,
                      const std::vector<std::string>& S, double alpha,
                      uint64_t /*seed*/) const override {
        return ci_partial_corr(data, x, y, S, alpha);
    }

    std::string id() const override { return "pcorr"; }
};

}  // namespace quacc
