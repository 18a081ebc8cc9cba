#pragma once

#include <Eigen/Dense>
#include <numeric>

#include "quacc/math.hpp"

namespace quacc {

/// One fitted linear quantile regression. Coefficients hold the intercept
/// first; `objective` is the mean check loss on the training data.
struct QuantileFit {
    double tau = 0.0;
    Eigen::VectorXd coefficients;  // length p+1, intercept first
    std::size_t n_train = 0;
    double objective = 0.0;
    double response_spread = 0.0;  // max(y) - min(y), for density fallbacks
};

struct DesignLimits {
    Eigen::MatrixXd D0;
    Eigen::MatrixXd D1;
    double tau = 0.0;
};

enum class BandwidthRule { hall_sheather, bofinger };

inline double check_loss(double u, double tau) {
    return u * (tau - (u < 0.0 ? 1.0 : 0.0));
}

namespace detail {

inline QuantileFit fit_intercept_only(const Eigen::VectorXd& y, double tau) {
    const std::size_t n = static_cast<std::size_t>(y.size());
    std::vector<double> sorted(y.data(), y.data() + n);
    std::size_t m = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * tau - 1e-12));
    m = std::clamp<std::size_t>(m, 1, n);
    std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end());
    const double b0 = sorted[m - 1];

    QuantileFit fit;
    fit.tau = tau;
    fit.coefficients = Eigen::VectorXd::Constant(1, b0);
    fit.n_train = n;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += check_loss(y[i] - b0, tau);
    fit.objective = loss / static_cast<double>(n);
    fit.response_spread = y.maxCoeff() - y.minCoeff();
    return fit;
}

}  // namespace detail

/// Minimizes the check loss sum_i rho_tau(y_i - b0 - Z_i . b) over the
/// coefficient vector, with an intercept always included. The solution is a
/// vertex interpolating p+1 observations; we descend between vertices by
/// exchanging one basis observation at a time, starting from the least
/// squares fit. Exact at convergence (piecewise linear convex objective).
inline QuantileFit fit_qr(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, double tau,
                          int max_iterations = 200) {
    const std::size_t n = static_cast<std::size_t>(y.size());
    const std::size_t p = static_cast<std::size_t>(Z.cols());
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("fit_qr: tau outside (0,1)");
    if (Z.rows() != y.size()) throw std::invalid_argument("fit_qr: Z/y row mismatch");
    if (n <= p + 1) throw std::invalid_argument("fit_qr: need n > p+1");
    if (!y.allFinite() || !Z.allFinite())
        throw std::invalid_argument("fit_qr: non-finite values in input");

    if (p == 0) return detail::fit_intercept_only(y, tau);

    const std::size_t q = p + 1;
    Eigen::MatrixXd X(n, q);
    X.col(0).setOnes();
    X.rightCols(p) = Z;

    const double scale = 1.0 + y.cwiseAbs().mean();
    const double grad_tol = 1e-9 * scale;
    const double zero_tol = 1e-11 * scale;

    // Initial basis: the p+1 linearly independent rows closest (in absolute
    // residual) to the least squares hyperplane.
    Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    Eigen::VectorXd r = y - X * beta;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::fabs(r[a]) < std::fabs(r[b]); });

    std::vector<std::size_t> basis;
    Eigen::MatrixXd B(q, q);
    for (std::size_t cand : order) {
        B.row(basis.size()) = X.row(cand);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(
            B.topRows(basis.size() + 1).transpose());
        if (qr.rank() == static_cast<Eigen::Index>(basis.size() + 1)) {
            basis.push_back(cand);
            if (basis.size() == q) break;
        }
    }
    if (basis.size() < q) throw std::invalid_argument("fit_qr: singular/collinear design");

    std::vector<char> in_basis(n, 0);
    for (std::size_t i : basis) in_basis[i] = 1;

    Eigen::VectorXd yB(q), c(n);
    for (int iter = 0; iter < max_iterations; ++iter) {
        for (std::size_t j = 0; j < q; ++j) {
            B.row(j) = X.row(basis[j]);
            yB[j] = y[basis[j]];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        beta = lu.solve(yB);
        r = y - X * beta;
        for (std::size_t i : basis) r[i] = 0.0;  // exact by construction

        const Eigen::MatrixXd Binv = lu.inverse();

        // Pick the steepest of the 2(p+1) edge directions out of this vertex.
        double best_d = -grad_tol;
        int best_h = -1;
        double best_sign = 0.0;
        Eigen::VectorXd best_c;
        for (std::size_t h = 0; h < q; ++h) {
            const Eigen::VectorXd delta = Binv.col(h);
            c.noalias() = X * delta;
            for (std::size_t j = 0; j < q; ++j) c[basis[j]] = (j == h) ? 1.0 : 0.0;
            for (double sign : {1.0, -1.0}) {
                double d = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double ci = sign * c[i];
                    if (ci == 0.0) continue;
                    const bool below =
                        (r[i] < -zero_tol) || (std::fabs(r[i]) <= zero_tol && ci > 0.0);
                    d -= ci * (tau - (below ? 1.0 : 0.0));
                }
                if (d < best_d) {
                    best_d = d;
                    best_h = static_cast<int>(h);
                    best_sign = sign;
                    best_c = sign * c;
                }
            }
        }
        if (best_h < 0) {
            // No descent direction: global optimum of the convex objective.
            QuantileFit fit;
            fit.tau = tau;
            fit.coefficients = beta;
            fit.n_train = n;
            double loss = 0.0;
            for (std::size_t i = 0; i < n; ++i) loss += check_loss(r[i], tau);
            fit.objective = loss / static_cast<double>(n);
            fit.response_spread = y.maxCoeff() - y.minCoeff();
            return fit;
        }

        // Piecewise linear line search: walk residual crossings until the
        // directional derivative turns non-negative.
        std::vector<std::pair<double, double>> crossings;  // (t, |c_i| jump), index packed below
        std::vector<std::size_t> cross_idx;
        std::vector<std::size_t> sorted_cross;
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (in_basis[i]) continue;
            const double ci = best_c[i];
            if (std::fabs(ci) <= zero_tol) continue;
            const double t = r[i] / ci;
            if (t > zero_tol) {
                cross_idx.push_back(i);
                crossings.emplace_back(t, std::fabs(ci));
            }
        }
        sorted_cross.resize(crossings.size());
        std::iota(sorted_cross.begin(), sorted_cross.end(), 0);
        std::sort(sorted_cross.begin(), sorted_cross.end(), [&](std::size_t a, std::size_t b) {
            return crossings[a].first < crossings[b].first;
        });

        double d = best_d;
        std::size_t enter = n;
        for (std::size_t s : sorted_cross) {
            d += crossings[s].second;
            if (d >= 0.0) {
                enter = cross_idx[s];
                break;
            }
        }
        if (enter == n) throw std::runtime_error("fit_qr: objective unbounded along descent");

        in_basis[basis[static_cast<std::size_t>(best_h)]] = 0;
        in_basis[enter] = 1;
        basis[static_cast<std::size_t>(best_h)] = enter;
        (void)best_sign;
    }
    throw std::runtime_error("fit_qr: no convergence after max iterations");
}

inline double predict(const QuantileFit& fit, const Eigen::VectorXd& z) {
    if (z.size() + 1 != fit.coefficients.size())
        throw std::invalid_argument("predict: dimension mismatch");
    return fit.coefficients[0] + fit.coefficients.tail(z.size()).dot(z);
}

/// Bandwidth for the Hendricks-Koenker sandwich; clamped so tau +/- h stays
/// inside (0,1).
inline double bandwidth(std::size_t n, double tau, BandwidthRule rule) {
    if (n < 2) throw std::invalid_argument("bandwidth: n < 2");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("bandwidth: tau outside (0,1)");
    const double zt = norm_quantile(tau);
    const double phi = norm_pdf(zt);
    const double dn = static_cast<double>(n);
    double h;
    if (rule == BandwidthRule::hall_sheather) {
        const double z_alpha = norm_quantile(1.0 - 0.05 / 2.0);
        h = std::pow(dn, -1.0 / 3.0) * std::pow(z_alpha, 2.0 / 3.0) *
            std::cbrt(1.5 * phi * phi / (2.0 * zt * zt + 1.0));
    } else {
        h = std::pow(dn, -1.0 / 5.0) *
            std::pow(4.5 * std::pow(phi, 4) / ((2.0 * zt * zt + 1.0) * (2.0 * zt * zt + 1.0)),
                     1.0 / 5.0);
    }
    return std::min(h, 0.99 * std::min(tau, 1.0 - tau));
}

struct DensityEstimate {
    double value = 0.0;
    bool crossed = false;  // quantile crossing triggered the fallback denominator
};

/// f(Q(tau|z)) = 2h / (Q(tau+h|z) - Q(tau-h|z)); a crossing denominator is
/// replaced by a machine-epsilon-scaled spread of the training response.
inline DensityEstimate sandwich_density(const QuantileFit& fit_hi, const QuantileFit& fit_lo,
                                        const Eigen::VectorXd& z, double h) {
    if (h <= 0.0) throw std::invalid_argument("sandwich_density: h must be positive");
    const double spread = std::max(fit_hi.response_spread, fit_lo.response_spread);
    const double eps = std::numeric_limits<double>::epsilon() * std::max(spread, 1.0);
    const double denom = predict(fit_hi, z) - predict(fit_lo, z);
    DensityEstimate est;
    est.crossed = denom <= 0.0;
    est.value = 2.0 * h / std::max(denom, eps);
    return est;
}

/// Empirical versions of the design limit matrices: D0 = n^-1 sum z z^T and
/// D1 = n^-1 sum f_i z z^T over rows augmented with an intercept.
inline DesignLimits design_limits(const Eigen::MatrixXd& Z, const Eigen::VectorXd& densities,
                                  double tau) {
    const std::size_t n = static_cast<std::size_t>(Z.rows());
    const std::size_t q = static_cast<std::size_t>(Z.cols()) + 1;
    if (densities.size() != Z.rows())
        throw std::invalid_argument("design_limits: density length mismatch");
    for (Eigen::Index i = 0; i < densities.size(); ++i)
        if (!(densities[i] > 0.0))
            throw std::invalid_argument("design_limits: non-positive density");

    DesignLimits lim;
    lim.tau = tau;
    lim.D0 = Eigen::MatrixXd::Zero(q, q);
    lim.D1 = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd zt(q);
    for (std::size_t i = 0; i < n; ++i) {
        zt[0] = 1.0;
        zt.tail(q - 1) = Z.row(i);
        lim.D0.noalias() += zt * zt.transpose();
        lim.D1.noalias() += densities[static_cast<Eigen::Index>(i)] * zt * zt.transpose();
    }
    lim.D0 /= static_cast<double>(n);
    lim.D1 /= static_cast<double>(n);
    return lim;
}

/// Asymptotic variance of the fitted quantile surface at a point:
/// tau(1-tau) z~^T D1^-1 D0 D1^-1 z~.
inline double qr_variance(const DesignLimits& limits, const Eigen::VectorXd& z) {
    const Eigen::Index q = limits.D0.rows();
    if (z.size() + 1 != q) throw std::invalid_argument("qr_variance: dimension mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(limits.D1);
    if (!lu.isInvertible()) throw std::invalid_argument("qr_variance: singular D1");
    Eigen::VectorXd zt(q);
    zt[0] = 1.0;
    zt.tail(q - 1) = z;
    const Eigen::VectorXd w = lu.solve(zt);
    return limits.tau * (1.0 - limits.tau) * w.dot(limits.D0 * w);
}

}  // namespace quacc
