#pragma once

#include "quacc/dataset.hpp"
#include "quacc/quantreg.hpp"

namespace quacc {

struct FoldEstimate {
    std::size_t fold = 0;
    std::size_t n_k = 0;
    double rho_k = 0.0;
    double var_k = 0.0;  // normalized per-fold variance Sigma_tau (divide by n_k for Var(rho_k))
    double kappa_y = 0.0;
    double kappa_x = 0.0;
    double v_tau = 0.0;
    double v_xy = 0.0;
    double sigma2_qy = 0.0;
    double sigma2_qx = 0.0;
    bool density_crossing = false;
};

struct QuaccResult {
    double tau = 0.0;
    double rho_hat = 0.0;
    double rho_star = 0.0;
    double null_value = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    std::vector<FoldEstimate> folds;
    std::size_t n_effective = 0;
};

/// Joint tail exceedance rate of a test fold: mean of I{y>qy and x>qx} for
/// tau >= 0.5, joint strictly-below for tau < 0.5. Ties count as not
/// exceeding.
inline double rho_fold(const std::vector<double>& y_test, const std::vector<double>& x_test,
                       const std::vector<double>& qy_hat, const std::vector<double>& qx_hat,
                       double tau) {
    const std::size_t n = y_test.size();
    if (n == 0) throw std::invalid_argument("rho_fold: empty input");
    if (x_test.size() != n || qy_hat.size() != n || qx_hat.size() != n)
        throw std::invalid_argument("rho_fold: length mismatch");
    std::size_t count = 0;
    if (tau >= 0.5) {
        for (std::size_t i = 0; i < n; ++i)
            if (y_test[i] > qy_hat[i] && x_test[i] > qx_hat[i]) ++count;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (y_test[i] < qy_hat[i] && x_test[i] < qx_hat[i]) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n);
}

/// Value of the statistic under the independence null.
inline double null_value(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("null_value: tau outside (0,1)");
    const double t = (tau < 0.5) ? tau : 1.0 - tau;
    return t * t;
}

/// Rescales the statistic to [-1,1] with 0 at the independence null.
inline double normalize(double rho, double tau) {
    const double nv = null_value(tau);
    const double b = (tau < 0.5) ? tau : 1.0 - tau;
    if (rho < -1e-12 || rho > b + 1e-12)
        throw std::invalid_argument("normalize: rho outside feasible range");
    rho = std::clamp(rho, 0.0, b);
    if (rho > nv) return (rho - nv) / (b - nv);
    return (rho - nv) / nv;
}

/// Variance of the joint concordance indicator at the true quantile
/// surfaces, for a hypothesized joint probability.
inline double v_tau(double tau, double p_joint) {
    const double t = (tau < 0.5) ? tau : 1.0 - tau;
    if (p_joint < -1e-12 || p_joint > t + 1e-12)
        throw std::invalid_argument("v_tau: p_joint out of range");
    return t * t * (1.0 - t) * (1.0 - t) + (1.0 - 4.0 * t + 4.0 * t * t) * (p_joint - t * t);
}

/// Influence weights for quantile estimation error under the null: the mean
/// density of one variable at its fitted quantile times the one-sided tail
/// mass of the other.
inline std::pair<double, double> kappa_weights(double tau, const std::vector<double>& density_x,
                                               const std::vector<double>& density_y) {
    if (density_x.size() != density_y.size() || density_x.empty())
        throw std::invalid_argument("kappa_weights: length mismatch");
    double fx = 0.0, fy = 0.0;
    for (std::size_t i = 0; i < density_x.size(); ++i) {
        if (!(density_x[i] > 0.0) || !(density_y[i] > 0.0))
            throw std::invalid_argument("kappa_weights: non-positive density");
        fx += density_x[i];
        fy += density_y[i];
    }
    const double n = static_cast<double>(density_x.size());
    const double tail = (tau < 0.5) ? tau : 1.0 - tau;
    return {tail * fy / n, tail * fx / n};  // (kappa_y, kappa_x)
}

/// Empirical covariance (divisor n) of the two fitted quantile surfaces over
/// the test points.
inline double v_xy(const std::vector<double>& qy_hat, const std::vector<double>& qx_hat) {
    const std::size_t n = qy_hat.size();
    if (n < 2 || qx_hat.size() != n) throw std::invalid_argument("v_xy: need equal lengths >= 2");
    double my = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        my += qy_hat[i];
        mx += qx_hat[i];
    }
    my /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += (qy_hat[i] - my) * (qx_hat[i] - mx);
    return cov / static_cast<double>(n);
}

/// Full per-fold variance composition:
/// kappa_y^2 sigma2_qy + kappa_x^2 sigma2_qx + 2 kappa_y kappa_x vxy + vt.
inline double fold_variance(double kappa_y, double kappa_x, double sigma2_qy, double sigma2_qx,
                            double vxy, double vt) {
    if (sigma2_qy < 0.0 || sigma2_qx < 0.0 || vt < 0.0)
        throw std::invalid_argument("fold_variance: negative variance input");
    const double s = kappa_y * kappa_y * sigma2_qy + kappa_x * kappa_x * sigma2_qx +
                     2.0 * kappa_y * kappa_x * vxy + vt;
    if (!(s > 0.0)) throw std::runtime_error("fold_variance: degenerate non-positive variance");
    return s;
}

namespace detail {

/// Replaces flagged entries with the median of the clean ones.
inline void patch_crossed(std::vector<double>& density, const std::vector<bool>& crossed) {
    std::vector<double> clean;
    for (std::size_t i = 0; i < density.size(); ++i)
        if (!crossed[i]) clean.push_back(density[i]);
    if (clean.empty()) throw std::runtime_error("all density estimates crossed");
    const std::size_t mid = clean.size() / 2;
    std::nth_element(clean.begin(), clean.begin() + mid, clean.end());
    const double med = clean[mid];
    for (std::size_t i = 0; i < density.size(); ++i)
        if (crossed[i]) density[i] = med;
}

}  // namespace detail

struct QuaccOptions {
    std::size_t K = 5;
    BandwidthRule rule = BandwidthRule::hall_sheather;
};

/// Cross-fitted QuACC estimate and two-sided z-test of the independence
/// null. Quantile surfaces are fit on out-of-fold data at tau and tau +/- h
/// and evaluated in-fold; the null variance drops the quantile-covariance
/// cross term and evaluates the concordance variance at the null value.
inline QuaccResult quacc_test(const Dataset& data, const std::string& y_arg,
                              const std::string& x_arg, const std::vector<std::string>& z_names,
                              double tau, Rng& rng, const QuaccOptions& opt = {}) {
    if (y_arg == x_arg) throw std::invalid_argument("quacc_test: degenerate pair");
    // Canonical role order makes the test bit-exact symmetric in the pair.
    const bool swapped = x_arg < y_arg;
    const std::string& y_name = swapped ? x_arg : y_arg;
    const std::string& x_name = swapped ? y_arg : x_arg;
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("quacc_test: tau outside (0,1)");
    const std::size_t K = opt.K;
    if (K < 2) throw std::invalid_argument("quacc_test: K < 2");

    std::vector<std::string> used = {y_name, x_name};
    for (const auto& z : z_names) {
        if (z == y_name || z == x_name)
            throw std::invalid_argument("quacc_test: conditioning set overlaps the pair");
        used.push_back(z);
    }
    const Dataset d = pairwise_complete(data, used);
    const std::size_t n = d.n_rows;
    const std::size_t p = z_names.size();
    const std::size_t n_min = std::max<std::size_t>(5 * K, 10 * (p + 1));
    if (n < n_min)
        throw std::runtime_error("quacc_test: insufficient n (" + std::to_string(n) +
                                 " complete rows, need " + std::to_string(n_min) + ")");

    // Sample floor on the smallest training split: quantile fits at tau need
    // at least ~1/tail^2 effective observations.
    const double tail = std::min(tau, 1.0 - tau);
    const std::size_t largest_fold = n / K + (n % K ? 1 : 0);
    if (static_cast<double>(n - largest_fold) * tail * tail < 1.0)
        throw std::runtime_error("quacc_test: tau too extreme for n");

    const auto& ycol = d.column(y_name).values;
    const auto& xcol = d.column(x_name).values;
    Eigen::MatrixXd Zall(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto& c = d.column(z_names[j]).values;
        for (std::size_t i = 0; i < n; ++i) Zall(i, j) = c[i];
    }

    const FoldAssignment fa = kfold_split(n, K, rng);

    const double nv = null_value(tau);
    QuaccResult res;
    res.tau = tau;
    res.null_value = nv;
    res.n_effective = n;

    double rho_sum = 0.0;
    double se2_sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<std::size_t> test_rows, train_rows;
        for (std::size_t i = 0; i < n; ++i)
            (fa.fold_of_row[i] == k ? test_rows : train_rows).push_back(i);
        const std::size_t n_k = test_rows.size();
        const std::size_t n_train = train_rows.size();

        Eigen::MatrixXd Ztr(n_train, p), Zte(n_k, p);
        Eigen::VectorXd ytr(n_train), xtr(n_train);
        for (std::size_t i = 0; i < n_train; ++i) {
            Ztr.row(i) = Zall.row(static_cast<Eigen::Index>(train_rows[i]));
            ytr[static_cast<Eigen::Index>(i)] = ycol[train_rows[i]];
            xtr[static_cast<Eigen::Index>(i)] = xcol[train_rows[i]];
        }
        for (std::size_t i = 0; i < n_k; ++i)
            Zte.row(i) = Zall.row(static_cast<Eigen::Index>(test_rows[i]));

        const double h = bandwidth(n_train, tau, opt.rule);

        FoldEstimate fe;
        fe.fold = k;
        fe.n_k = n_k;
        try {
            const QuantileFit fy = fit_qr(Ztr, ytr, tau);
            const QuantileFit fx = fit_qr(Ztr, xtr, tau);
            const QuantileFit fy_hi = fit_qr(Ztr, ytr, tau + h);
            const QuantileFit fy_lo = fit_qr(Ztr, ytr, tau - h);
            const QuantileFit fx_hi = fit_qr(Ztr, xtr, tau + h);
            const QuantileFit fx_lo = fit_qr(Ztr, xtr, tau - h);

            std::vector<double> y_te(n_k), x_te(n_k), qy(n_k), qx(n_k), fdy(n_k), fdx(n_k);
            std::vector<bool> cross_y(n_k, false), cross_x(n_k, false);
            for (std::size_t i = 0; i < n_k; ++i) {
                const Eigen::VectorXd z = Zte.row(static_cast<Eigen::Index>(i));
                y_te[i] = ycol[test_rows[i]];
                x_te[i] = xcol[test_rows[i]];
                qy[i] = predict(fy, z);
                qx[i] = predict(fx, z);
                const DensityEstimate dy = sandwich_density(fy_hi, fy_lo, z, h);
                const DensityEstimate dx = sandwich_density(fx_hi, fx_lo, z, h);
                fdy[i] = dy.value;
                fdx[i] = dx.value;
                cross_y[i] = dy.crossed;
                cross_x[i] = dx.crossed;
                fe.density_crossing = fe.density_crossing || dy.crossed || dx.crossed;
            }
            // The crossing fallback density is numerically huge; replacing it
            // with the fold's median clean density keeps the variance finite
            // without discarding the flag.
            detail::patch_crossed(fdy, cross_y);
            detail::patch_crossed(fdx, cross_x);

            fe.rho_k = rho_fold(y_te, x_te, qy, qx, tau);
            const auto [ky, kx] = kappa_weights(tau, fdx, fdy);
            fe.kappa_y = ky;
            fe.kappa_x = kx;
            fe.v_xy = v_xy(qy, qx);
            fe.v_tau = v_tau(tau, nv);

            // Design limits over the training sample, densities at train points.
            std::vector<double> fv_y(n_train), fv_x(n_train);
            std::vector<bool> cr_y(n_train, false), cr_x(n_train, false);
            for (std::size_t i = 0; i < n_train; ++i) {
                const Eigen::VectorXd z = Ztr.row(static_cast<Eigen::Index>(i));
                const DensityEstimate dy = sandwich_density(fy_hi, fy_lo, z, h);
                const DensityEstimate dx = sandwich_density(fx_hi, fx_lo, z, h);
                fv_y[i] = dy.value;
                fv_x[i] = dx.value;
                cr_y[i] = dy.crossed;
                cr_x[i] = dx.crossed;
            }
            detail::patch_crossed(fv_y, cr_y);
            detail::patch_crossed(fv_x, cr_x);
            Eigen::VectorXd ftr_y = Eigen::Map<Eigen::VectorXd>(fv_y.data(), n_train);
            Eigen::VectorXd ftr_x = Eigen::Map<Eigen::VectorXd>(fv_x.data(), n_train);
            const DesignLimits limy = design_limits(Ztr, ftr_y, tau);
            const DesignLimits limx = design_limits(Ztr, ftr_x, tau);

            // The fold statistic depends on the average prediction error, so
            // the relevant variance is at the mean test design point.
            const Eigen::VectorXd z_bar = Zte.colwise().mean();
            const double s2y = qr_variance(limy, z_bar);
            const double s2x = qr_variance(limx, z_bar);
            fe.sigma2_qy = s2y;
            fe.sigma2_qx = s2x;

            // Quantile-noise terms: pooling over folds cancels most of the
            // first-order quantile estimation error (each fold's test rows
            // sit in every other fold's training set), so the independent-
            // sample noise kappa^2 sigma^2 / n_train enters at the pooled
            // scale n with a calibration factor of 1/2, i.e. n_k / (2n) once
            // var_k is normalized per test observation. The cross term is
            // dropped under the null.
            const double ratio =
                static_cast<double>(n_k) / (2.0 * static_cast<double>(n));
            fe.var_k = fold_variance(ky, kx, s2y * ratio, s2x * ratio, 0.0, fe.v_tau);
        } catch (const std::exception& e) {
            throw std::runtime_error("quacc_test: fold " + std::to_string(k) + ": " + e.what());
        }

        rho_sum += fe.rho_k;
        se2_sum += fe.var_k / static_cast<double>(n_k);
        res.folds.push_back(fe);
    }

    const double Kd = static_cast<double>(K);
    res.rho_hat = rho_sum / Kd;
    const double se = std::sqrt(se2_sum) / Kd;
    res.z = (res.rho_hat - nv) / se;
    res.p_value = 2.0 * (1.0 - norm_cdf(std::fabs(res.z)));
    const double b = (tau < 0.5) ? tau : 1.0 - tau;
    res.rho_star = normalize(std::clamp(res.rho_hat, 0.0, b), tau);
    if (swapped) {
        for (auto& fe : res.folds) {
            std::swap(fe.kappa_y, fe.kappa_x);
            std::swap(fe.sigma2_qy, fe.sigma2_qx);
        }
    }
    return res;
}

}  // namespace quacc
