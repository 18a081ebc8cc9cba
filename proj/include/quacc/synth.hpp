#pragma once

#include "quacc/dataset.hpp"
#include "quacc/graph.hpp"

namespace quacc {

enum class CopulaFamily { clayton, flipped_clayton, plackett, independence };

struct CopulaSpec {
    CopulaFamily family = CopulaFamily::independence;
    double theta = 0.0;

    void validate() const {
        switch (family) {
            case CopulaFamily::clayton:
            case CopulaFamily::flipped_clayton:
                if (!(theta > 0.0))
                    throw std::invalid_argument("CopulaSpec: clayton theta must be > 0");
                break;
            case CopulaFamily::plackett:
                if (!(theta > 0.0))
                    throw std::invalid_argument("CopulaSpec: plackett theta must be > 0");
                break;
            case CopulaFamily::independence:
                break;
        }
    }
};

inline const char* family_name(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::clayton: return "clayton";
        case CopulaFamily::flipped_clayton: return "flipped_clayton";
        case CopulaFamily::plackett: return "plackett";
        default: return "independence";
    }
}

inline double clayton_cdf(double u, double v, double theta) {
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
        throw std::domain_error("clayton_cdf: u,v must be in (0,1)");
    if (!(theta > 0.0)) throw std::domain_error("clayton_cdf: theta must be > 0");
    return std::pow(std::max(std::pow(u, -theta) + std::pow(v, -theta) - 1.0, 0.0),
                    -1.0 / theta);
}

inline double plackett_cdf(double u, double v, double theta) {
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
        throw std::domain_error("plackett_cdf: u,v must be in (0,1)");
    if (!(theta > 0.0)) throw std::domain_error("plackett_cdf: theta must be > 0");
    if (std::fabs(theta - 1.0) < 1e-12) return u * v;
    const double s = 1.0 + (theta - 1.0) * (u + v);
    const double disc = std::max(s * s - 4.0 * theta * (theta - 1.0) * u * v, 0.0);
    return (s - std::sqrt(disc)) / (2.0 * (theta - 1.0));
}

/// One pair (u, v) with uniform margins from the given copula. Clayton uses
/// the closed-form conditional inverse, the flipped (survival) Clayton is a
/// reflected Clayton draw, and Plackett uses conditional-CDF inversion.
inline std::pair<double, double> sample_copula_pair(const CopulaSpec& spec, Rng& rng) {
    const double u = rng.uniform();
    switch (spec.family) {
        case CopulaFamily::independence:
            return {u, rng.uniform()};
        case CopulaFamily::clayton: {
            const double w = rng.uniform();
            const double th = spec.theta;
            const double v = std::pow(
                (std::pow(w, -th / (1.0 + th)) - 1.0) * std::pow(u, -th) + 1.0, -1.0 / th);
            return {u, v};
        }
        case CopulaFamily::flipped_clayton: {
            CopulaSpec base{CopulaFamily::clayton, spec.theta};
            const auto [a, b] = sample_copula_pair(base, rng);
            return {1.0 - a, 1.0 - b};
        }
        case CopulaFamily::plackett: {
            const double th = spec.theta;
            const double t = rng.uniform();
            if (std::fabs(th - 1.0) < 1e-12) return {u, t};
            const double a = t * (1.0 - t);
            const double b = th + a * (th - 1.0) * (th - 1.0);
            const double c = 2.0 * a * (u * th * th + 1.0 - u) + th * (1.0 - 2.0 * a);
            const double d =
                std::sqrt(th) *
                std::sqrt(std::max(th + 4.0 * a * u * (1.0 - u) * (1.0 - th) * (1.0 - th), 0.0));
            const double v = (c - (1.0 - 2.0 * t) * d) / (2.0 * b);
            return {u, std::clamp(v, 1e-15, 1.0 - 1e-15)};
        }
    }
    throw std::logic_error("sample_copula_pair: unreachable");
}

inline std::pair<std::vector<double>, std::vector<double>> sample_copula(const CopulaSpec& spec,
                                                                         std::size_t n,
                                                                         Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_copula: n must be >= 1");
    spec.validate();
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) std::tie(u[i], v[i]) = sample_copula_pair(spec, rng);
    return {std::move(u), std::move(v)};
}

/// Standard normal conditioned to (lo, hi) via inverse-CDF sampling.
inline double trunc_normal(Rng& rng, double lo = -2.0, double hi = 2.0) {
    if (!(lo < hi)) throw std::invalid_argument("trunc_normal: lo must be < hi");
    const double plo = norm_cdf(lo), phi = norm_cdf(hi);
    return norm_quantile(plo + rng.uniform() * (phi - plo));
}

enum class PairwiseSetting { S1, S2, S3 };

struct DgpSpec {
    std::string setting;
    std::size_t n = 0;
    double theta = 0.0;
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> gammas;
    uint64_t seed = 0;
};

/// Default copula parameters of the pairwise settings.
inline double default_theta(PairwiseSetting s) {
    return s == PairwiseSetting::S1 ? std::exp(1.42) : 1.0;
}

/// Pairwise rejection-study generator: covariates Z1 (truncated normal) and
/// Z2 (Bernoulli 0.5), pair (Y, X) with shared conditional-quantile marginals
/// and setting-specific copula dependence. theta = 0 degrades to
/// independence on the rejection grid.
inline Dataset gen_pairwise(PairwiseSetting setting, std::size_t n, Rng& rng,
                            double theta = -1.0, DgpSpec* spec_out = nullptr) {
    if (n < 1) throw std::invalid_argument("gen_pairwise: n must be >= 1");
    if (theta < 0.0) theta = default_theta(setting);

    double a1 = 0.25, a2 = 0.25, a3 = 0.0, a4 = 0.0;
    if (setting != PairwiseSetting::S1) {
        a3 = 1.0;
        a4 = 0.5;
    }

    std::vector<double> Y(n), X(n), Z1(n), Z2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = trunc_normal(rng, -2.0, 2.0);
        const double z2 = rng.bernoulli(0.5) ? 1.0 : 0.0;

        CopulaSpec cop{CopulaFamily::independence, 0.0};
        switch (setting) {
            case PairwiseSetting::S1:
                if (theta > 0.0) cop = {CopulaFamily::plackett, theta};
                break;
            case PairwiseSetting::S2:
                if (z2 == 1.0 && theta > 0.0) cop = {CopulaFamily::flipped_clayton, theta};
                break;
            case PairwiseSetting::S3:
                if (theta > 0.0)
                    cop = {z2 == 1.0 ? CopulaFamily::flipped_clayton : CopulaFamily::clayton,
                           theta};
                break;
        }
        const auto [uy, ux] = sample_copula_pair(cop, rng);

        // Q_Y(u|Z) = Qnorm(u;0,0.2^2) + a1 Z1 + a2 (Qnorm(u;0,0.4^2)-Qnorm(u;0,0.2^2)) Z2
        // Q_X(u|Z) = Qnorm(u;0,0.3^2) - a3 Z1 + a4 Z2
        const double qy = 0.2 * norm_quantile(uy) + a1 * z1 + a2 * 0.2 * norm_quantile(uy) * z2;
        const double qx = 0.3 * norm_quantile(ux) - a3 * z1 + a4 * z2;
        Y[i] = qy;
        X[i] = qx;
        Z1[i] = z1;
        Z2[i] = z2;
    }

    if (spec_out) {
        spec_out->setting = setting == PairwiseSetting::S1   ? "S1"
                            : setting == PairwiseSetting::S2 ? "S2"
                                                             : "S3";
        spec_out->n = n;
        spec_out->theta = theta;
        spec_out->alphas = {a1, a2, a3, a4};
        spec_out->betas.clear();
        spec_out->gammas.clear();
    }

    Dataset d;
    d.add_column("Y", std::move(Y));
    d.add_column("X", std::move(X));
    d.add_column("Z1", std::move(Z1));
    d.add_column("Z2", std::move(Z2));
    return d;
}

namespace detail {

inline double empirical_quantile(const std::vector<double>& v, double tau) {
    std::vector<double> sorted = v;
    std::size_t m =
        static_cast<std::size_t>(std::ceil(static_cast<double>(v.size()) * tau - 1e-12));
    m = std::clamp<std::size_t>(m, 1, v.size());
    std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end());
    return sorted[m - 1];
}

/// Parent contribution: linear term plus tail-indicator terms at the
/// parent's realized 0.9 / 0.1 quantiles.
inline void add_parent(std::vector<double>& child, const std::vector<double>& parent,
                       double alpha, double beta, double gamma) {
    const double q90 = empirical_quantile(parent, 0.9);
    const double q10 = empirical_quantile(parent, 0.1);
    for (std::size_t i = 0; i < child.size(); ++i) {
        child[i] += alpha * parent[i];
        if (parent[i] >= q90) child[i] += beta * parent[i];
        if (parent[i] <= q10) child[i] += gamma * parent[i];
    }
}

}  // namespace detail

struct GraphSample {
    Dataset data;
    TrueGraph truth;
    DgpSpec spec;
};

/// Ten-variable graph generator with tail-indicator edges. The published
/// equations write W as the multiplier in the lower-tail terms of T and S
/// and X in R's lower-tail indicator; both are read as the same parent as
/// the rest of each equation (U and T respectively), matching the stated
/// edge structure. Q is sampled but enters no equation.
inline GraphSample gen_graph(std::size_t n, bool with_mean_effects, Rng& rng) {
    if (n < 1) throw std::invalid_argument("gen_graph: n must be >= 1");

    std::vector<double> beta(9), gamma(9), alpha(9, 0.0);
    for (auto& b : beta) b = rng.uniform(0.3, 0.8);
    for (auto& g : gamma) g = rng.uniform(0.3, 0.8);
    if (with_mean_effects)
        for (auto& a : alpha) a = rng.uniform(-0.4, 0.4);

    auto noise = [&](std::vector<double>& v) {
        for (auto& x : v) x = rng.normal();
    };

    std::vector<double> Z(n), U(n), Q(n);
    for (std::size_t i = 0; i < n; ++i) {
        Z[i] = trunc_normal(rng, -2.0, 2.0);
        U[i] = trunc_normal(rng, -2.0, 2.0);
        Q[i] = trunc_normal(rng, -2.0, 2.0);
    }

    std::vector<double> Y(n), X(n), W(n), V(n), T(n), S(n), R(n);
    noise(Y);
    detail::add_parent(Y, Z, alpha[0], beta[0], gamma[0]);
    noise(X);
    detail::add_parent(X, Z, alpha[1], beta[1], gamma[1]);
    noise(W);
    detail::add_parent(W, X, alpha[2], beta[2], gamma[2]);
    detail::add_parent(W, Y, alpha[3], beta[3], gamma[3]);
    noise(V);
    detail::add_parent(V, W, alpha[4], beta[4], gamma[4]);
    noise(T);
    detail::add_parent(T, U, alpha[5], beta[5], gamma[5]);
    noise(S);
    detail::add_parent(S, U, alpha[6], beta[6], gamma[6]);
    noise(R);
    detail::add_parent(R, T, alpha[7], beta[7], gamma[7]);
    detail::add_parent(R, W, alpha[8], beta[8], gamma[8]);

    GraphSample out;
    out.data.add_column("Z", std::move(Z));
    out.data.add_column("U", std::move(U));
    out.data.add_column("Q", std::move(Q));
    out.data.add_column("Y", std::move(Y));
    out.data.add_column("X", std::move(X));
    out.data.add_column("W", std::move(W));
    out.data.add_column("V", std::move(V));
    out.data.add_column("T", std::move(T));
    out.data.add_column("S", std::move(S));
    out.data.add_column("R", std::move(R));

    out.truth.vertices = out.data.names();
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"Z", "Y"}, {"Z", "X"}, {"X", "W"}, {"Y", "W"}, {"W", "V"},
             {"U", "T"}, {"U", "S"}, {"T", "R"}, {"W", "R"}})
        out.truth.edges.insert(make_edge(a, b));

    out.spec.setting = "graph";
    out.spec.n = n;
    out.spec.alphas = alpha;
    out.spec.betas = beta;
    out.spec.gammas = gamma;
    return out;
}

}  // namespace quacc
