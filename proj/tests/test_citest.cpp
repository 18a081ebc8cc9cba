#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quacc/citest.hpp"
#include "quacc/synth.hpp"

using namespace quacc;

namespace {

Dataset gaussian_chain(std::size_t n, uint64_t seed) {
    // a -> b -> c, linear with unit noise.
    Rng rng(seed);
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.normal();
        b[i] = 0.8 * a[i] + rng.normal();
        c[i] = 0.8 * b[i] + rng.normal();
    }
    Dataset d;
    d.add_column("a", std::move(a));
    d.add_column("b", std::move(b));
    d.add_column("c", std::move(c));
    return d;
}

}  // namespace

TEST_CASE("ci_partial_corr separates a Gaussian chain") {
    const Dataset d = gaussian_chain(3000, 17);
    const auto marg = ci_partial_corr(d, "a", "c", {}, 0.05);
    CHECK_FALSE(marg.independent);
    CHECK(marg.p_value < 1e-6);
    const auto cond = ci_partial_corr(d, "a", "c", {"b"}, 0.05);
    CHECK(cond.independent);
    CHECK(cond.p_value > 0.05);
}

TEST_CASE("ci_partial_corr statistic matches hand-computed Fisher z") {
    // Marginal case reduces to plain correlation.
    Dataset d;
    d.add_column("x", {1, 2, 3, 4, 5, 6, 7, 8});
    d.add_column("y", {2, 1, 4, 3, 6, 5, 8, 7});
    const auto out = ci_partial_corr(d, "x", "y", {}, 0.05);
    // r = cov/sd_x sd_y computed by hand: 0.9047619...
    const double r = 38.0 / 42.0;
    CHECK(out.statistic == doctest::Approx(std::sqrt(8.0 - 3.0) * std::atanh(r)).epsilon(1e-9));
    CHECK(out.n_used == 8);
}

TEST_CASE("ci_partial_corr validation and degenerate input") {
    Dataset d = gaussian_chain(50, 3);
    CHECK_THROWS_AS(ci_partial_corr(d, "a", "a", {}, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(ci_partial_corr(d, "a", "b", {"a"}, 0.05), std::invalid_argument);
    Dataset sing;
    sing.add_column("u", {1, 2, 3, 4, 5, 6, 7, 8});
    sing.add_column("v", {2, 4, 6, 8, 10, 12, 14, 16});
    CHECK_THROWS_AS(ci_partial_corr(sing, "u", "v", {}, 0.05), std::runtime_error);
}

TEST_CASE("ci_quacc decision matches the p-value / alpha comparison") {
    Rng rng(9);
    const Dataset d = gen_pairwise(PairwiseSetting::S1, 1500, rng);
    Rng t(44);
    const auto out = ci_quacc(d, "Y", "X", {"Z1", "Z2"}, 0.9, 0.05, t);
    CHECK(out.independent == (out.p_value >= 0.05));
    CHECK(out.n_used == 1500);
}

TEST_CASE("ci_quacc insufficient-n policy") {
    Dataset tiny;
    tiny.add_column("p", {1, 2, 3, 4});
    tiny.add_column("q", {4, 3, 2, 1});
    Rng t(1);
    CHECK_THROWS_AS(ci_quacc(tiny, "p", "q", {}, 0.5, 0.05, t), std::runtime_error);
    const auto out = ci_quacc(tiny, "p", "q", {}, 0.5, 0.05, t, {}, true);
    CHECK(out.independent);
    CHECK(out.p_value == 1.0);
    CHECK(out.n_used == 0);
}

TEST_CASE("CITest implementations are pair-symmetric for a fixed seed") {
    Rng rng(5);
    const Dataset d = gen_pairwise(PairwiseSetting::S2, 800, rng);
    const QuaccCITest qt(0.1);
    const PartialCorrCITest pt;
    for (const CITest* test : {static_cast<const CITest*>(&qt), static_cast<const CITest*>(&pt)}) {
        const auto r1 = test->run(d, "Y", "X", {"Z1"}, 0.05, 99);
        const auto r2 = test->run(d, "X", "Y", {"Z1"}, 0.05, 99);
        CHECK(r1.p_value == r2.p_value);
        CHECK(r1.statistic == r2.statistic);
        CHECK(r1.independent == r2.independent);
    }
    CHECK(qt.id().find("quacc") != std::string::npos);
    CHECK(pt.id() == "pcorr");
}

TEST_CASE("QuaccCITest rejects strong tail dependence and keeps the null") {
    const QuaccCITest test(0.1);
    SUBCASE("dependent") {
        Rng rng(8);
        const Dataset d = gen_pairwise(PairwiseSetting::S3, 2500, rng);
        const auto out = test.run(d, "Y", "X", {"Z1", "Z2"}, 0.05, 7);
        CHECK_FALSE(out.independent);
    }
    SUBCASE("independent") {
        Rng rng(8);
        const Dataset d = gen_pairwise(PairwiseSetting::S3, 2500, rng, 0.0);
        std::size_t rejections = 0;
        for (uint64_t seed = 0; seed < 5; ++seed) {
            Rng g(100 + seed);
            const Dataset di = gen_pairwise(PairwiseSetting::S3, 2000, g, 0.0);
            if (!test.run(di, "Y", "X", {"Z1", "Z2"}, 0.05, seed).independent) ++rejections;
        }
        CHECK(rejections <= 1);
    }
}
