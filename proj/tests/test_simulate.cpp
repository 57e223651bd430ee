#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oscbm/simulate.hpp"

using namespace oscbm::simulate;

namespace {

// Brute-force last passage: maximize the collected increments over all
// nondecreasing switch-time tuples, directly from prefix sums.
double brute_last_passage(const std::vector<std::vector<double>>& inc, int lines,
                          int j) {
    // prefix[l][s] = sum of the first s increments of line l
    std::vector<std::vector<double>> pre(lines, std::vector<double>(j + 1, 0.0));
    for (int l = 0; l < lines; ++l)
        for (int s = 1; s <= j; ++s) pre[l][s] = pre[l][s - 1] + inc[l][s - 1];
    if (lines == 1) return pre[0][j];
    double best = -1e300;
    if (lines == 2) {
        for (int s = 0; s <= j; ++s)
            best = std::max(best, pre[0][s] + pre[1][j] - pre[1][s]);
        return best;
    }
    for (int s1 = 0; s1 <= j; ++s1)
        for (int s2 = s1; s2 <= j; ++s2)
            best = std::max(best, pre[0][s1] + (pre[1][s2] - pre[1][s1]) +
                                      (pre[2][j] - pre[2][s2]));
    return best;
}

std::vector<std::vector<double>> aggregate_pairs(
    const std::vector<std::vector<double>>& fine, int k) {
    std::vector<std::vector<double>> out(fine.size());
    for (size_t r = 0; r < fine.size(); ++r) {
        out[r].resize(fine[r].size() >> k);
        for (size_t j = 0; j < out[r].size(); ++j) {
            double s = 0.0;
            for (int i = 0; i < (1 << k); ++i) s += fine[r][(j << k) + i];
            out[r][j] = s;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("driving noise is keyed by (seed, label, replicate)") {
    BrownianGrid a(42, 7, 0.25, 16), b(42, 7, 0.25, 16);
    CHECK(a.increments(3) == b.increments(3));
    CHECK(a.increments(-5) == b.increments(-5));
    BrownianGrid c(42, 8, 0.25, 16);
    CHECK(a.increments(3) != c.increments(3));
    BrownianGrid d(43, 7, 0.25, 16);
    CHECK(a.increments(3) != d.increments(3));
    // table-backed grids hand rows back verbatim and bound-check labels
    BrownianGrid tab({{0.5, -0.25}, {1.0, 0.75}}, -1, 0.5);
    CHECK(tab.increments(-1) == std::vector<double>{0.5, -0.25});
    CHECK(tab.increments(0) == std::vector<double>{1.0, 0.75});
    CHECK_THROWS_AS((void)tab.increments(1), std::out_of_range);
    CHECK_THROWS_AS(BrownianGrid({{0.5}, {1.0, 0.75}}, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(BrownianGrid(1, 0, -0.1, 4), std::invalid_argument);
}

TEST_CASE("grid times must be grid points inside the horizon") {
    BrownianGrid g(11, 0, 1.0 / 64, 64);
    CHECK_THROWS_AS((void)last_passage(g, 1, 1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS((void)last_passage(g, 1, 1, 2.0), std::out_of_range);
    CHECK_THROWS_AS((void)last_passage(g, 2, 1, 0.5), std::invalid_argument);
}

TEST_CASE("last passage matches switch-time enumeration") {
    std::vector<std::vector<double>> inc = {
        {0.3, -0.5, 0.8, 0.1, -0.2, 0.4, -0.7, 0.6},
        {-0.4, 0.2, 0.5, -0.6, 0.3, -0.1, 0.9, -0.3},
        {0.1, 0.6, -0.8, 0.4, 0.2, -0.5, 0.3, 0.7}};
    double dt = 0.5;
    BrownianGrid g(inc, 2, dt);
    for (int lines = 1; lines <= 3; ++lines)
        for (int j : {0, 1, 3, 8}) {
            double want = brute_last_passage(inc, lines, j);
            double got = last_passage(g, 2, 1 + lines, j * dt);
            CHECK(std::abs(got - want) <= 1e-12);
        }
}

TEST_CASE("reflection dynamics equal the variational representation") {
    double dt = 1.0 / 32, t = 2.0;
    for (int N = 1; N <= 6; ++N)
        for (uint64_t seed = 100; seed < 160; ++seed) {
            BrownianGrid g(seed, 0, dt, 64);
            InitialCondition ic;
            ic.label_lo = 1;
            for (int i = 0; i < N; ++i) ic.x.push_back(-1.0 * i);
            SystemState st = evolve_reflect(g, ic, t);
            for (int m = 1; m <= N; ++m) {
                double best = -1e300;
                for (int k = 1; k <= m; ++k)
                    best = std::max(best, last_passage(g, k, m, t) - ic.x[k - 1]);
                CHECK(std::abs(st.at(m) + best) <= 1e-9);
            }
            // one-sided collisions keep labels ordered
            for (size_t i = 1; i < st.x.size(); ++i) CHECK(st.x[i] <= st.x[i - 1]);
        }
}

TEST_CASE("coupled systems: shift equivariance and the contraction property") {
    BrownianGrid g(314, 2, 1.0 / 32, 64);
    InitialCondition a;
    a.label_lo = 1;
    a.x = {0.0, -1.0, -2.0, -3.0};
    auto [sa, sb] = coupled_evolve(g, a, a, 2.0);
    CHECK(sa.x == sb.x);
    // constant shift passes through exactly
    InitialCondition ash = a;
    for (double& v : ash.x) v += 0.25;
    auto [s0, s1] = coupled_evolve(g, a, ash, 2.0);
    for (size_t i = 0; i < s0.x.size(); ++i)
        CHECK(s1.x[i] - s0.x[i] == doctest::Approx(0.25).epsilon(1e-12));
    // raising one coordinate by 0.5 moves every output up by at most 0.5
    InitialCondition b = a;
    b.x[1] = -0.5;
    auto [sl, sh] = coupled_evolve(g, a, b, 2.0);
    for (size_t i = 0; i < sl.x.size(); ++i) {
        CHECK(sh.x[i] >= sl.x[i] - 1e-12);
        CHECK(sh.x[i] <= sl.x[i] + 0.5 + 1e-12);
    }
    InitialCondition bad = a;
    bad.label_lo = 2;
    CHECK_THROWS_AS((void)coupled_evolve(g, a, bad, 2.0), std::invalid_argument);
}

TEST_CASE("flat window: values settle once the window holds the maximizer") {
    std::vector<long long> targets = {-2, 0, 2};
    for (uint64_t seed = 5000; seed < 5040; ++seed) {
        BrownianGrid g(seed, 1, 1.0 / 64, 64);
        auto x4 = evolve_flat(g, 4, targets, 1.0);
        auto x8 = evolve_flat(g, 8, targets, 1.0);
        auto x16 = evolve_flat(g, 16, targets, 1.0);
        auto x32 = evolve_flat(g, 32, targets, 1.0);
        for (size_t i = 0; i < targets.size(); ++i) {
            // enlarging the window can only add candidates to the max
            CHECK(x4[i] >= x8[i]);
            CHECK(x8[i] >= x16[i]);
            // at t = 1 the maximizer sits well inside the depth-8 window
            CHECK(x8[i] == x16[i]);
            CHECK(x16[i] == x32[i]);
        }
        for (size_t i = 1; i < targets.size(); ++i) CHECK(x8[i] <= x8[i - 1]);
    }
    BrownianGrid g(1, 0, 0.25, 4);
    CHECK_THROWS_AS((void)evolve_flat(g, 4, {5}, 1.0), std::out_of_range);
    CHECK_THROWS_AS((void)evolve_flat(g, 4, {}, 1.0), std::invalid_argument);
}

TEST_CASE("window choice is conservative and monotone") {
    long long m0 = choose_window(0.0, {0});
    CHECK(m0 >= 16);
    CHECK(choose_window(1.0, {0}) >= m0);
    CHECK(choose_window(4.0, {0}) >= choose_window(1.0, {0}));
    CHECK(choose_window(100.0, {3}) >= choose_window(4.0, {3}));
    // rarer excursions need deeper windows
    CHECK(choose_window(4.0, {0}, 1e-9) > choose_window(4.0, {0}, 1e-3));
    // the window always contains the targets with slack
    for (long long tg : {-7LL, 0LL, 25LL}) {
        long long m = choose_window(9.0, {tg});
        CHECK(m >= tg + 1);
        CHECK(-m + 1 <= tg);
    }
    CHECK_THROWS_AS((void)choose_window(-1.0, {0}), std::invalid_argument);
    CHECK_THROWS_AS((void)choose_window(1.0, {0}, 2.0), std::invalid_argument);
}

TEST_CASE("grid refinement converges at a square-root-like rate") {
    double t = 1.0;
    int nf = 1024, n_seeds = 80;
    std::vector<int> levs = {3, 4, 5, 6, 7};  // dt = t/128 .. t/8
    std::vector<double> errs(levs.size(), 0.0);
    for (int s = 0; s < n_seeds; ++s) {
        BrownianGrid fine(9000 + s, 0, t / nf, nf);
        std::vector<std::vector<double>> tab;
        for (long long l = 1; l <= 3; ++l) tab.push_back(fine.increments(l));
        InitialCondition ic;
        ic.label_lo = 1;
        ic.x = {0.0, -1.0, -2.0};
        BrownianGrid gf(tab, 1, t / nf);
        auto ref = evolve_reflect(gf, ic, t);
        for (size_t lev = 0; lev < levs.size(); ++lev) {
            BrownianGrid g(aggregate_pairs(tab, levs[lev]), 1,
                           t / (nf >> levs[lev]));
            auto st = evolve_reflect(g, ic, t);
            for (int i = 0; i < 3; ++i)
                errs[lev] += std::abs(st.x[i] - ref.x[i]) / (3.0 * n_seeds);
        }
    }
    for (size_t lev = 1; lev < errs.size(); ++lev) CHECK(errs[lev] > errs[lev - 1]);
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    int n = static_cast<int>(levs.size());
    for (int lev = 0; lev < n; ++lev) {
        double lx = std::log2(t / (nf >> levs[lev])), ly = std::log2(errs[lev]);
        sx += lx;
        sy += ly;
        sxy += lx * ly;
        sxx += lx * lx;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= 0.35);
    CHECK(slope <= 0.80);
}

TEST_CASE("a single particle is free Brownian motion") {
    int reps = 8000;
    std::vector<double> xs(reps);
    for (int r = 0; r < reps; ++r) {
        BrownianGrid g(777, static_cast<uint64_t>(r), 1.0 / 64, 64);
        InitialCondition ic;
        ic.x = {0.7};
        xs[r] = evolve_reflect(g, ic, 1.0).x[0];
    }
    auto st = make_stats("x1", 777, xs, {0.7});
    CHECK(std::abs(st.mean - 0.7) <= 3.0 / std::sqrt(static_cast<double>(reps)));
    CHECK(std::abs(st.variance - 1.0) <= 0.05);
    // the median point of a symmetric law
    CHECK(std::abs(st.cdf[0] - 0.5) <= 3.0 * st.se[0] + 1e-12);
}

TEST_CASE("ensemble statistics from a hand sample") {
    auto st = make_stats("obs", 9, {0.0, 1.0, 2.0, 3.0}, {0.5, 2.5});
    CHECK(st.replicates == 4);
    CHECK(st.mean == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(st.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(st.cdf[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(st.cdf[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(st.se[0] == doctest::Approx(std::sqrt(0.25 * 0.75 / 4.0)).epsilon(1e-12));
}

TEST_CASE("tagged rescaling at zero offset reduces to the flat-window formula") {
    double t = 8.0, dt = 1.0 / 32;
    BrownianGrid g(2024, 3, dt, 256);
    TaggedParams tp;
    tp.theta = {0.0, 0.0};
    tp.u = {0.3, -0.2};
    auto got = rescale_tagged(g, t, tp);
    long long J = 8;
    double c = std::pow(2.0, 5.0 / 3.0) * std::pow(t, 2.0 / 3.0);
    std::vector<long long> labels;
    for (double u : tp.u)
        labels.push_back(static_cast<long long>(std::floor(-t + u * c)) + J);
    long long M = choose_window(t, labels);
    auto xs = evolve_flat(g, M, labels, t);
    for (size_t k = 0; k < labels.size(); ++k) {
        double x = xs[k] + static_cast<double>(J);
        double want = -(x + tp.u[k] * c) / std::cbrt(2.0 * t);
        CHECK(got[k] == doctest::Approx(want).epsilon(1e-12));
    }
    TaggedParams bad = tp;
    bad.theta = {3.0, 0.0};  // 8^0.4 = 2.3
    CHECK_THROWS_AS((void)rescale_tagged(g, t, bad), std::invalid_argument);
    CHECK_THROWS_AS((void)rescale_tagged(g, 8.5, tp), std::invalid_argument);
    BrownianGrid shortg(2024, 3, dt, 128);
    CHECK_THROWS_AS((void)rescale_tagged(shortg, t, tp), std::out_of_range);
}

TEST_CASE("flat rescaling bookkeeping") {
    SystemState st;
    st.label_lo = -8;
    st.x = {4.0, 3.0, 2.0, 1.0, 0.0, -1.0, -2.0, -3.0, -4.0};
    st.time = 1.0;
    double c = std::pow(2.0, 5.0 / 3.0);
    double r = 0.35;  // n = floor(-1 + 0.35 c) = 0
    REQUIRE(static_cast<long long>(std::floor(-1.0 + r * c)) == 0);
    double want = -(st.at(0) + r * c) / std::cbrt(2.0);
    CHECK(rescale_flat(st, r) == doctest::Approx(want).epsilon(1e-14));
    // shifting the state moves the observable linearly
    for (double& v : st.x) v += 0.3;
    CHECK(rescale_flat(st, r) ==
          doctest::Approx(want - 0.3 / std::cbrt(2.0)).epsilon(1e-12));
    st.time = 0.0;
    CHECK_THROWS_AS((void)rescale_flat(st, 0.0), std::invalid_argument);
}
