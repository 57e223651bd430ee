#include <cmath>
#include <vector>

#include "doctest.h"
#include "oscbm/airy.hpp"

using oscbm::airy::airy_ai;

TEST_CASE("airy values against a frozen high-precision table") {
    // values from the defining ODE integrated in extended precision,
    // cross-checked against the series/asymptotics crossover
    struct Ref {
        double x, v;
    };
    const std::vector<Ref> table = {
        {-10.5, -3.1192603505105071e-01}, {-5.0, 3.5076100902411422e-01},
        {-1.0, 5.3556088329235219e-01},   {0.0, 3.5502805388781722e-01},
        {0.5, 2.3169360648083343e-01},    {1.0, 1.3529241631288147e-01},
        {2.0, 3.4924130423274358e-02},    {5.0, 1.0834442813607433e-04},
        {10.0, 1.1047532552898654e-10},   {20.0, 1.6916728686705440e-27},
        {50.0, 4.5849417240747882e-104},  {100.0, 2.6344821520883423e-291},
    };
    for (const auto& r : table) {
        CHECK(std::abs(airy_ai(r.x) - r.v) <= 1e-12 * std::abs(r.v));
    }
}

TEST_CASE("airy satisfies y'' = x y") {
    // five-point second-difference stencil, h = 0.01
    double h = 0.01;
    for (double x : {-8.0, -3.0, 0.0, 2.0, 6.0}) {
        double ypp = (-airy_ai(x - 2 * h) + 16 * airy_ai(x - h) - 30 * airy_ai(x) +
                      16 * airy_ai(x + h) - airy_ai(x + 2 * h)) /
                     (12 * h * h);
        CHECK(std::abs(ypp - x * airy_ai(x)) <= 1e-6 * (1.0 + std::abs(x * airy_ai(x))));
    }
}

TEST_CASE("airy positive and decreasing on the right half line") {
    double prev = airy_ai(0.0);
    for (double x = 0.25; x <= 12.0; x += 0.25) {
        double v = airy_ai(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // oscillates on the left: a known zero near -2.33810741
    CHECK(airy_ai(-2.33810741045976) * airy_ai(-2.4) <= 0.0);
    CHECK(std::abs(airy_ai(-2.33810741045976)) < 1e-10);
}

TEST_CASE("deep decay underflows cleanly") {
    CHECK(airy_ai(102.0) > 0.0);
    CHECK(airy_ai(150.0) == 0.0);
}
