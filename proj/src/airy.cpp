#include "oscbm/airy.hpp"

#include <cmath>
#include <complex>

#include "oscbm/quad.hpp"

namespace oscbm::airy {

namespace {

using cplx = std::complex<double>;

// Ai(0) and -Ai'(0).
const double kC1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
const double kC2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);

double maclaurin(double x) {
    double x3 = x * x * x;
    double f = 1.0, g = x, tf = 1.0, tg = x;
    for (int k = 0; k < 40; ++k) {
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        if (std::abs(tf) + std::abs(tg) < 1e-18) break;
    }
    return kC1 * f - kC2 * g;
}

// x > 0: shift the contour through the saddle z = sqrt(x);
// Ai(x) = e^{-2/3 x^{3/2}} / pi * int_0^inf e^{-sqrt(x) v^2} cos(v^3/3) dv.
double right_tail(double x) {
    double sx = std::sqrt(x);
    double xi = 2.0 / 3.0 * x * sx;
    if (xi > 700.0) return 0.0;
    double q = std::pow(x, -0.25);  // v = q u makes the Gaussian unit-width
    auto f = [&](double u) {
        double v = q * u;
        return std::exp(-u * u) * std::cos(v * v * v / 3.0) * q;
    };
    auto pn = quad::panel_nodes(quad::geometric_edges(0.0, 7.0, 0.25, 1.0), 12);
    return std::exp(-xi) / M_PI * quad::integrate(f, pn);
}

// x < 0: conjugation-symmetric contour 0 -> i sqrt(y) -> i sqrt(y) + inf e^{i pi/4},
// y = -x; Ai(x) = Im(int over upper half of e^{z^3/3 - x z} dz) / pi.
double left_osc(double x) {
    double y = -x;
    double sy = std::sqrt(y);
    auto h = [&](cplx z) { return z * z * z / 3.0 + y * z; };
    cplx J = 0.0;
    {
        // Vertical leg: phase y v - v^3/3 turns at rate <= y.
        auto f = [&](double v) {
            return std::exp(h(cplx(0.0, v))) * cplx(0.0, 1.0);
        };
        auto pn = quad::panel_nodes(
            quad::geometric_edges(0.0, sy, std::min(0.25, 3.0 / y), 1.0), 12);
        J += quad::integrate_c(f, pn);
    }
    {
        cplx dir = std::polar(1.0, M_PI / 4.0);
        cplx top(0.0, sy);
        double q = std::pow(y, -0.25);
        auto f = [&](double u) {
            cplx z = top + dir * (q * u);
            return std::exp(h(z) - h(top)) * dir * q;
        };
        auto pn = quad::panel_nodes(quad::geometric_edges(0.0, 8.0, 0.25, 1.0), 12);
        J += std::exp(h(top)) * quad::integrate_c(f, pn);
    }
    return J.imag() / M_PI;
}

}  // namespace

double airy_ai(double x) {
    if (x >= 108.0) return 0.0;
    if (std::abs(x) <= 1.5) return maclaurin(x);
    return x > 0.0 ? right_tail(x) : left_osc(x);
}

}  // namespace oscbm::airy
