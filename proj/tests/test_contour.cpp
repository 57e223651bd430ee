#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oscbm/contour.hpp"
#include "oscbm/lambert.hpp"

using namespace oscbm;
using cplx = std::complex<double>;

namespace {

std::vector<double> test_grid() {
    std::vector<double> g;
    for (double v : {1.01, 1.2, 1.5, 1.9, 2.3, 2.75, 3.4, 4.5, 6.25, 8.5, 12.5, 19.99}) {
        g.push_back(v);
        g.push_back(1.0 - v);
    }
    return g;
}

}  // namespace

TEST_CASE("contour points satisfy the defining equation") {
    for (double rho : {0.0, 0.1, 0.5}) {
        for (double tau : {1.01, 1.5, 2.3, 5.8, -0.4, -3.2}) {
            cplx z = contour::gamma_rho(rho, tau);
            cplx target = -std::exp(cplx(0.0, 2.0 * M_PI * tau)) *
                          std::exp(-1.0) * (1.0 - rho);
            CHECK(std::abs(z * std::exp(z) - target) < 1e-11);
        }
    }
}

TEST_CASE("contour tangent matches finite differences") {
    double h = 1e-6;
    for (double rho : {0.0, 0.3}) {
        for (double tau : {1.47, -0.4, -2.2, 5.8}) {
            cplx d = contour::gamma_rho_prime(rho, tau);
            cplx fd = (contour::gamma_rho(rho, tau + h) -
                       contour::gamma_rho(rho, tau - h)) /
                      (2.0 * h);
            CHECK(std::abs(d - fd) <= 1e-6 * (1.0 + std::abs(d)));
        }
    }
}

TEST_CASE("image of the contour under phi is the branch-0 loop") {
    for (double rho : {0.0, 0.2}) {
        for (double tau : {1.3, 2.75, -1.6}) {
            cplx z = contour::gamma_rho(rho, tau);
            double frac = tau - std::floor(tau);
            cplx img = contour::phi_image(rho, frac);
            CHECK(std::abs(lambert::phi_map(z) - img) < 1e-10);
        }
    }
}

TEST_CASE("real crossing values") {
    // frozen from extended-precision root finds of w e^w = -e^{-1}(1 - rho)
    CHECK(std::abs(contour::crossing_z0(1e-4) - (-1.01420923762178)) < 1e-11);
    CHECK(std::abs(contour::crossing_z0(0.1) - (-1.53181160838961)) < 1e-11);
    CHECK(std::abs(contour::crossing_z0(0.5) - (-2.67834699001666)) < 1e-11);
    CHECK(contour::crossing_z0(0.0) == -1.0);
    // sqrt expansion for small rho
    double rho = 1e-4;
    CHECK(std::abs(contour::crossing_z0(rho) - (-1.0 - std::sqrt(2.0 * rho))) <
          10.0 * rho);
}

TEST_CASE("cubic exponent piece") {
    // f3(-1+h) = -(2/3) h^3 + O(h^4) from the non-principal side (f3 vanishes
    // identically on the principal region where phi is the identity)
    for (double ang : {2.2, M_PI, -2.6}) {
        cplx h = std::polar(1e-2, ang);
        cplx v = contour::f3(-1.0 + h);
        CHECK(std::abs(v + (2.0 / 3.0) * h * h * h) < 3.0 * std::pow(std::abs(h), 4));
    }
    // f3_app is exactly twice f3
    for (cplx z : {cplx(-2.0, 1.0), cplx(-1.5, -0.3), cplx(-4.0, 2.0)}) {
        CHECK(std::abs(contour::f3_app(z) - 2.0 * contour::f3(z)) <
              1e-12 * (1.0 + std::abs(contour::f3(z))));
    }
}

TEST_CASE("derivative of f3_app along the contour") {
    // d/dtau f3_app(gamma(tau)) = 4 pi i (gamma(tau) - gamma_0({tau})),
    // gamma_0 being the branch-0 loop the contour maps onto under phi
    double h = 1e-6;
    for (double tau : {1.3, 2.6, -2.2}) {
        cplx fd = (contour::f3_app(contour::gamma_rho(0.0, tau + h)) -
                   contour::f3_app(contour::gamma_rho(0.0, tau - h))) /
                  (2.0 * h);
        double frac = tau - std::floor(tau);
        cplx an = cplx(0.0, 4.0 * M_PI) *
                  (contour::gamma_rho(0.0, tau) - contour::phi_image(0.0, frac));
        CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(an)));
    }
}

TEST_CASE("steep-descent diagnostics pass on the standard grid") {
    for (double rho : {0.0, 0.1, 0.5}) {
        auto d = contour::validate_contour(rho, test_grid());
        CHECK(d.all_pass);
        for (const auto& c : d.claims) {
            INFO("claim ", c.name, " margin ", c.margin);
            CHECK(c.pass);
        }
        CHECK(d.z0 <= -1.0 + 1e-12);
        CHECK(d.z0_star >= -1.0 - 1e-12);  // companion crossing right of -1
        CHECK(d.z1_star > 0.0);            // second image crossing positive
    }
    // z1* at rho = 0 is the positive root of x e^x = e^{-1}
    auto d0 = contour::validate_contour(0.0, test_grid());
    CHECK(std::abs(d0.z1_star - 0.278464542761074) < 1e-9);
    CHECK(std::abs(d0.z0_star - (-1.0)) < 1e-12);
}

TEST_CASE("ray paths stay admissible for the principal branch") {
    for (const auto& p : {contour::gamma_minus_default(),
                          contour::gamma_minus_straight(2.3),
                          contour::gamma_minus_elbow(2.3)}) {
        CHECK(p.x0 < -1.0);
        CHECK(p.tail_dir.imag() > 0.0);
        CHECK(std::abs(std::abs(p.tail_dir) - 1.0) < 1e-14);
        // the image z e^z starts inside the branch-point disc and must never
        // cross the cut (-inf, -1/e]; a crossing would show as a jump in the
        // companion root, so track its continuity along the path
        cplx prev_phi = lambert::phi_map(cplx(p.x0, 0.0));
        for (double s = 0.0125; s <= 30.0; s += 0.0125) {
            auto [z, tan] = contour::path_point(p, s);
            CHECK(std::abs(std::abs(tan) - 1.0) < 1e-12);
            cplx ph = lambert::phi_map(z);
            CHECK(std::abs(ph - prev_phi) < 0.2);
            prev_phi = ph;
        }
        // arclength parametrization: |dz/ds| = 1 by finite differences
        auto [za, ta] = contour::path_point(p, 1.0);
        auto [zb, tb] = contour::path_point(p, 1.0 + 1e-6);
        (void)ta;
        (void)tb;
        CHECK(std::abs(std::abs(zb - za) / 1e-6 - 1.0) < 1e-4);
    }
    // the default 2pi/3 ray additionally keeps |z e^z| below the branch-point
    // radius everywhere, and the elbow's leading leg stays well inside it
    for (double s = 0.0; s <= 30.0; s += 0.05) {
        auto [z, tan] = contour::path_point(contour::gamma_minus_default(), s);
        (void)tan;
        CHECK(std::abs(z * std::exp(z)) < std::exp(-1.0) - 1e-9);
    }
    double prev_mag = 1.0;
    for (double s = 0.0; s <= 6.0; s += 0.05) {
        auto [z, tan] = contour::path_point(contour::gamma_minus_elbow(2.3), s);
        (void)tan;
        double mag = std::abs(z * std::exp(z));
        CHECK(mag < prev_mag);  // decays along the leading leg
        prev_mag = mag;
    }
    CHECK(prev_mag < 0.06);  // safely inside the disc when the path turns
}
