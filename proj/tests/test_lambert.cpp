#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oscbm/lambert.hpp"

using namespace oscbm::lambert;
using cplx = std::complex<double>;

namespace {

// Sample points covering each branch's domain away from the cut.
std::vector<cplx> probe_points() {
    std::vector<cplx> zs;
    for (double r : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
        for (double th : {-2.8, -1.9, -0.7, 0.0, 0.4, 1.3, 2.5}) {
            zs.push_back(std::polar(r, th));
        }
    }
    return zs;
}

}  // namespace

TEST_CASE("round trip w e^w = z on every branch") {
    for (int k = -3; k <= 3; ++k) {
        for (cplx z : probe_points()) {
            if (k == 0 && std::abs(z) < 1e-12) continue;
            cplx w = lambert_w(k, z);
            CHECK(std::abs(residual(w, z)) <= 1e-12 * (1.0 + std::abs(z)));
            CHECK(branch_member(k, w));
            auto [lo, hi] = branch_strip(k);
            CHECK(w.imag() >= lo - 1e-12);
            CHECK(w.imag() <= hi + 1e-12);
        }
    }
}

TEST_CASE("conjugation symmetry between opposite branches") {
    for (int k = -3; k <= 3; ++k) {
        for (cplx z : probe_points()) {
            if (std::abs(z.imag()) < 1e-15) continue;
            cplx a = lambert_w(k, std::conj(z));
            cplx b = std::conj(lambert_w(-k, z));
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("branch point series matches the function to high order") {
    // w(p) = -1 + p - p^2/3 + ...; z = (p^2/2 - 1)/e.  At 10 terms the
    // truncation defect sits below double rounding for |p| = 0.01.
    for (double ang : {0.0, 1.0, 2.5, -2.0}) {
        cplx p = std::polar(0.01, ang);
        cplx z = (0.5 * p * p - 1.0) * std::exp(-1.0);
        cplx w = branch_point_series(p, 10);
        CHECK(std::abs(residual(w, z)) < 1e-15);
    }
}

TEST_CASE("series truncation error scales at its formal order") {
    // drop the series at 4 terms; the defect against the extended-precision
    // real root must shrink like p^4 (fitted slope >= 3.5 per decade).
    // p stays >= 1e-3 so the defect sits well above double rounding.
    std::vector<double> ps = {1e-1, 1e-2, 1e-3};
    std::vector<double> errs;
    for (double p : ps) {
        long double x = (0.5L * static_cast<long double>(p) * p - 1.0L) *
                        std::exp(-1.0L);
        long double exact = w0_real_ld(x);
        cplx w4 = branch_point_series(cplx(p, 0.0), 4);
        errs.push_back(std::abs(static_cast<double>(
            w4.real() - static_cast<double>(exact))));
    }
    double slope = std::log(errs[0] / errs[2]) / std::log(ps[0] / ps[2]);
    CHECK(slope >= 3.5);
    CHECK(slope <= 4.5);
}

TEST_CASE("cut-side limits and monodromy") {
    // all branches cut along (-inf, -1/e]; crossing downward through the cut
    // continues onto the next branch: L_k(x + i0) = L_{k+1}(x - i0)
    for (double x : {-0.5, -2.0, -10.0}) {
        if (x > -std::exp(-1.0)) continue;
        for (int k = -2; k <= 1; ++k) {
            cplx above = lambert_w(k, cplx(x, 0.0), CutSide::Above);
            cplx below_next = lambert_w(k + 1, cplx(x, 0.0), CutSide::Below);
            CHECK(std::abs(above - below_next) <= 1e-12 * (1.0 + std::abs(above)));
        }
    }
    // the on-cut value is the limit from the matching half-plane
    for (int k : {-1, 0, 1}) {
        cplx on = lambert_w(k, cplx(-2.0, 0.0), CutSide::Above);
        cplx near = lambert_w(k, cplx(-2.0, 1e-9), CutSide::Above);
        CHECK(std::abs(on - near) < 1e-6);
        cplx on_b = lambert_w(k, cplx(-2.0, 0.0), CutSide::Below);
        cplx near_b = lambert_w(k, cplx(-2.0, -1e-9), CutSide::Above);
        CHECK(std::abs(on_b - near_b) < 1e-6);
    }
}

TEST_CASE("secondary real branch on (-1/e, 0)") {
    // k = -1 from above owns the real root w <= -1 there
    for (double x : {-0.3, -0.2, -0.05, -1e-3}) {
        cplx w = lambert_w(-1, cplx(x, 0.0), CutSide::Above);
        CHECK(std::abs(w.imag()) < 1e-12);
        CHECK(w.real() <= -1.0 + 1e-12);
        CHECK(std::abs(residual(w, cplx(x, 0.0))) < 1e-13);
    }
    // principal branch real there as well, w >= -1
    cplx w0 = lambert_w(0, cplx(-0.2, 0.0));
    CHECK(std::abs(w0.imag()) < 1e-14);
    CHECK(w0.real() >= -1.0);
}

TEST_CASE("branch point value") {
    double bp = -std::exp(-1.0);
    CHECK(std::abs(lambert_w(0, cplx(bp, 0.0)) - cplx(-1.0, 0.0)) < 1e-10);
    CHECK(std::abs(lambert_w(-1, cplx(bp, 0.0), CutSide::Above) - cplx(-1.0, 0.0)) <
          1e-10);
    CHECK(std::abs(lambert_w(1, cplx(bp, 0.0), CutSide::Below) - cplx(-1.0, 0.0)) <
          1e-10);
}

TEST_CASE("known real values on the principal branch") {
    // W_0(1) = Omega constant; W_0(e) = 1
    CHECK(std::abs(lambert_w(0, cplx(1.0, 0.0)).real() - 0.5671432904097838) < 1e-14);
    CHECK(std::abs(lambert_w(0, cplx(std::exp(1.0), 0.0)).real() - 1.0) < 1e-14);
    CHECK(std::abs(static_cast<double>(w0_real_ld(1.0L)) - 0.5671432904097838) <
          1e-15);
}

TEST_CASE("phi map: companion root of z e^z") {
    // identity on the principal region
    CHECK(std::abs(phi_map(cplx(0.5, 0.0)) - cplx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(phi_map(cplx(-0.3, 0.2)) - cplx(-0.3, 0.2)) < 1e-13);
    // companion value, frozen from an extended-precision bisection of
    // phi e^phi = -2 e^{-2} on (-1, 0)
    CHECK(std::abs(phi_map(cplx(-2.0, 0.0)).real() - (-0.40637573995995990768)) <
          1e-13);
    CHECK(std::abs(phi_map(cplx(-2.0, 0.0)).imag()) < 1e-14);

    // local expansion at the double point, approached from the non-principal
    // side (left of the boundary parabola Re h = (Im h)^2/3):
    // phi(-1+h) = -1 - h - (2/3)h^2 + O(h^3)
    for (double ang : {2.2, M_PI, -2.6}) {
        cplx h = std::polar(1e-2, ang);
        cplx ref = -1.0 - h - (2.0 / 3.0) * h * h;
        CHECK(std::abs(phi_map(-1.0 + h) - ref) < 2.0 * std::pow(std::abs(h), 3));
    }

    // phi(z) e^{phi(z)} = z e^z always
    for (cplx z : {cplx(-2.0, 0.5), cplx(-3.0, -1.0), cplx(-1.2, 0.1)}) {
        cplx p = phi_map(z);
        CHECK(std::abs(p * std::exp(p) - z * std::exp(z)) < 1e-12);
    }
}
