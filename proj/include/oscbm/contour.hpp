#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace oscbm::contour {

using cplx = std::complex<double>;

// --- Steep-descent contour Gamma^rho ---------------------------------------
// gamma(tau) = L_{floor(tau)}(-e^{2 pi i tau - 1}(1 - rho)), tau outside [0,1).
// Continuous across integer tau; crosses the real axis once, at z0 <= -1.
cplx gamma_rho(double rho, double tau);
cplx gamma_rho_prime(double rho, double tau);  // = 2 pi i (1 - 1/(gamma+1))

// Branch-0 loop gamma_0(s), s in (0,1): the image of every piece of
// Gamma^rho under phi, since phi(gamma(tau)) = gamma_0({tau}).
cplx phi_image(double rho, double s);

// Real crossing z0(rho): the root of w e^w = -e^{-1}(1-rho) on (-inf, -1].
double crossing_z0(double rho);

// --- Exponent pieces of the scaled kernel -----------------------------------
// f3 in its 1/2(z^2+2z-phi^2-2phi) normalization; f3_app = (z+1)^2-(phi+1)^2
// is twice f3 and is the form whose tau-derivative along Gamma^rho is
// 4 pi i (gamma(tau) - gamma({tau})).
cplx f3(cplx z);
cplx f3_app(cplx z);
cplx f2(cplx z, double r1, double r2);
cplx f11(cplx z, double s1t, double s2t);
cplx f12(cplx z, double L);

// --- Gamma_- paths -----------------------------------------------------------
// Upper half of a conjugation-symmetric path: starts at x0 on the real axis,
// follows finite straight legs, then an infinite ray in direction tail_dir.
struct RayPath {
    double x0;
    std::vector<std::pair<cplx, double>> legs;  // (unit direction, length)
    cplx tail_dir;                              // unit, Im > 0
};

// Default: rays from -2 at angles +-2pi/3.
RayPath gamma_minus_default();
// Straight rays from -2 at angles +-theta (admissible for theta near 3pi/4).
RayPath gamma_minus_straight(double theta);
// Follow the 2pi/3 ray for 6 units, then turn to angle theta.  The leading
// leg keeps |z e^z| < 1/e for every theta in [pi/2, 3pi/4), so phi stays on
// the principal branch along the whole path.
RayPath gamma_minus_elbow(double theta);

// Point and unit tangent at arclength s >= 0 from x0 along the upper half.
std::pair<cplx, cplx> path_point(const RayPath& p, double s);

// --- Contour validation ------------------------------------------------------
struct Claim {
    std::string name;
    bool pass;
    double margin;  // distance to violation; > 0 when pass
};

struct Diagnostics {
    double z0;
    double z0_star;  // phi(z0)
    double z1_star;  // second real crossing of the phi-image loop
    std::vector<Claim> claims;
    bool all_pass;
};

// Checks, on the given grid (tau outside [0,1), avoiding integers):
// path claims 1-10 (unique crossing, z0 expansion, Re maximal at z0,
// monotone halves, |d Re gamma/d tau| <= 3pi for |tau|>=2, asymptotic angle
// +-pi/2, phi-image crossings z0*/z1*, Re phi minimal at z0*, monotone image)
// and descent claims 1-5 for f3 (unique real crossing, value 0 at rho=0,
// Re maximal at z0, monotone halves, |d Re f3/d tau| >= 4 pi^2 |tau| for
// |tau| >= 5).
Diagnostics validate_contour(double rho, const std::vector<double>& tau_grid);

}  // namespace oscbm::contour
