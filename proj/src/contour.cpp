#include "oscbm/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oscbm/lambert.hpp"

namespace oscbm::contour {

namespace {

constexpr double kPi = 3.14159265358979323846;

using lambert::CutSide;
using lambert::lambert_w;

// u(tau) = -e^{2 pi i tau - 1}(1 - rho), evaluated via the fractional part so
// large tau loses no phase accuracy.
cplx u_of_tau(double rho, double tau) {
    double frac = tau - std::floor(tau);
    double th = 2.0 * kPi * frac;
    double r = (1.0 - rho) / M_E;
    return cplx(-r * std::cos(th), -r * std::sin(th));
}

cplx gamma_any(double rho, double tau) {
    int k = static_cast<int>(std::floor(tau));
    double frac = tau - std::floor(tau);
    if (frac == 0.0) {
        // Junction point: the tau -> k+ limit approaches the cut from below.
        return lambert_w(k, cplx(-(1.0 - rho) / M_E, 0.0), CutSide::Below);
    }
    return lambert_w(k, u_of_tau(rho, tau));
}

struct ClaimAcc {
    std::vector<Claim> claims;
    void add(const std::string& name, bool pass, double margin) {
        claims.push_back({name, pass, margin});
    }
};

}  // namespace

cplx gamma_rho(double rho, double tau) {
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("gamma_rho: rho in [0,1)");
    if (tau >= 0.0 && tau < 1.0)
        throw std::invalid_argument("gamma_rho: tau in [0,1) is not on the contour");
    return gamma_any(rho, tau);
}

cplx gamma_rho_prime(double rho, double tau) {
    cplx g = gamma_rho(rho, tau);
    return 2.0 * kPi * cplx(0.0, 1.0) * (1.0 - 1.0 / (g + 1.0));
}

cplx phi_image(double rho, double s) {
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("phi_image: s in (0,1)");
    return lambert_w(0, u_of_tau(rho, s));
}

double crossing_z0(double rho) {
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("crossing_z0: rho in [0,1)");
    double c = -(1.0 - rho) / M_E;
    auto h = [&](double w) { return w * std::exp(w) - c; };
    // h(-1) = -rho/e <= 0 and h -> -c > 0 as w -> -inf; h monotone on (-inf,-1].
    double lo = -60.0, hi = -1.0;
    if (h(hi) == 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (h(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

cplx f3(cplx z) {
    cplx p = lambert::phi_map(z);
    return 0.5 * (z * z + 2.0 * z - p * p - 2.0 * p);
}

cplx f3_app(cplx z) {
    cplx p = lambert::phi_map(z);
    return (z + 1.0) * (z + 1.0) - (p + 1.0) * (p + 1.0);
}

cplx f2(cplx z, double r1, double r2) {
    cplx p = lambert::phi_map(z);
    return std::pow(2.0, 5.0 / 3.0) *
           (r1 * (z + 1.0 + std::log(-z)) - r2 * (p + 1.0 + std::log(-p)));
}

cplx f11(cplx z, double s1t, double s2t) {
    cplx p = lambert::phi_map(z);
    return std::cbrt(2.0) * (s1t * (z + 1.0) - s2t * (p + 1.0));
}

cplx f12(cplx z, double L) {
    cplx p = lambert::phi_map(z);
    return std::cbrt(2.0) * L * (p - z);
}

RayPath gamma_minus_default() {
    return RayPath{-2.0, {}, std::polar(1.0, 2.0 * kPi / 3.0)};
}

RayPath gamma_minus_straight(double theta) {
    if (theta <= kPi / 2.0 || theta >= 3.0 * kPi / 4.0)
        throw std::invalid_argument("gamma_minus_straight: theta in (pi/2, 3pi/4)");
    return RayPath{-2.0, {}, std::polar(1.0, theta)};
}

RayPath gamma_minus_elbow(double theta) {
    if (theta < kPi / 2.0 || theta >= 3.0 * kPi / 4.0)
        throw std::invalid_argument("gamma_minus_elbow: theta in [pi/2, 3pi/4)");
    RayPath p{-2.0, {{std::polar(1.0, 2.0 * kPi / 3.0), 6.0}}, std::polar(1.0, theta)};
    return p;
}

std::pair<cplx, cplx> path_point(const RayPath& p, double s) {
    if (s < 0.0) throw std::invalid_argument("path_point: s >= 0");
    cplx z(p.x0, 0.0);
    for (const auto& [dir, len] : p.legs) {
        if (s <= len) return {z + s * dir, dir};
        z += len * dir;
        s -= len;
    }
    return {z + s * p.tail_dir, p.tail_dir};
}

Diagnostics validate_contour(double rho, const std::vector<double>& tau_grid) {
    Diagnostics d;
    d.z0 = crossing_z0(rho);
    double c = (1.0 - rho) / M_E;
    d.z0_star = lambert_w(0, cplx(-c, 0.0)).real();
    d.z1_star = lambert_w(0, cplx(c, 0.0)).real();

    std::vector<double> neg, pos;
    for (double t : tau_grid) {
        if (t >= 0.0 && t < 1.0)
            throw std::invalid_argument("validate_contour: grid point in [0,1)");
        if (t == std::floor(t))
            throw std::invalid_argument("validate_contour: grid point at integer tau");
        (t < 0.0 ? neg : pos).push_back(t);
    }
    std::sort(neg.begin(), neg.end());
    std::sort(pos.begin(), pos.end());
    if (neg.size() < 4 || pos.size() < 4)
        throw std::invalid_argument("validate_contour: need >= 4 grid points per half");

    struct Pt {
        double tau;
        cplx g, gp, phi, f3a;
    };
    auto eval_half = [&](const std::vector<double>& taus) {
        std::vector<Pt> v;
        v.reserve(taus.size());
        for (double t : taus) {
            Pt p;
            p.tau = t;
            p.g = gamma_any(rho, t);
            p.gp = 2.0 * kPi * cplx(0.0, 1.0) * (1.0 - 1.0 / (p.g + 1.0));
            p.phi = lambert_w(0, u_of_tau(rho, t));
            p.f3a = (p.g + 1.0) * (p.g + 1.0) - (p.phi + 1.0) * (p.phi + 1.0);
            v.push_back(p);
        }
        return v;
    };
    std::vector<Pt> N = eval_half(neg), P = eval_half(pos);

    ClaimAcc acc;
    double inf = std::numeric_limits<double>::infinity();

    // (1) unique real crossing at z0 <= -1: Im < 0 on the tau < 0 half,
    // Im > 0 on the tau > 1 half, so the only crossing is the junction.
    {
        double m = inf;
        bool ok = d.z0 <= -1.0 + 1e-12;
        for (const Pt& p : N) {
            ok = ok && p.g.imag() < 0.0;
            m = std::min(m, -p.g.imag());
        }
        for (const Pt& p : P) {
            ok = ok && p.g.imag() > 0.0;
            m = std::min(m, p.g.imag());
        }
        acc.add("path.1 unique real crossing", ok, m);
    }
    // (2) z0 = -1 - sqrt(2 rho) + O(rho)
    {
        double err = std::abs(d.z0 - (-1.0 - std::sqrt(2.0 * rho)));
        double tol = std::max(3.0 * rho, 1e-9);
        acc.add("path.2 z0 expansion", err <= tol, tol - err);
    }
    // (3) Re(z) < Re(z0) off the crossing
    {
        double m = inf;
        for (const Pt& p : N) m = std::min(m, d.z0 - p.g.real());
        for (const Pt& p : P) m = std::min(m, d.z0 - p.g.real());
        acc.add("path.3 Re maximal at z0", m > 0.0, m);
    }
    // (4) Re monotone on each half (rising into the crossing, falling after)
    {
        double m = inf;
        for (size_t i = 1; i < N.size(); ++i)
            m = std::min(m, N[i].g.real() - N[i - 1].g.real());
        for (size_t i = 1; i < P.size(); ++i)
            m = std::min(m, P[i - 1].g.real() - P[i].g.real());
        acc.add("path.4 Re monotone per half", m > 0.0, m);
    }
    // (5) |d Re gamma / d tau| <= 3 pi for |tau| >= 2
    {
        double m = inf;
        bool any = false;
        for (const Pt& p : N)
            if (p.tau <= -2.0) {
                any = true;
                m = std::min(m, 3.0 * kPi - std::abs(p.gp.real()));
            }
        for (const Pt& p : P)
            if (p.tau >= 2.0) {
                any = true;
                m = std::min(m, 3.0 * kPi - std::abs(p.gp.real()));
            }
        acc.add("path.5 |dRe/dtau| <= 3pi", any && m >= 0.0, m);
    }
    // (6) asymptotic tangent angle +- pi/2
    {
        auto angdev = [](const Pt& p) {
            return std::abs(std::arg(p.gp) - kPi / 2.0);
        };
        double m = 0.1 - std::max(angdev(N.front()), angdev(P.back()));
        acc.add("path.6 asymptotic angle", m >= 0.0, m);
    }
    // (7) phi-image loop crosses the real axis only at z0* and z1*
    {
        bool ok = d.z0_star >= -1.0 - 1e-12 && d.z1_star > d.z0_star;
        double m = inf;
        for (int j = 1; j < 200; ++j) {
            double s = j / 200.0;
            if (j == 100) continue;
            double im = phi_image(rho, s).imag();
            ok = ok && (s < 0.5 ? im < 0.0 : im > 0.0);
            m = std::min(m, std::abs(im));
        }
        acc.add("path.7 image crossings z0*,z1*", ok, m);
    }
    // (8) z0* = -1 iff rho = 0
    {
        bool ok;
        double m;
        if (rho == 0.0) {
            m = 1e-9 - std::abs(d.z0_star + 1.0);
            ok = m >= 0.0;
        } else {
            m = (d.z0_star + 1.0) - 0.3 * std::sqrt(2.0 * rho);
            ok = m > 0.0;
        }
        acc.add("path.8 z0* = -1 iff rho = 0", ok, m);
    }
    // (9) Re phi(z) > Re phi(z0) away from phi(z0)
    {
        double m = inf;
        for (const Pt& p : N) m = std::min(m, p.phi.real() - d.z0_star);
        for (const Pt& p : P) m = std::min(m, p.phi.real() - d.z0_star);
        acc.add("path.9 Re phi minimal at z0*", m > 0.0, m);
    }
    // (10) Re monotone along the image loop between z0* and z1*
    {
        double m = inf;
        double prev = d.z0_star;
        for (int j = 1; j < 100; ++j) {
            double re = phi_image(rho, j / 200.0).real();
            m = std::min(m, re - prev);
            prev = re;
        }
        m = std::min(m, d.z1_star - prev);
        prev = d.z1_star;
        for (int j = 101; j < 200; ++j) {
            double re = phi_image(rho, j / 200.0).real();
            m = std::min(m, prev - re);
            prev = re;
        }
        m = std::min(m, prev - d.z0_star);
        acc.add("path.10 image Re monotone", m > 0.0, m);
    }
    // Descent claims, with f3 in its (z+1)^2 - (phi+1)^2 form.
    double f30 = std::pow(d.z0 + 1.0, 2) - std::pow(d.z0_star + 1.0, 2);
    // (1) unique real crossing of f3 along the contour
    {
        double m = inf;
        bool okN = true, okP = true;
        double sN = N.front().f3a.imag() < 0 ? -1.0 : 1.0;
        double sP = P.front().f3a.imag() < 0 ? -1.0 : 1.0;
        for (const Pt& p : N) {
            okN = okN && sN * p.f3a.imag() > 0.0;
            m = std::min(m, std::abs(p.f3a.imag()));
        }
        for (const Pt& p : P) {
            okP = okP && sP * p.f3a.imag() > 0.0;
            m = std::min(m, std::abs(p.f3a.imag()));
        }
        acc.add("descent.1 unique real crossing", okN && okP, m);
    }
    // (2) f3(z0) = 0 when rho = 0
    {
        if (rho == 0.0) {
            double m = 1e-9 - std::abs(f30);
            acc.add("descent.2 f3(z0)=0 at rho=0", m >= 0.0, m);
        } else {
            acc.add("descent.2 f3(z0)=0 at rho=0", true, inf);
        }
    }
    // (3) Re f3 maximal at z0
    {
        double m = inf;
        for (const Pt& p : N) m = std::min(m, f30 - p.f3a.real());
        for (const Pt& p : P) m = std::min(m, f30 - p.f3a.real());
        acc.add("descent.3 Re f3 maximal at z0", m > 0.0, m);
    }
    // (4) Re f3 monotone per half
    {
        double m = inf;
        for (size_t i = 1; i < N.size(); ++i)
            m = std::min(m, N[i].f3a.real() - N[i - 1].f3a.real());
        for (size_t i = 1; i < P.size(); ++i)
            m = std::min(m, P[i - 1].f3a.real() - P[i].f3a.real());
        acc.add("descent.4 Re f3 monotone per half", m > 0.0, m);
    }
    // (5) |d Re f3 / d tau| >= 4 pi^2 |tau| for |tau| >= 5, using the exact
    // derivative 4 pi i (gamma(tau) - gamma({tau})).
    {
        double m = inf;
        bool any = false;
        auto chk = [&](const Pt& p) {
            if (std::abs(p.tau) < 5.0) return;
            any = true;
            double dre = 4.0 * kPi * std::abs((p.g - p.phi).imag());
            m = std::min(m, dre - 4.0 * kPi * kPi * std::abs(p.tau));
        };
        for (const Pt& p : N) chk(p);
        for (const Pt& p : P) chk(p);
        acc.add("descent.5 derivative lower bound", any && m >= 0.0, m);
    }

    d.claims = std::move(acc.claims);
    d.all_pass = true;
    for (const Claim& cl : d.claims) d.all_pass = d.all_pass && cl.pass;
    return d;
}

}  // namespace oscbm::contour
