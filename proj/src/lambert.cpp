#include "oscbm/lambert.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oscbm::lambert {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long double kPiL = 3.141592653589793238462643383279503L;

// Coefficients of w = sum mu_j p^j at the branch point.
constexpr std::array<long double, 10> kMu = {
    -1.0L,
    1.0L,
    -1.0L / 3.0L,
    11.0L / 72.0L,
    -43.0L / 540.0L,
    769.0L / 17280.0L,
    -221.0L / 8505.0L,
    680863.0L / 43545600.0L,
    -1963.0L / 204120.0L,
    226287557.0L / 37623398400.0L,
};

cplx series_eval(cplx p, int nterms) {
    cplx s = 0.0;
    for (int j = nterms - 1; j >= 0; --j) s = s * p + static_cast<double>(kMu[j]);
    return s;
}

long double series_eval_ld(long double p) {
    long double s = 0.0L;
    for (int j = 9; j >= 0; --j) s = s * p + kMu[j];
    return s;
}

// Halley iteration on f(w) = w e^w - z.  Returns NaN on non-convergence.
cplx halley(cplx z, cplx w) {
    for (int it = 0; it < 60; ++it) {
        cplx ew = std::exp(w);
        cplx f = w * ew - z;
        if (f == cplx(0.0)) return w;
        cplx fp = ew * (w + 1.0);
        cplx corr = fp - f * (w + 2.0) / (2.0 * (w + 1.0));
        if (corr == cplx(0.0)) return w;
        cplx dw = f / corr;
        w -= dw;
        if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) {
            // One polishing step to shake off the stopping-test residue.
            ew = std::exp(w);
            f = w * ew - z;
            fp = ew * (w + 1.0);
            corr = fp - f * (w + 2.0) / (2.0 * (w + 1.0));
            if (corr != cplx(0.0)) w -= f / corr;
            return w;
        }
    }
    return cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
}

bool root_ok(cplx w, cplx z) {
    if (std::isnan(w.real()) || std::isnan(w.imag())) return false;
    double scale = std::max({1.0, std::abs(z), std::abs(w) * std::exp(w.real())});
    return std::abs(residual(w, z)) <= 1e-9 * scale;
}

// Re w on the region boundary at height b: the curve a = -b cot(b).
double cut_curve(double b) { return -b * std::cos(b) / std::sin(b); }

// Accept an on-cut root lying on the curve piece with Im w in (blo, bhi).
bool on_curve_in(cplx w, double blo, double bhi) {
    double a = w.real(), b = w.imag();
    if (!(b > blo && b < bhi)) return false;
    return std::abs(a - cut_curve(b)) <= 1e-7 * (1.0 + std::abs(a));
}

std::vector<cplx> candidate_seeds(int k, cplx z, bool treat_arg_as_pi) {
    std::vector<cplx> seeds;
    cplx p = std::sqrt(2.0 * (M_E * z + 1.0));
    if (std::abs(p) <= 0.5 && std::abs(k) <= 1) {
        if (k == 0) {
            seeds.push_back(series_eval(p, 10));
        } else {
            seeds.push_back(series_eval(-p, 10));
            seeds.push_back(series_eval(p, 10));
        }
    }
    if (k == 0 && std::abs(z) <= 0.3)
        seeds.push_back(z - z * z + 1.5 * z * z * z);
    double argz = treat_arg_as_pi ? kPi : std::arg(z);
    cplx L(std::log(std::abs(z)), argz + 2.0 * kPi * k);
    if (std::abs(L) > 0.5) seeds.push_back(L - std::log(L));
    if (k == 0) seeds.push_back(cplx(0.5, 0.0));
    // Interior fallback: a point well inside the branch region.
    if (k != 0) {
        double bmid = (k > 0) ? (2.0 * k - 0.5) * kPi : (2.0 * k + 0.5) * kPi;
        seeds.push_back(cplx(std::max(0.0, std::log(std::abs(z))), bmid));
    }
    return seeds;
}

cplx solve_oncut_above(int k, double x) {
    // z = x + i0, x on the cut of branch k.  The value lies on the boundary
    // between branches k and k+1; for k = -1 with x in (-1/e, 0) it is the
    // classical real branch w <= -1.
    if (k == -1 && x > -1.0 / M_E) {
        double pr = std::sqrt(2.0 * (M_E * x + 1.0));
        cplx w0 = (pr <= 0.5) ? series_eval(cplx(-pr, 0.0), 10)
                              : cplx(std::log(-x) - std::log(-std::log(-x)), 0.0);
        cplx w = halley(cplx(x, 0.0), w0);
        if (root_ok(w, cplx(x, 0.0)) && w.real() <= -1.0 + 1e-12)
            return cplx(w.real(), 0.0);
        throw std::runtime_error("lambert_w: real lower-branch solve failed");
    }
    double blo, bhi;
    if (k >= 0) {
        blo = 2.0 * k * kPi;
        bhi = (2.0 * k + 1.0) * kPi;
    } else {
        blo = (2.0 * k + 1.0) * kPi;
        bhi = (2.0 * k + 2.0) * kPi;
    }
    cplx z(x, 0.0);
    for (cplx s : candidate_seeds(k, z, /*treat_arg_as_pi=*/true)) {
        // Nudge the seed into the target band so Halley tracks the right root.
        if (!(s.imag() > blo && s.imag() < bhi))
            s = cplx(s.real(), 0.5 * (blo + bhi));
        cplx w = halley(z, s);
        if (root_ok(w, z) && on_curve_in(w, blo, bhi)) return w;
    }
    // Bisection along the curve: |w e^w| is monotone in b on each piece.
    double lo = blo + 1e-9, hi = bhi - 1e-9;
    auto absval = [&](double b) {
        double a = cut_curve(b);
        return std::hypot(a, b) * std::exp(a);
    };
    double target = std::abs(x);
    if ((absval(lo) - target) * (absval(hi) - target) <= 0.0) {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((absval(lo) - target) * (absval(mid) - target) <= 0.0)
                hi = mid;
            else
                lo = mid;
        }
        cplx w(cut_curve(0.5 * (lo + hi)), 0.5 * (lo + hi));
        w = halley(z, w);
        if (root_ok(w, z) && on_curve_in(w, blo, bhi)) return w;
    }
    throw std::runtime_error("lambert_w: on-cut solve failed");
}

bool on_cut(int k, cplx z) {
    if (z.imag() != 0.0) return false;
    double x = z.real();
    if (k == 0) return x < -1.0 / M_E;
    return x < 0.0;
}

}  // namespace

std::pair<double, double> branch_strip(int k) {
    if (k == 0) return {-kPi, kPi};
    if (k > 0) return {(2.0 * k - 2.0) * kPi, (2.0 * k + 1.0) * kPi};
    return {(2.0 * k - 1.0) * kPi, (2.0 * k + 2.0) * kPi};
}

bool branch_member(int k, cplx w) {
    double a = w.real(), b = w.imag();
    if (k == 0) {
        if (std::abs(b) >= kPi) return false;
        if (b == 0.0) return a >= -1.0;
        return a > cut_curve(b);
    }
    if (k < 0) return branch_member(-k, std::conj(w));
    if (b <= (2.0 * k - 2.0) * kPi || b >= (2.0 * k + 1.0) * kPi) return false;
    if (b >= (2.0 * k - 1.0) * kPi && b <= 2.0 * k * kPi) return true;
    double curve = cut_curve(b);
    if (b < (2.0 * k - 1.0) * kPi) return a < curve;  // band shared with k-1
    return a > curve;                                 // band shared with k+1
}

cplx branch_point_series(cplx p, int nterms) {
    if (nterms < 1 || nterms > 10)
        throw std::invalid_argument("branch_point_series: nterms in [1,10]");
    return series_eval(p, nterms);
}

long double w0_real_ld(long double x) {
    long double em1 = std::exp(-1.0L);
    if (x < -em1) throw std::domain_error("w0_real_ld: x < -1/e");
    long double q = 2.0L * (std::exp(1.0L) * x + 1.0L);
    long double p = q > 0.0L ? std::sqrt(q) : 0.0L;
    if (p <= 0.03L) return series_eval_ld(p);
    long double w = (p <= 0.5L) ? series_eval_ld(p)
                                : (x > 3.0L ? std::log(x) - std::log(std::log(x))
                                            : std::log(1.0L + x));
    for (int it = 0; it < 80; ++it) {
        long double ew = std::exp(w);
        long double f = w * ew - x;
        long double fp = ew * (w + 1.0L);
        long double corr = fp - f * (w + 2.0L) / (2.0L * (w + 1.0L));
        long double dw = f / corr;
        w -= dw;
        if (std::fabs(dw) <= 1e-18L * (1.0L + std::fabs(w))) break;
    }
    return w;
}

cplx lambert_w(int k, cplx z, CutSide side) {
    if (z == cplx(0.0)) {
        if (k == 0) return 0.0;
        throw std::domain_error("lambert_w: branch k != 0 diverges at z = 0");
    }
    if (z.imag() == 0.0 && z.real() == -1.0 / M_E) {
        // Branch point: branches 0 and -1 (above) / +1 (below) meet at -1.
        if (k == 0) return cplx(-1.0, 0.0);
        if (k == -1 && side == CutSide::Above) return cplx(-1.0, 0.0);
        if (k == 1 && side == CutSide::Below) return cplx(-1.0, 0.0);
    }
    if (on_cut(k, z)) {
        if (side == CutSide::Below)
            return std::conj(lambert_w(-k, z, CutSide::Above));
        return solve_oncut_above(k, z.real());
    }
    for (const cplx& s : candidate_seeds(k, z, /*treat_arg_as_pi=*/false)) {
        cplx w = halley(z, s);
        if (root_ok(w, z) && branch_member(k, w)) return w;
    }
    // Seed scan across the branch band as a last resort.
    auto [lo, hi] = branch_strip(k);
    for (int j = 1; j <= 12; ++j) {
        double b = lo + (hi - lo) * j / 13.0;
        cplx w = halley(z, cplx(std::log(std::abs(z)), b));
        if (root_ok(w, z) && branch_member(k, w)) return w;
    }
    throw std::runtime_error("lambert_w: no converged root in branch region");
}

cplx phi_map(cplx z) { return lambert_w(0, z * std::exp(z)); }

cplx residual(cplx w, cplx z) { return w * std::exp(w) - z; }

}  // namespace oscbm::lambert
