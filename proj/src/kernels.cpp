#include "oscbm/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "oscbm/airy.hpp"
#include "oscbm/lambert.hpp"
#include "oscbm/quad.hpp"

namespace oscbm::kernels {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

cplx ipow(cplx b, long long e) {
    if (e < 0) return 1.0 / ipow(b, -e);
    cplx r = 1.0;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Probabilists' Hermite polynomial.
double hermite_he(int j, double x) {
    double h0 = 1.0, h1 = x;
    if (j == 0) return h0;
    for (int m = 1; m < j; ++m) {
        double h2 = x * h1 - m * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

double gauss_f0(double x, double t) {
    return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

// int_z^inf erfc = e^{-z^2}/sqrt(pi) - z erfc(z).
double i1erfc(double z) {
    return std::exp(-z * z) / std::sqrt(kPi) - z * std::erfc(z);
}

// Panel edges whose widths follow a geometric ramp but never exceed the
// local oscillation scale 2.5/(1 + rate0 + rate1 * s); pure geometric growth
// would eventually span many radians of e^{i (rate0 + rate1 s) s} per panel.
std::vector<double> capped_edges(double b, double h0, double growth, double rate0,
                                 double rate1 = 0.0) {
    std::vector<double> edges{0.0};
    double h = h0;
    while (edges.back() < b) {
        double s = edges.back();
        double cap = 2.5 / (1.0 + rate0 + rate1 * s);
        edges.push_back(std::min(b, s + std::min(h, cap)));
        h *= growth;
    }
    return edges;
}

quad::PanelNodes line_nodes(double y_max, double h0, double growth, double rate = 0.0,
                            int order = 12) {
    return quad::panel_nodes(capped_edges(y_max, h0, growth, rate), order);
}

// Force the given arclengths (path corners) onto the panel edge list, so no
// Gauss panel straddles a kink of the integrand.
void split_edges_at(std::vector<double>& edges, const std::vector<double>& breaks) {
    for (double b : breaks) {
        if (b <= edges.front() || b >= edges.back()) continue;
        auto it = std::lower_bound(edges.begin(), edges.end(), b);
        if (std::abs(*it - b) > 1e-12) edges.insert(it, b);
    }
}

// Cumulative leg lengths of a ray path (its corners).
std::vector<double> path_corners(const contour::RayPath& path) {
    std::vector<double> c;
    double s = 0.0;
    for (const auto& leg : path.legs) {
        s += leg.second;
        c.push_back(s);
    }
    return c;
}

double fk_quadrature(int k, double x, double t, double delta) {
    double ymax = std::sqrt(delta * delta + (92.0 + 2.0 * std::abs(k)) / t) * 1.2 +
                  3.0 / std::sqrt(t);
    auto pn = line_nodes(ymax, std::min(0.3, 3.0 / (1.0 + std::abs(x))), 1.25,
                         std::abs(x) + t * delta);
    auto f = [&](double y) {
        cplx z(delta, y);
        return std::exp(t * z * z * 0.5 - z * x) * ipow(z, -static_cast<long long>(k));
    };
    return quad::integrate_c(f, pn).real() / kPi;
}

}  // namespace

KernelPoint to_kernel_point(const ScaledPoint& q) {
    double c = std::pow(2.0, 5.0 / 3.0) * std::pow(q.t, 2.0 / 3.0);
    KernelPoint p;
    p.n = static_cast<long long>(std::floor(-q.t + c * q.r));
    p.x = -c * q.r - std::cbrt(2.0 * q.t) * q.s;
    return p;
}

double eval_Fk(int k, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("eval_Fk: t > 0 required");
    if (k <= 0) {
        int m = -k;
        return gauss_f0(x, t) * std::pow(t, -0.5 * m) * hermite_he(m, x / std::sqrt(t));
    }
    if (k == 1) return 0.5 * std::erfc(x / std::sqrt(2.0 * t));
    if (k == 2) return 0.5 * std::sqrt(2.0 * t) * i1erfc(x / std::sqrt(2.0 * t));
    double delta = std::min(std::max(x / t, 0.3), 4.0);
    return fk_quadrature(k, x, t, delta);
}

double eval_Fk_contour(int k, double x, double t, double delta) {
    if (!(t > 0.0)) throw std::domain_error("eval_Fk_contour: t > 0 required");
    if (k >= 1 && !(delta > 0.0))
        throw std::invalid_argument("eval_Fk_contour: k >= 1 needs delta > 0");
    return fk_quadrature(k, x, t, delta);
}

double transition_density(const std::vector<double>& x, const std::vector<double>& x0,
                          double t) {
    size_t n = x.size();
    if (n == 0 || x0.size() != n) throw std::invalid_argument("transition_density: size");
    if (n > 12) throw std::invalid_argument("transition_density: N <= 12");
    if (!(t > 0.0)) throw std::domain_error("transition_density: t > 0");
    Eigen::MatrixXd m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            m(i, j) = eval_Fk(static_cast<int>(i) - static_cast<int>(j),
                              x[n - 1 - i] - x0[n - 1 - j], t);
    return m.partialPivLu().determinant();
}

double eval_psi(int n, int k, double x, double t, double delta) {
    if (k < 1 || k > n) throw std::invalid_argument("eval_psi: k in [1,n]");
    if (!(t > 0.0)) throw std::domain_error("eval_psi: t > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("eval_psi: delta > 0");
    int j = n - k;
    double chi = x + k;
    double y0 = std::sqrt(delta * delta + 92.0 / t);
    double ymax =
        std::sqrt(delta * delta + (92.0 + 2.0 * j * std::log1p(y0)) / t) * 1.15 +
        3.0 / std::sqrt(t);
    auto pn = line_nodes(ymax, std::min(0.3, 3.0 / (1.0 + std::abs(chi))), 1.25,
                         std::abs(chi) + t * delta);
    auto f = [&](double y) {
        cplx z(-delta, y);
        return ipow(-z, j) * std::exp(t * z * z * 0.5 - z * chi);
    };
    return quad::integrate_c(f, pn).real() / kPi;
}

double psi_closed(int n, int k, double x, double t) {
    if (k < 1) throw std::invalid_argument("psi_closed: k >= 1");
    if (!(t > 0.0)) throw std::domain_error("psi_closed: t > 0");
    double chi = x + k;
    if (k <= n) {
        int j = n - k;
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        return gauss_f0(chi, t) * sign * std::pow(t, -0.5 * j) *
               hermite_he(j, chi / std::sqrt(t));
    }
    // Pole at the origin: with the contour left of 0 the value is an
    // iterated Gaussian tail in the reflected argument.
    return eval_Fk(k - n, -chi, t);
}

double eval_biphi(int n, int l, double x, double t) {
    if (l > n) return 0.0;
    if (l < 1) throw std::invalid_argument("eval_biphi: l >= 1");
    if (!(t > 0.0)) throw std::domain_error("eval_biphi: t > 0");
    int m = n - l;
    double chi = x + l;
    int nw = 64 + 6 * static_cast<int>(std::ceil(std::abs(chi))) + 2 * m +
             4 * static_cast<int>(std::ceil(t));
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    // Phi = ((-1)^m / 2 pi i) oint e^{w chi - t w^2/2}(1+w) w^{-m-1} dw.
    double acc = 0.0;
    double h = kPi / nw;
    for (int j = 0; j < nw; ++j) {
        double th = (j + 0.5) * h;
        cplx w = std::polar(1.0, th);
        cplx g = std::exp(w * chi - t * w * w * 0.5) * (1.0 + w) * ipow(w, -(m + 1));
        acc += (kI * w * g).imag();
    }
    return sign * acc * h / kPi;
}

double biphi_closed(int n, int l, double x, double t) {
    if (l > n) return 0.0;
    if (l < 1) throw std::invalid_argument("biphi_closed: l >= 1");
    int m = n - l;
    double chi = x + l;
    double sum = 0.0;
    for (int c = 0; c <= 1 && c <= m; ++c) {
        for (int b = 0; 2 * b + c <= m; ++b) {
            int a = m - c - 2 * b;
            double term = std::pow(chi, a) / std::tgamma(a + 1.0) *
                          std::pow(-0.5 * t, b) / std::tgamma(b + 1.0);
            sum += term;
        }
    }
    return (m % 2 == 0 ? 1.0 : -1.0) * sum;
}

double eval_phi_conv(long long n1, long long n2, double x1, double x2) {
    long long m = n2 - n1;
    if (m <= 0 || x1 < x2) return 0.0;
    if (m == 1) return 1.0;
    if (x1 == x2) return 0.0;
    return std::exp((m - 1) * std::log(x1 - x2) - std::lgamma(static_cast<double>(m)));
}

double phi_conv_line(int n1, int n2, double x1, double x2, double delta) {
    int m = n2 - n1;
    if (m < 2) throw std::invalid_argument("phi_conv_line: n2 - n1 >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("phi_conv_line: delta > 0");
    double d = x1 - x2;
    // The truncated oscillatory tail is O(e^{delta d} / (|d| Y^m)); aim it at
    // 1e-12.  The hard range cap limits the slow m = 2 tail when the phase
    // rate |d| is small, where this representation cannot reach full accuracy.
    double scale = std::exp(std::max(delta * d, 0.0)) * 1e12;
    double y_osc = std::pow(scale / std::max(std::abs(d), 1e-2), 1.0 / m);
    double ymax = std::min(std::max(y_osc, 30.0), 2e5) + 10.0;
    auto pn = line_nodes(ymax, std::min(0.3, 3.0 / (1.0 + std::abs(d))), 1.25,
                         std::abs(d));
    auto f = [&](double y) {
        cplx z(-delta, y);
        return std::exp(-z * d) * ipow(-z, -m);
    };
    return quad::integrate_c(f, pn).real() / kPi;
}

double phi_conv_circle(int n1, int n2, double x1, double x2) {
    int m = n2 - n1;
    if (m <= 0 || x1 < x2) return 0.0;
    double d = x1 - x2;
    int nw = 64 + 6 * static_cast<int>(std::ceil(std::abs(d))) + 2 * m;
    double acc = 0.0;
    double h = kPi / nw;
    for (int j = 0; j < nw; ++j) {
        double th = (j + 0.5) * h;
        cplx w = std::polar(1.0, th);
        cplx g = std::exp(w * d) * ipow(w, -m);
        acc += (kI * w * g).imag();
    }
    return acc * h / kPi;
}

double eval_finite_kernel(const KernelPoint& p1, const KernelPoint& p2, double t) {
    if (p1.n < 1 || p2.n < 1) throw std::invalid_argument("eval_finite_kernel: n >= 1");
    if (!(t > 0.0)) throw std::domain_error("eval_finite_kernel: t > 0");
    int n1 = static_cast<int>(p1.n), n2 = static_cast<int>(p2.n);
    double sum = 0.0;
    for (int k = 1; k <= n2; ++k)
        sum += psi_closed(n1, k, p1.x, t) * biphi_closed(n2, k, p2.x, t);
    return -eval_phi_conv(n1, n2, p1.x, p2.x) + sum;
}

namespace {

// Inner unit-circle (or radius r0) sum of extra(z, w) * (1+w)e^w/(z e^z - w e^w)
// divided by the w-side factor e^{t w^2/2 - w x2}(-w)^{n2}.
cplx circle_inner(cplx z, double x2, long long n2, double t, double r0, int nw,
                  const std::function<cplx(cplx, cplx, cplx, cplx)>& extra) {
    cplx zez = z * std::exp(z);
    cplx acc = 0.0;
    double h = 2.0 * kPi / nw;
    for (int j = 0; j < nw; ++j) {
        double th = -kPi + (j + 0.5) * h;
        cplx w = std::polar(r0, th);
        cplx wew = w * std::exp(w);
        cplx bw = std::exp(t * w * w * 0.5 - w * x2) * ipow(-w, n2);
        cplx g = (1.0 + w) * std::exp(w) / (zez - wew) / bw;
        acc += w * g * extra(z, w, zez, wew);
    }
    return acc / static_cast<double>(nw);
}

int circle_sample_count(double x2, long long n2, double t, double r0) {
    return 96 + 2 * static_cast<int>(std::llabs(n2)) +
           static_cast<int>(std::ceil(6.0 * r0 * std::abs(x2))) +
           4 * static_cast<int>(std::ceil(t * r0 * r0));
}

// Outer integral over z on the default ray path, given the inner circle value.
double ray_circle_double(const KernelPoint& p1, const KernelPoint& p2, double t,
                         const std::function<cplx(cplx, cplx, cplx, cplx)>& extra) {
    contour::RayPath path = contour::gamma_minus_default();
    int nw = circle_sample_count(p2.x, p2.n, t, 1.0);
    auto g_of = [&](double s) {
        auto [z, dir] = contour::path_point(path, s);
        cplx az = std::exp(t * z * z * 0.5 - z * p1.x) * ipow(-z, p1.n);
        return az * circle_inner(z, p2.x, p2.n, t, 1.0, nw, extra) * dir;
    };
    // March the truncation point until the integrand magnitude collapses.
    double smax = 4.0, peak = 0.0;
    for (double s = 0.25; s <= smax; s += 0.5) peak = std::max(peak, std::abs(g_of(s)));
    while (smax < 400.0 && std::abs(g_of(smax)) > 1e-18 * peak) smax *= 1.3;
    // quadratic phase t z^2/2 oscillates at rate ~ t (2 + s) along the ray
    auto pn = quad::panel_nodes(
        capped_edges(smax, std::min(0.3, 3.0 / (1.0 + std::abs(p1.x))), 1.25,
                     std::abs(p1.x) + std::abs(p2.x) + 2.0 * t, t),
        16);
    cplx acc = 0.0;
    for (size_t i = 0; i < pn.x.size(); ++i) acc += pn.w[i] * g_of(pn.x[i]);
    return acc.imag() / kPi;
}

}  // namespace

double eval_finite_kernel_contour(const KernelPoint& p1, const KernelPoint& p2,
                                  double t) {
    if (p1.n < 1 || p2.n < 1)
        throw std::invalid_argument("eval_finite_kernel_contour: n >= 1");
    // z on Re(z) = -1, w on the radius-1/4 circle: |w e^w| < 1/e <= |z e^z|.
    int nw = circle_sample_count(p2.x, p2.n, t, 0.25);
    auto one = [](cplx, cplx, cplx, cplx) { return cplx(1.0); };
    double y0 = std::sqrt((92.0 + 2.0 * std::abs(p1.x)) / t + 1.0);
    double ymax = std::sqrt((92.0 + 2.0 * std::abs(p1.x) +
                             2.0 * p1.n * std::log1p(y0 * y0)) /
                                t +
                            1.0) *
                      1.15 +
                  3.0 / std::sqrt(t);
    auto pn = line_nodes(ymax, std::min(0.3, 3.0 / (1.0 + std::abs(p1.x))), 1.2,
                         std::abs(p1.x) + t);
    auto f = [&](double y) {
        cplx z(-1.0, y);
        cplx az = std::exp(t * z * z * 0.5 - z * p1.x) * ipow(-z, p1.n);
        return az * circle_inner(z, p2.x, p2.n, t, 0.25, nw, one);
    };
    double sum = quad::integrate_c(f, pn).real() / kPi;
    return -eval_phi_conv(p1.n, p2.n, p1.x, p2.x) + sum;
}

double eval_k1(const KernelPoint& p1, const KernelPoint& p2, double t, int M) {
    if (M < 0) throw std::invalid_argument("eval_k1: M >= 0");
    auto extra = [M](cplx z, cplx w, cplx, cplx) {
        return std::exp(static_cast<double>(M) * (z - w)) * ipow(z / w, M);
    };
    return ray_circle_double(p1, p2, t, extra);
}

double eval_k2(const KernelPoint& p1, const KernelPoint& p2, double t) {
    long long n2 = p2.n;
    auto extra = [n2](cplx, cplx, cplx zez, cplx wew) {
        return -ipow(wew / zez, n2);
    };
    return ray_circle_double(p1, p2, t, extra);
}

// --- FlatKernel ------------------------------------------------------------------

FlatKernel::FlatKernel(double t, const contour::RayPath& path, double x_abs_max,
                       long long n_abs_max)
    : t_(t) {
    if (!(t > 0.0)) throw std::domain_error("FlatKernel: t > 0");
    auto log_mag = [&](double s, double x1, double n1s, double x2, double n2s) {
        auto [z, dir] = contour::path_point(path, s);
        (void)dir;
        cplx ph = lambert::phi_map(z);
        return t * 0.5 * (z * z - ph * ph).real() - z.real() * x1 + ph.real() * x2 +
               n1s * std::log(std::abs(z)) - n2s * std::log(std::abs(ph));
    };
    double X = x_abs_max, Nn = static_cast<double>(n_abs_max);
    auto worst = [&](double s) {
        double m = -1e300;
        for (double x1 : {-X, X})
            for (double x2 : {-X, X})
                for (double n1 : {-Nn, Nn})
                    for (double n2 : {-Nn, Nn}) m = std::max(m, log_mag(s, x1, n1, x2, n2));
        return m;
    };
    double peak = -1e300;
    for (double s = 0.1; s <= 4.0; s += 0.3) peak = std::max(peak, worst(s));
    double smax = 4.0;
    while (smax < 600.0 && worst(smax) > peak - 50.0) smax *= 1.3;
    // Panel widths track the oscillation scale: e^{-z x1 + phi x2} advances
    // phase at ~2X per unit arclength and the quadratic term at ~t (2 + s).
    auto edges =
        capped_edges(smax, std::min(0.3, 1.5 / (1.0 + X)), 1.25, 2.0 * X + 2.0 * t, t);
    split_edges_at(edges, path_corners(path));
    auto pn = quad::panel_nodes(edges, 16);
    size_t m = pn.x.size();
    z_.resize(m);
    phi_.resize(m);
    dz_.resize(m);
    logmz_.resize(m);
    logmphi_.resize(m);
    zsq_half_.resize(m);
    phisq_half_.resize(m);
    for (size_t i = 0; i < m; ++i) {
        auto [z, dir] = contour::path_point(path, pn.x[i]);
        cplx ph = lambert::phi_map(z);
        z_[i] = z;
        phi_[i] = ph;
        dz_[i] = dir * pn.w[i];
        logmz_[i] = std::log(-z);
        logmphi_[i] = std::log(-ph);
        zsq_half_[i] = 0.5 * z * z;
        phisq_half_[i] = 0.5 * ph * ph;
    }
}

double FlatKernel::integral_part(double x1, long long n1, double x2,
                                 long long n2) const {
    cplx acc = 0.0;
    double fn1 = static_cast<double>(n1), fn2 = static_cast<double>(n2);
    for (size_t i = 0; i < z_.size(); ++i) {
        cplx e = t_ * (zsq_half_[i] - phisq_half_[i]) - z_[i] * x1 + phi_[i] * x2 +
                 logmz_[i] * fn1 - logmphi_[i] * fn2;
        if (e.real() < -700.0) continue;
        acc += std::exp(e) * dz_[i];
    }
    return acc.imag() / kPi;
}

double FlatKernel::operator()(double x1, long long n1, double x2, long long n2) const {
    return -eval_phi_conv(n1, n2, x1, x2) + integral_part(x1, n1, x2, n2);
}

double eval_flat_kernel(const KernelPoint& p1, const KernelPoint& p2, double t) {
    double xm = std::max(std::abs(p1.x), std::abs(p2.x)) + 1.0;
    long long nm = std::max(std::llabs(p1.n), std::llabs(p2.n)) + 1;
    FlatKernel k(t, contour::gamma_minus_default(), xm, nm);
    return k(p1.x, p1.n, p2.x, p2.n);
}

double eval_flat_multisheet(const KernelPoint& p1, const KernelPoint& p2, double t,
                            int kmax) {
    if (kmax < 1) throw std::invalid_argument("eval_flat_multisheet: kmax >= 1");
    // Radius 1/4: the image w e^w then stays strictly inside the branch-point
    // disc, so every sheet z_k(w) is smooth along the whole circle (the +-1
    // pair swaps at the secondary cut crossing, but their node-wise sum does
    // not notice).  Radius 1 would graze the branch point at w = -1.
    const double r0 = 0.25;
    int nw = 128 + 2 * static_cast<int>(std::llabs(p1.n) + std::llabs(p2.n)) +
             static_cast<int>(std::ceil(6.0 * (std::abs(p1.x) + std::abs(p2.x))));
    nw += nw % 2;  // keep the w = -r0 cut crossing between nodes
    double h = 2.0 * kPi / nw;
    cplx acc = 0.0;
    for (int j = 0; j < nw; ++j) {
        double th = -kPi + (j + 0.5) * h;
        cplx w = std::polar(r0, th);
        cplx wew = w * std::exp(w);
        cplx bw = std::exp(t * w * w * 0.5 - w * p2.x) * ipow(-w, p2.n);
        for (int k = -kmax; k <= kmax; ++k) {
            if (k == 0) continue;
            cplx zk = lambert::lambert_w(k, wew);
            cplx az = std::exp(t * zk * zk * 0.5 - zk * p1.x) * ipow(-zk, p1.n);
            acc += w * az / bw * (1.0 + w) * std::exp(w) /
                   ((1.0 + zk) * std::exp(zk));
        }
    }
    double sum = (acc / static_cast<double>(nw)).real();
    return -eval_phi_conv(p1.n, p2.n, p1.x, p2.x) + sum;
}

// --- ScaledKernel ------------------------------------------------------------------

namespace {

// Conjugated exponent at a contour point with precomputed pieces.
inline cplx conj_exponent(double t, const cplx& zsq_half, const cplx& phisq_half,
                          const cplx& z, const cplx& phi, const cplx& logmz,
                          const cplx& logmphi, double x1, double fn1, double x2,
                          double fn2) {
    return t * (zsq_half - phisq_half) - (z + 1.0) * x1 + (phi + 1.0) * x2 +
           logmz * fn1 - logmphi * fn2;
}

}  // namespace

ScaledKernel::ScaledKernel(double t, double r_lo, double r_hi, double s_lo, double s_hi)
    : t_(t) {
    if (!(t > 0.0)) throw std::domain_error("ScaledKernel: t > 0");
    // Corner set of the (s, r) box mapped to kernel coordinates.
    std::vector<KernelPoint> corners;
    for (double r : {r_lo, r_hi})
        for (double s : {s_lo, s_hi}) corners.push_back(to_kernel_point({s, r, t}));
    auto z_of = [&](double u) {
        double tau = 1.0 + u * u;
        cplx z = contour::gamma_rho(0.0, tau);
        double fr = tau - std::floor(tau);
        // At integer tau the image sits exactly at the principal crossing -1.
        cplx phi = fr > 0.0 ? contour::phi_image(0.0, fr) : cplx(-1.0, 0.0);
        return std::pair<cplx, cplx>(z, phi);
    };
    auto worst = [&](double u) {
        auto [z, phi] = z_of(u);
        cplx zs = 0.5 * z * z, ps = 0.5 * phi * phi;
        cplx lz = std::log(-z), lp = std::log(-phi);
        double m = -1e300;
        for (const KernelPoint& a : corners)
            for (const KernelPoint& b : corners)
                m = std::max(m, conj_exponent(t, zs, ps, z, phi, lz, lp, a.x,
                                              static_cast<double>(a.n), b.x,
                                              static_cast<double>(b.n))
                                    .real());
        return m;
    };
    double peak = -1e300;
    for (double u = 0.05; u <= 1.0; u += 0.1) peak = std::max(peak, worst(u));
    double umax = 1.0;
    while (umax < 60.0 && worst(umax) > peak - 70.0) umax *= 1.25;
    double h0 = std::min(0.4, 1.2 * std::pow(t, -1.0 / 3.0));
    auto pn = quad::panel_nodes(quad::geometric_edges(0.0, umax, h0, 1.25), 20);
    size_t m = pn.x.size();
    z_.resize(m);
    phi_.resize(m);
    dz_.resize(m);
    logmz_.resize(m);
    logmphi_.resize(m);
    zsq_half_.resize(m);
    phisq_half_.resize(m);
    for (size_t i = 0; i < m; ++i) {
        double u = pn.x[i];
        auto [z, phi] = z_of(u);
        cplx dzdtau = 2.0 * kPi * kI * (1.0 - 1.0 / (z + 1.0));
        z_[i] = z;
        phi_[i] = phi;
        dz_[i] = dzdtau * 2.0 * u * pn.w[i];
        logmz_[i] = std::log(-z);
        logmphi_[i] = std::log(-phi);
        zsq_half_[i] = 0.5 * z * z;
        phisq_half_[i] = 0.5 * phi * phi;
    }
}

double ScaledKernel::operator()(double s1, double r1, double s2, double r2) const {
    KernelPoint p1 = to_kernel_point({s1, r1, t_});
    KernelPoint p2 = to_kernel_point({s2, r2, t_});
    double fn1 = static_cast<double>(p1.n), fn2 = static_cast<double>(p2.n);
    double pref = std::cbrt(2.0 * t_);
    cplx acc = 0.0;
    for (size_t i = 0; i < z_.size(); ++i) {
        cplx e = conj_exponent(t_, zsq_half_[i], phisq_half_[i], z_[i], phi_[i],
                               logmz_[i], logmphi_[i], p1.x, fn1, p2.x, fn2);
        if (e.real() < -700.0) continue;
        acc += std::exp(e) * dz_[i];
    }
    double val = pref * acc.imag() / kPi;
    long long mll = p2.n - p1.n;
    if (mll > 0 && p1.x >= p2.x) {
        double lg = (mll - 1) * std::log(p1.x - p2.x) -
                    std::lgamma(static_cast<double>(mll)) + (p2.x - p1.x) +
                    std::log(pref);
        val -= std::exp(lg);
    }
    return val;
}

double eval_conjugated_kernel(const ScaledPoint& q1, const ScaledPoint& q2) {
    if (q1.t != q2.t)
        throw std::invalid_argument("eval_conjugated_kernel: mismatched t");
    double r_lo = std::min(q1.r, q2.r) - 0.1, r_hi = std::max(q1.r, q2.r) + 0.1;
    double s_lo = std::min(q1.s, q2.s) - 0.1, s_hi = std::max(q1.s, q2.s) + 0.1;
    ScaledKernel k(q1.t, r_lo, r_hi, s_lo, s_hi);
    return k(q1.s, q1.r, q2.s, q2.r);
}

double eval_airy1_kernel(double s1, double r1, double s2, double r2) {
    double dr = r2 - r1;
    double val = 0.0;
    if (dr > 0.0)
        val -= std::exp(-(s2 - s1) * (s2 - s1) / (4.0 * dr)) / std::sqrt(4.0 * kPi * dr);
    double arg = s1 + s2 + dr * dr;
    double expo = dr * (s1 + s2) + 2.0 / 3.0 * dr * dr * dr;
    val += airy::airy_ai(arg) * std::exp(expo);
    return val;
}

double airy_function(double x) {
    if (x < -20.0 || x > 200.0)
        throw std::domain_error("airy_function: supported range [-20, 200]");
    return airy::airy_ai(x);
}

}  // namespace oscbm::kernels
