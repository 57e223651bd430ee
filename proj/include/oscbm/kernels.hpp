#pragma once

#include <complex>
#include <vector>

#include "oscbm/contour.hpp"

namespace oscbm::kernels {

using cplx = std::complex<double>;

struct KernelPoint {
    double x;
    long long n;
};

// Airy-scale coordinates: fluctuation s, label parameter r, time t.
struct ScaledPoint {
    double s;
    double r;
    double t;
};

// n = floor(-t + 2^{5/3} t^{2/3} r), x = -2^{5/3} t^{2/3} r - (2t)^{1/3} s.
KernelPoint to_kernel_point(const ScaledPoint& q);

// --- F-family ----------------------------------------------------------------
// F_0 = heat kernel; F_{-m} its m-th derivative up to sign; F_k (k >= 1) the
// k-fold Gaussian tail iterate.  Closed forms for k <= 2, contour quadrature
// beyond.
double eval_Fk(int k, double x, double t);
// Same values from the defining contour integral on Re(z) = delta
// (delta > 0 mandatory for k >= 1; either sign admissible for k <= 0).
double eval_Fk_contour(int k, double x, double t, double delta);

// det[F_{i-j}(x_{N+1-i} - x0_{N+1-j}, t)], the N-particle transition density
// from initial positions x0.  Both vectors are ordered by label, element 0
// the rightmost particle; it integrates to 1 over x[0] >= ... >= x[N-1].
double transition_density(const std::vector<double>& x, const std::vector<double>& x0,
                          double t);

// --- Biorthogonal pair -------------------------------------------------------
// Psi^n_{n-k}(x) on the vertical line Re(z) = -delta.
double eval_psi(int n, int k, double x, double t, double delta = 1.0);
// Closed form: Hermite-Gaussian for k <= n; for k > n the pole at the origin
// flips the contour and the value is F_{k-n}(-(x+k), t).
double psi_closed(int n, int k, double x, double t);

// Phi^n_{n-l}(x) by residue extraction on the unit circle; 0 for l > n.
double eval_biphi(int n, int l, double x, double t);
// Closed form: the degree-(n-l) polynomial coefficients of e^{w(x+l)-tw^2/2}(1+w).
double biphi_closed(int n, int l, double x, double t);

// --- One-sided convolution kernel phi^{(n1,n2)} -------------------------------
double eval_phi_conv(long long n1, long long n2, double x1, double x2);
// Vertical-line representation (requires n2 - n1 >= 2 for absolute convergence).
double phi_conv_line(int n1, int n2, double x1, double x2, double delta);
// Unit-circle representation with the explicit indicators (any n2 > n1).
double phi_conv_circle(int n1, int n2, double x1, double x2);

// --- Finite-N kernel ----------------------------------------------------------
// -phi^{(n1,n2)} + sum_{k=1}^{n2} Psi^{n1}_{n1-k}(x1) Phi^{n2}_{n2-k}(x2).
double eval_finite_kernel(const KernelPoint& p1, const KernelPoint& p2, double t);
// Same kernel with the Psi-Phi sum performed as a geometric series inside a
// double contour integral (w on a radius-1/4 circle, z on Re(z) = -1, so that
// |w e^w| < |z e^z| pointwise).
double eval_finite_kernel_contour(const KernelPoint& p1, const KernelPoint& p2, double t);

// M-window split of the shifted finite kernel on the ray/unit-circle contour
// pair: K_t(x1-M, n1+M; x2-M, n2+M) = -phi^{(n1,n2)} + K1(M) + K2 with K1
// carrying the e^{M(z-w)}(z/w)^M factor (vanishing as M grows) and K2 the
// M-independent geometric remainder.
double eval_k1(const KernelPoint& p1, const KernelPoint& p2, double t, int M);
double eval_k2(const KernelPoint& p1, const KernelPoint& p2, double t);

// --- Flat kernel ---------------------------------------------------------------
// K^flat = -phi^{(n1,n2)} + (1/2pi i) int_{Gamma_-} dz
//          e^{t z^2/2 - z x1}(-z)^{n1} / (e^{t phi^2/2 - phi x2}(-phi)^{n2}).
class FlatKernel {
  public:
    // Node set sized for |x| <= x_abs_max, |n| <= n_abs_max at this t.
    FlatKernel(double t, const contour::RayPath& path, double x_abs_max,
               long long n_abs_max);
    double operator()(double x1, long long n1, double x2, long long n2) const;
    double integral_part(double x1, long long n1, double x2, long long n2) const;
    double t() const { return t_; }

  private:
    double t_;
    std::vector<cplx> z_, phi_, dz_, logmz_, logmphi_;
    std::vector<cplx> zsq_half_, phisq_half_;
};

double eval_flat_kernel(const KernelPoint& p1, const KernelPoint& p2, double t);
// Residue expansion over the non-principal sheets z_k(w) = L_k(w e^w),
// truncated at |k| <= kmax, on the unit circle.
double eval_flat_multisheet(const KernelPoint& p1, const KernelPoint& p2, double t,
                            int kmax);

// --- Conjugated / scaled kernel -------------------------------------------------
// (2t)^{1/3} e^{x2-x1} K^flat under the Airy scaling, evaluated on the
// steep-descent contour (rho = 0) with the whole exponent assembled in
// log-space; the node set is built once per (t, parameter box).
class ScaledKernel {
  public:
    ScaledKernel(double t, double r_lo, double r_hi, double s_lo, double s_hi);
    double operator()(double s1, double r1, double s2, double r2) const;
    double t() const { return t_; }

  private:
    double t_;
    std::vector<cplx> z_, phi_, dz_, logmz_, logmphi_;
    std::vector<cplx> zsq_half_, phisq_half_;
};

double eval_conjugated_kernel(const ScaledPoint& q1, const ScaledPoint& q2);

// --- Limit kernel ----------------------------------------------------------------
double eval_airy1_kernel(double s1, double r1, double s2, double r2);
// Ai on the supported range [-20, 200].
double airy_function(double x);

}  // namespace oscbm::kernels
