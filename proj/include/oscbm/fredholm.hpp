#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "oscbm/kernels.hpp"

// Nystrom discretization of multi-label Fredholm determinants det(I - K) on
// unions of half-lines, one half-line per label.  Each half-line is mapped to
// the unit interval by u -> threshold -/+ g(u), g(u) = -log(1 - c u) with
// c = 1 - e^{-depth}, so the node set reaches exactly `depth` into the tail
// while clustering near the threshold where the kernel varies fastest.
namespace oscbm::fredholm {

enum class Orientation {
    BelowThreshold,  // half-line (-inf, a], mapped x = a - g(u)
    AboveThreshold,  // half-line [a, +inf), mapped x = a + g(u)
};

// Block kernel: K(i, x, j, y) couples label index i at point x to label
// index j at point y.
using BlockKernel = std::function<double(int, double, int, double)>;

struct LabelSet {
    std::vector<double> thresholds;
    Orientation orientation = Orientation::BelowThreshold;
    double depth = 14.0;
};

// Symmetrized Nystrom matrix sqrt(w_u w_v) K with n_nodes Gauss-Legendre
// nodes per label; det(I - M) equals the discretized Fredholm determinant.
Eigen::MatrixXd build_operator(const BlockKernel& k, const LabelSet& labels,
                               int n_nodes);

// det(I - M).
double fredholm_det(const Eigen::MatrixXd& m);

struct DeterminantResult {
    double value = 0.0;
    // (nodes per label, determinant) at successively doubled resolutions.
    std::vector<std::pair<int, double>> resolution_trace;
};

DeterminantResult determinant(const BlockKernel& k, const LabelSet& labels,
                              int n_nodes = 40, int n_levels = 2);

// P( x_{n(r_k)}(t) >= a(r_k, s_k) for all k ) for the flat half-system,
// i.e. the joint distribution of the rescaled positions exceeding levels
// s_k at observation parameters r_k.  Thresholds must satisfy s_k >= -2:
// the finite-t kernel representation degrades for deeper arguments (the
// onset creeps up to about -2.4 by t = 1000) and such calls are rejected
// with std::domain_error rather than returning garbage.
double joint_cdf_flat(double t, const std::vector<std::pair<double, double>>& rs,
                      int n_nodes = 40, double depth = 14.0);

// P( A_1(r_k) <= s_k for all k ) for the limit process.
double joint_cdf_airy1(const std::vector<std::pair<double, double>>& rs,
                       int n_nodes = 40, double depth = 14.0);

}  // namespace oscbm::fredholm
