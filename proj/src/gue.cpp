#include "oscbm/gue.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oscbm/quad.hpp"

namespace oscbm::gue {

namespace {

constexpr double kPi = 3.14159265358979323846;

// m_k(s) = int_{-inf}^{s} x^k e^{-x^2/2} dx by the parts recursion
// m_k = (k-1) m_{k-2} - s^{k-1} e^{-s^2/2}.
std::vector<double> moments(int kmax, double s) {
    std::vector<double> m(kmax + 1);
    double e = std::exp(-0.5 * s * s);
    m[0] = std::sqrt(2.0 * kPi) * 0.5 * std::erfc(-s / std::sqrt(2.0));
    if (kmax >= 1) m[1] = -e;
    double sp = 1.0;  // s^{k-1}
    for (int k = 2; k <= kmax; ++k) {
        sp *= s;
        m[k] = (k - 1) * m[k - 2] - sp * e;
    }
    return m;
}

double hankel_det(int n, const std::vector<double>& m) {
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = m[i + j];
    return h.partialPivLu().determinant();
}

}  // namespace

double cdf_lambda_max(int n, double s) {
    if (n < 1 || n > 6) throw std::invalid_argument("cdf_lambda_max: n in [1,6]");
    std::vector<double> num = moments(2 * n - 2, s);
    std::vector<double> den = moments(2 * n - 2, 40.0);
    return hankel_det(n, num) / hankel_det(n, den);
}

double cdf_lambda_max_quad2(double s) {
    auto tensor_mass = [](double lo, double hi) {
        auto pn = quad::panel_nodes(quad::geometric_edges(lo, hi, 0.25, 1.0), 12);
        double acc = 0.0;
        for (size_t i = 0; i < pn.x.size(); ++i)
            for (size_t j = 0; j < pn.x.size(); ++j) {
                double a = pn.x[i], b = pn.x[j];
                acc += pn.w[i] * pn.w[j] * (a - b) * (a - b) *
                       std::exp(-0.5 * (a * a + b * b));
            }
        return acc;
    };
    double lo = std::min(-10.0, s - 10.0);
    return tensor_mass(lo, s) / tensor_mass(-12.0, 12.0);
}

}  // namespace oscbm::gue
