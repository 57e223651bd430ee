#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace oscbm::quad {

// Gauss-Legendre rule on [-1, 1]; cached per order.
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

const Rule& gauss_legendre(int n);

// Panel edges [a, a+h0, a+h0(1+g), ...] capped at b; h0 > 0, g >= 1.
std::vector<double> geometric_edges(double a, double b, double h0, double growth);

// Nodes and weights of an order-n rule mapped onto each [e_i, e_{i+1}] panel.
struct PanelNodes {
    std::vector<double> x;
    std::vector<double> w;
};
PanelNodes panel_nodes(const std::vector<double>& edges, int order);

double integrate(const std::function<double(double)>& f, const PanelNodes& pn);
std::complex<double> integrate_c(const std::function<std::complex<double>(double)>& f,
                                 const PanelNodes& pn);

}  // namespace oscbm::quad
