#include "oscbm/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace oscbm::quad {

namespace {

// Newton on P_n with the three-term recurrence; Chebyshev-angle initial guess.
Rule compute_gauss_legendre(int n) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

std::vector<double> geometric_edges(double a, double b, double h0, double growth) {
    if (!(b > a) || !(h0 > 0.0) || !(growth >= 1.0))
        throw std::invalid_argument("geometric_edges: need b > a, h0 > 0, growth >= 1");
    std::vector<double> e{a};
    double h = h0;
    while (e.back() < b) {
        double next = e.back() + h;
        if (next >= b - 1e-12 * (std::abs(b) + 1.0)) next = b;
        e.push_back(next);
        h *= growth;
    }
    return e;
}

PanelNodes panel_nodes(const std::vector<double>& edges, int order) {
    if (edges.size() < 2) throw std::invalid_argument("panel_nodes: need >= 2 edges");
    const Rule& r = gauss_legendre(order);
    PanelNodes pn;
    pn.x.reserve((edges.size() - 1) * order);
    pn.w.reserve((edges.size() - 1) * order);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        double c = 0.5 * (edges[p] + edges[p + 1]);
        double h = 0.5 * (edges[p + 1] - edges[p]);
        for (int i = 0; i < order; ++i) {
            pn.x.push_back(c + h * r.x[i]);
            pn.w.push_back(h * r.w[i]);
        }
    }
    return pn;
}

double integrate(const std::function<double(double)>& f, const PanelNodes& pn) {
    double s = 0.0;
    for (size_t i = 0; i < pn.x.size(); ++i) s += pn.w[i] * f(pn.x[i]);
    return s;
}

std::complex<double> integrate_c(const std::function<std::complex<double>(double)>& f,
                                 const PanelNodes& pn) {
    std::complex<double> s = 0.0;
    for (size_t i = 0; i < pn.x.size(); ++i) s += pn.w[i] * f(pn.x[i]);
    return s;
}

}  // namespace oscbm::quad
