#include "oscbm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oscbm/rng.hpp"

namespace oscbm::simulate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int step_of(const BrownianGrid& g, double t) {
    int j = static_cast<int>(std::llround(t / g.dt()));
    if (j < 0 || j > g.n_steps())
        throw std::out_of_range("time outside grid horizon");
    if (std::abs(j * g.dt() - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("time is not a grid point");
    return j;
}

struct Sample {
    long long label;
    int step;
};

// Row dynamic program for V_m(j) = max(V_m(j-1) + b_m(j), V_{m-1}(j)) with
// V_m(0) = v0[m - lo] and the lowest label free.  One-sided interaction makes
// a single label-ascending sweep exact; memory is two time rows.  Returns the
// V value at each requested (label, step).
std::vector<double> run_dp(const BrownianGrid& g, long long lo,
                           const std::vector<double>& v0,
                           const std::vector<Sample>& samples) {
    long long hi = lo + static_cast<long long>(v0.size()) - 1;
    int n = g.n_steps();
    for (const Sample& s : samples)
        if (s.label < lo || s.label > hi || s.step < 0 || s.step > n)
            throw std::out_of_range("sample outside dp range");
    std::vector<double> prev(n + 1, kNegInf), cur(n + 1), out(samples.size());
    for (long long m = lo; m <= hi; ++m) {
        std::vector<double> inc = g.increments(m);
        cur[0] = v0[m - lo];
        for (int j = 1; j <= n; ++j)
            cur[j] = std::max(cur[j - 1] + inc[j - 1], prev[j]);
        for (size_t i = 0; i < samples.size(); ++i)
            if (samples[i].label == m) out[i] = cur[samples[i].step];
        std::swap(prev, cur);
    }
    return out;
}

}  // namespace

BrownianGrid::BrownianGrid(uint64_t seed, uint64_t replicate, double dt, int n_steps)
    : seed_(seed), replicate_(replicate), dt_(dt), n_steps_(n_steps) {
    if (!(dt > 0.0) || n_steps < 1)
        throw std::invalid_argument("BrownianGrid: dt > 0 and n_steps >= 1");
}

BrownianGrid::BrownianGrid(std::vector<std::vector<double>> table, long long label_lo,
                           double dt)
    : dt_(dt), from_table_(true), table_(std::move(table)), table_lo_(label_lo) {
    if (!(dt > 0.0) || table_.empty())
        throw std::invalid_argument("BrownianGrid: table and dt > 0 required");
    n_steps_ = static_cast<int>(table_[0].size());
    for (const auto& row : table_)
        if (static_cast<int>(row.size()) != n_steps_)
            throw std::invalid_argument("BrownianGrid: ragged table");
}

std::vector<double> BrownianGrid::increments(long long label) const {
    if (from_table_) {
        long long i = label - table_lo_;
        if (i < 0 || i >= static_cast<long long>(table_.size()))
            throw std::out_of_range("BrownianGrid: label outside table");
        return table_[i];
    }
    rng::NormalStream ns(seed_, label, replicate_);
    std::vector<double> out(n_steps_);
    double s = std::sqrt(dt_);
    for (double& v : out) v = s * ns.next();
    return out;
}

double SystemState::at(long long label) const {
    long long i = label - label_lo;
    if (i < 0 || i >= static_cast<long long>(x.size()))
        throw std::out_of_range("SystemState: label outside window");
    return x[i];
}

double last_passage(const BrownianGrid& g, long long k, long long m, double t) {
    if (k > m) throw std::invalid_argument("last_passage: k <= m");
    int j = step_of(g, t);
    std::vector<double> v0(m - k + 1, 0.0);
    return run_dp(g, k, v0, {{m, j}})[0];
}

SystemState evolve_reflect(const BrownianGrid& g, const InitialCondition& init,
                           double t) {
    if (init.x.empty()) throw std::invalid_argument("evolve_reflect: empty IC");
    int j = step_of(g, t);
    std::vector<double> v0(init.x.size());
    for (size_t i = 0; i < init.x.size(); ++i) v0[i] = -init.x[i];
    std::vector<Sample> samples;
    for (size_t i = 0; i < init.x.size(); ++i)
        samples.push_back({init.label_lo + static_cast<long long>(i), j});
    std::vector<double> v = run_dp(g, init.label_lo, v0, samples);
    SystemState out;
    out.label_lo = init.label_lo;
    out.time = t;
    out.x.resize(v.size());
    for (size_t i = 0; i < v.size(); ++i) out.x[i] = -v[i];
    return out;
}

std::vector<double> evolve_flat(const BrownianGrid& g, long long M,
                                const std::vector<long long>& targets, double t) {
    if (targets.empty()) throw std::invalid_argument("evolve_flat: no targets");
    long long lo = -M + 1;
    long long hi = *std::max_element(targets.begin(), targets.end());
    if (hi > M || *std::min_element(targets.begin(), targets.end()) < lo)
        throw std::out_of_range("evolve_flat: target outside window");
    int j = step_of(g, t);
    std::vector<double> v0(hi - lo + 1);
    for (long long m = lo; m <= hi; ++m) v0[m - lo] = static_cast<double>(m);
    std::vector<Sample> samples;
    for (long long m : targets) samples.push_back({m, j});
    std::vector<double> v = run_dp(g, lo, v0, samples);
    for (double& val : v) val = -val;
    return v;
}

long long choose_window(double T, const std::vector<long long>& targets,
                        double eps_p) {
    if (!(T >= 0.0)) throw std::invalid_argument("choose_window: T >= 0");
    if (!(eps_p > 0.0 && eps_p < 1.0)) throw std::invalid_argument("choose_window: eps_p");
    long long mint = 0, maxt = 0;
    if (!targets.empty()) {
        mint = *std::min_element(targets.begin(), targets.end());
        maxt = *std::max_element(targets.begin(), targets.end());
    }
    // Ballistic depth T plus a tail pad scaled from the 1e-6 baseline.
    double zrel = std::sqrt(std::log(1.0 / eps_p) / std::log(1e6));
    double depth = T + 6.0 * zrel * std::ceil(std::sqrt(T)) + 16.0;
    long long m = static_cast<long long>(std::ceil(depth)) + 1 - mint;
    long long floor_m = maxt + 4 * static_cast<long long>(std::ceil(std::sqrt(T))) + 16;
    return std::max({m, maxt + 1, floor_m});
}

std::pair<SystemState, SystemState> coupled_evolve(const BrownianGrid& g,
                                                   const InitialCondition& a,
                                                   const InitialCondition& b,
                                                   double t) {
    if (a.label_lo != b.label_lo || a.x.size() != b.x.size())
        throw std::invalid_argument("coupled_evolve: mismatched label windows");
    return {evolve_reflect(g, a, t), evolve_reflect(g, b, t)};
}

double rescale_flat(const SystemState& state, double r) {
    double t = state.time;
    if (!(t > 0.0)) throw std::invalid_argument("rescale_flat: state.time > 0");
    double c = std::pow(2.0, 5.0 / 3.0) * std::pow(t, 2.0 / 3.0);
    long long n = static_cast<long long>(std::floor(-t + c * r));
    return -(state.at(n) + c * r) / std::cbrt(2.0 * t);
}

std::vector<double> rescale_tagged(const BrownianGrid& g, double t,
                                   const TaggedParams& params) {
    size_t m = params.theta.size();
    if (m == 0 || params.u.size() != m)
        throw std::invalid_argument("rescale_tagged: theta/u sizes");
    double tn = std::pow(t, params.nu);
    for (double th : params.theta)
        if (std::abs(th) > tn + 1e-9)
            throw std::invalid_argument("rescale_tagged: |theta| <= t^nu");
    long long J = static_cast<long long>(std::llround(t));
    if (std::abs(t - static_cast<double>(J)) > 1e-9)
        throw std::invalid_argument("rescale_tagged: integer t required");
    double c = std::pow(2.0, 5.0 / 3.0) * std::pow(t, 2.0 / 3.0);
    // Shift the observation labels near 0; positions shift back by -J.
    std::vector<long long> labels(m);
    std::vector<double> times(m);
    double t_max = 0.0;
    for (size_t k = 0; k < m; ++k) {
        labels[k] =
            static_cast<long long>(std::floor(-t + params.u[k] * c + params.theta[k])) +
            J;
        times[k] = t + params.theta[k];
        t_max = std::max(t_max, times[k]);
    }
    if (t_max > g.n_steps() * g.dt() * (1.0 + 1e-12))
        throw std::out_of_range("rescale_tagged: horizon exceeds grid");
    long long M = choose_window(t_max, labels);
    long long lo = -M + 1;
    long long hi = *std::max_element(labels.begin(), labels.end());
    std::vector<double> v0(hi - lo + 1);
    for (long long l = lo; l <= hi; ++l) v0[l - lo] = static_cast<double>(l);
    std::vector<Sample> samples(m);
    for (size_t k = 0; k < m; ++k)
        samples[k] = {labels[k], static_cast<int>(std::llround(times[k] / g.dt()))};
    std::vector<double> v = run_dp(g, lo, v0, samples);
    std::vector<double> out(m);
    double denom = std::cbrt(2.0 * t);
    for (size_t k = 0; k < m; ++k) {
        double x = -v[k] + static_cast<double>(J);  // position at the true label
        out[k] = -(x + 2.0 * params.theta[k] + params.u[k] * c) / denom;
    }
    return out;
}

EnsembleStats make_stats(std::string observable, uint64_t seed,
                         const std::vector<double>& samples,
                         std::vector<double> grid) {
    EnsembleStats st;
    st.observable = std::move(observable);
    st.seed = seed;
    st.replicates = static_cast<int>(samples.size());
    st.grid = std::move(grid);
    double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= std::max(1.0, n);
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= std::max(1.0, n - 1.0);
    st.mean = mean;
    st.variance = var;
    st.cdf.resize(st.grid.size());
    st.se.resize(st.grid.size());
    for (size_t i = 0; i < st.grid.size(); ++i) {
        double cnt = 0.0;
        for (double v : samples) cnt += (v <= st.grid[i]) ? 1.0 : 0.0;
        double p = cnt / std::max(1.0, n);
        st.cdf[i] = p;
        st.se[i] = std::sqrt(p * (1.0 - p) / std::max(1.0, n));
    }
    return st;
}

}  // namespace oscbm::simulate
