#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oscbm::simulate {

// Driving noise on a (label, step) grid.  Streams are keyed by
// (seed, label, replicate): a label always reproduces the same increments
// no matter which window it is evaluated in.  The table constructor swaps
// in explicit increments for grid-refinement and coupling studies.
class BrownianGrid {
  public:
    BrownianGrid(uint64_t seed, uint64_t replicate, double dt, int n_steps);
    BrownianGrid(std::vector<std::vector<double>> table, long long label_lo,
                 double dt);

    double dt() const { return dt_; }
    int n_steps() const { return n_steps_; }
    // n_steps N(0, dt) increments for this label.
    std::vector<double> increments(long long label) const;

  private:
    uint64_t seed_ = 0, replicate_ = 0;
    double dt_ = 0.0;
    int n_steps_ = 0;
    bool from_table_ = false;
    std::vector<std::vector<double>> table_;
    long long table_lo_ = 0;
};

struct InitialCondition {
    long long label_lo = 1;  // lowest label; this particle is free
    std::vector<double> x;   // positions by ascending label
};

struct SystemState {
    long long label_lo = 1;
    std::vector<double> x;
    double time = 0.0;
    double at(long long label) const;
};

// Last-passage value Y_{k,m}(t): sup over nondecreasing switch times of the
// collected increments on lines k..m, started at 0 on line k.
double last_passage(const BrownianGrid& g, long long k, long long m, double t);

// One-sided collision system x_m(t) = -max_{k<=m}{ Y_{k,m}(t) - x_k(0) },
// evaluated by the equivalent running-max recursion on the grid.
SystemState evolve_reflect(const BrownianGrid& g, const InitialCondition& init,
                           double t);

// Flat window approximation: x_m^{(M)}(t) = -max_{k in [-M+1, m]}{Y_{k,m}(t)+k}
// for each target m.  Targets must lie in [-M+1, M].
std::vector<double> evolve_flat(const BrownianGrid& g, long long M,
                                const std::vector<long long>& targets, double t);

// Window size M such that the maximizing k for every target is estimated to
// stay inside [-M+1, M] except with probability ~eps_p (ballistic depth T
// plus a Gaussian-tail pad).
long long choose_window(double T, const std::vector<long long>& targets,
                        double eps_p = 1e-6);

// Two systems evolved under identical increments.
std::pair<SystemState, SystemState> coupled_evolve(const BrownianGrid& g,
                                                   const InitialCondition& a,
                                                   const InitialCondition& b,
                                                   double t);

// X_t(r) = -(x_{n(r,t)}(t) + 2^{5/3} t^{2/3} r) / (2t)^{1/3} with
// n(r,t) = floor(-t + 2^{5/3} t^{2/3} r).
double rescale_flat(const SystemState& state, double r);

struct TaggedParams {
    std::vector<double> theta;  // time offsets, |theta_k| <= t^nu
    std::vector<double> u;      // label offsets in 2^{5/3} t^{2/3} units
    double nu = 0.4;
};

// X_t^resc(u_k, theta_k) =
//   -( x_{floor(-t + u_k 2^{5/3} t^{2/3} + theta_k)}(t + theta_k)
//      + 2 theta_k + u_k 2^{5/3} t^{2/3} ) / (2t)^{1/3},
// all components sampled from one coupled realization.  The simulation is
// run near label 0 and shifted back by the integer round(t) (the flat system
// is invariant under simultaneous integer label/position shifts).
std::vector<double> rescale_tagged(const BrownianGrid& g, double t,
                                   const TaggedParams& params);

struct EnsembleStats {
    std::string observable;
    uint64_t seed = 0;
    int replicates = 0;
    std::vector<double> grid;  // CDF evaluation points
    std::vector<double> cdf;   // empirical P(X <= grid[i])
    std::vector<double> se;    // sqrt(p(1-p)/n)
    double mean = 0.0;
    double variance = 0.0;
};

EnsembleStats make_stats(std::string observable, uint64_t seed,
                         const std::vector<double>& samples,
                         std::vector<double> grid);

}  // namespace oscbm::simulate
