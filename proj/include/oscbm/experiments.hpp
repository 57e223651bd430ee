#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oscbm/config.hpp"
#include "oscbm/report.hpp"

namespace oscbm::experiments {

// Result of one experiment: comparison rows (estimate vs reference with
// z-scores folded into se/exact), named summary scalars (sup distances,
// max |z|), and an overall pass flag for the experiment's invariants.
struct ComparisonReport {
    std::string experiment;
    std::vector<report::Row> rows;
    std::vector<std::pair<std::string, double>> summaries;
    double max_abs_z = 0.0;
    bool passed = true;
};

// Monte Carlo vs finite-t Fredholm vs limit-process determinants for the
// rescaled flat system; reports pointwise z-scores and per-t sup distances.
ComparisonReport run_flat_convergence(const config::Config& cfg);

// N-particle system with spaced initial condition x_k(0) = -k: Monte Carlo
// vs finite-kernel determinants for one- and two-label events, plus a
// transition-density quadrature cross-check at N = 2.
ComparisonReport run_finiteN_consistency(const config::Config& cfg);

// Tagged-particle rescaling vs limit determinants at label offsets -tau,
// plus the decorrelation diagnostic P(|Xi| >= eps) over the t ladder.
ComparisonReport run_tagged(const config::Config& cfg);

// Step initial condition: -x_N(t)/sqrt(t) vs the N x N GUE top-eigenvalue
// law (Hankel-determinant CDF; N = 2 additionally cross-checked by literal
// 2-D quadrature).
ComparisonReport run_step_gue(const config::Config& cfg);

// Writes <out>/<experiment>.csv and <out>/manifest.json.  Byte-deterministic
// for fixed config and seed.
std::vector<std::string> emit_report(const ComparisonReport& rep,
                                     const config::Config& cfg);

ComparisonReport run_by_id(const std::string& id, const config::Config& cfg);

}  // namespace oscbm::experiments
