#include "oscbm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "oscbm/fredholm.hpp"
#include "oscbm/gue.hpp"
#include "oscbm/kernels.hpp"
#include "oscbm/parallel.hpp"
#include "oscbm/quad.hpp"
#include "oscbm/simulate.hpp"

namespace oscbm::experiments {

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

double sim_dt(double t) { return t <= 10.0 ? 1e-3 * t : 1e-4 * t; }

double scale_c(double t) { return std::pow(2.0, 5.0 / 3.0) * std::pow(t, 2.0 / 3.0); }

struct ZTracker {
    double max_abs_z = 0.0;
    int n = 0, over3 = 0, over5 = 0;
    void add(double z) {
        z = std::abs(z);
        max_abs_z = std::max(max_abs_z, z);
        ++n;
        if (z > 3.0) ++over3;
        if (z > 5.0) ++over5;
    }
    // <= 5 everywhere and <= 3 at >= 95% of points
    bool ok() const {
        return over5 == 0 && (n == 0 || over3 <= static_cast<int>(0.05 * n));
    }
};

report::Row make_row(const std::string& exp, const std::string& obs, double t,
                     double label, double arg, double est, double se, double exact,
                     const std::string& source, uint64_t seed) {
    report::Row r;
    r.experiment = exp;
    r.observable = obs;
    r.t = t;
    r.label = label;
    r.arg = arg;
    r.estimate = est;
    r.se = se;
    r.exact = exact;
    r.source = source;
    r.seed = seed;
    return r;
}

double zscore(const report::Row& r) {
    if (r.se <= 0.0) return 0.0;
    return (r.estimate - r.exact) / r.se;
}

double binom_se(double p, int n) {
    double v = p * (1.0 - p) / std::max(1, n);
    return std::max(std::sqrt(v), 0.5 / std::max(1, n));
}

// Monte Carlo samples of (X_t(r_1), ..., X_t(r_m)) for the flat system,
// one row per replicate.
std::vector<std::vector<double>> mc_flat(double t, const std::vector<double>& rs,
                                         uint64_t seed, int reps, int threads,
                                         double dt) {
    double c = scale_c(t);
    double denom = std::cbrt(2.0 * t);
    std::vector<long long> labels(rs.size());
    for (size_t k = 0; k < rs.size(); ++k)
        labels[k] = static_cast<long long>(std::floor(-t + c * rs[k]));
    long long m = simulate::choose_window(t, labels);
    int n_steps = static_cast<int>(std::llround(t / dt));
    std::vector<std::vector<double>> out(reps);
    parallel_for(
        reps,
        [&](int rep) {
            simulate::BrownianGrid g(seed, static_cast<uint64_t>(rep), dt, n_steps);
            std::vector<double> x = simulate::evolve_flat(g, m, labels, t);
            std::vector<double> row(rs.size());
            for (size_t k = 0; k < rs.size(); ++k)
                row[k] = -(x[k] + c * rs[k]) / denom;
            out[rep] = std::move(row);
        },
        threads);
    return out;
}

// Monte Carlo positions of the N-particle spaced system x_k(0) = -k at time t.
std::vector<std::vector<double>> mc_spaced(int n_particles, double t, uint64_t seed,
                                           int reps, int threads) {
    double dt = sim_dt(t);
    int n_steps = static_cast<int>(std::llround(t / dt));
    simulate::InitialCondition init;
    init.label_lo = 1;
    for (int k = 1; k <= n_particles; ++k) init.x.push_back(-static_cast<double>(k));
    std::vector<std::vector<double>> out(reps);
    parallel_for(
        reps,
        [&](int rep) {
            simulate::BrownianGrid g(seed, static_cast<uint64_t>(rep), dt, n_steps);
            out[rep] = simulate::evolve_reflect(g, init, t).x;
        },
        threads);
    return out;
}

// P(x_{label} >= a) from spaced-system Fredholm determinant with the
// exponentially conjugated finite kernel.
double spaced_det(double t, const std::vector<long long>& labels,
                  const std::vector<double>& thresholds, int nodes) {
    fredholm::LabelSet ls;
    ls.orientation = fredholm::Orientation::BelowThreshold;
    ls.thresholds = thresholds;
    auto block = [&](int i, double x, int j, double y) {
        return std::exp(y - x) *
               kernels::eval_finite_kernel({x, labels[i]}, {y, labels[j]}, t);
    };
    return fredholm::fredholm_det(fredholm::build_operator(block, ls, nodes));
}

// P(x_2 >= a2 [, x_1 >= a1]) for the N=2 spaced system by literal tensor
// quadrature of the transition density over the ordered region x_2 <= x_1.
double warren_prob2(double t, double a1, double a2) {
    double hi = 2.0 + 6.0 * std::sqrt(t);
    auto outer = quad::panel_nodes(quad::geometric_edges(a2, hi, 0.1, 1.0), 12);
    double acc = 0.0;
    for (size_t i = 0; i < outer.x.size(); ++i) {
        double x2 = outer.x[i];
        double lo1 = std::max(x2, a1);
        if (lo1 >= hi) continue;
        auto inner = quad::panel_nodes(quad::geometric_edges(lo1, hi, 0.1, 1.0), 12);
        double row = 0.0;
        for (size_t j = 0; j < inner.x.size(); ++j)
            row += inner.w[j] *
                   kernels::transition_density({inner.x[j], x2}, {-1.0, -2.0}, t);
        acc += outer.w[i] * row;
    }
    return acc;
}

void finish(ComparisonReport& rep, const ZTracker& zt) {
    rep.max_abs_z = zt.max_abs_z;
    rep.passed = rep.passed && zt.ok();
    rep.summaries.emplace_back("max_abs_z", zt.max_abs_z);
}

}  // namespace

ComparisonReport run_flat_convergence(const config::Config& cfg) {
    ComparisonReport rep;
    rep.experiment = "flat-convergence";
    uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 12345));
    int threads = static_cast<int>(cfg.get_int("threads", 0));
    int reps = static_cast<int>(cfg.get_int("flat.reps", 4000));
    int nodes = static_cast<int>(cfg.get_int("resolution", 40));
    double t_mc = cfg.get_double("flat.t_mc", 10.0);
    // Discrete switch times bias the pathwise maximum low by about
    // 0.8 sqrt(dt) t^{2/3} in rescaled units, so the Monte Carlo branch needs
    // dt shrinking faster than the diffusive step to stay inside a few
    // hundredths; 2.5e-5 t was measured at 0.025 on the t = 10 distribution.
    double dt_mc = cfg.get_double("flat.dt_scale", 2.5e-5) * t_mc;
    double mc_allow = 0.03;
    std::vector<double> t_list = parse_list(cfg.get_string("flat.t_list", "100,1000"));
    std::vector<double> s_grid = parse_list(
        cfg.get_string("flat.s_grid", "-2,-1.5,-1,-0.5,0,0.5,1,1.5,2"));
    ZTracker zt;

    // Finite-t determinant vs limit determinant, one-point at r = 0.
    std::vector<double> airy(s_grid.size());
    for (size_t i = 0; i < s_grid.size(); ++i)
        airy[i] = fredholm::joint_cdf_airy1({{0.0, s_grid[i]}}, nodes);
    std::vector<double> supdist;
    for (double t : t_list) {
        double sup = 0.0;
        for (size_t i = 0; i < s_grid.size(); ++i) {
            double ft = fredholm::joint_cdf_flat(t, {{0.0, s_grid[i]}}, nodes);
            sup = std::max(sup, std::abs(ft - airy[i]));
            rep.rows.push_back(make_row(rep.experiment, "cdf_flat_vs_limit", t, 0.0,
                                        s_grid[i], ft, 0.0, airy[i], "airy1_det",
                                        seed));
        }
        std::ostringstream name;
        name << "supdist_t" << t;
        rep.summaries.emplace_back(name.str(), sup);
        supdist.push_back(sup);
    }
    for (size_t i = 1; i < supdist.size(); ++i)
        rep.passed = rep.passed && supdist[i] <= supdist[i - 1];

    // Monte Carlo vs finite-t determinant at t_mc.  The residual grid bias at
    // dt_scale is folded into the quoted uncertainty.
    auto samples = mc_flat(t_mc, {0.0}, seed, reps, threads, dt_mc);
    for (double s : s_grid) {
        int cnt = 0;
        for (const auto& row : samples) cnt += row[0] <= s ? 1 : 0;
        double p = static_cast<double>(cnt) / reps;
        double se = std::hypot(binom_se(p, reps), mc_allow);
        double ft = fredholm::joint_cdf_flat(t_mc, {{0.0, s}}, nodes);
        report::Row r = make_row(rep.experiment, "cdf_mc_vs_flat", t_mc, 0.0, s, p, se,
                                 ft, "fredholm_flat", seed);
        zt.add(zscore(r));
        rep.rows.push_back(r);
    }

    // Joint two-point block at (r1, r2) = (0, 0.5) on a short diagonal grid.
    auto joint = mc_flat(t_mc, {0.0, 0.5}, seed + 1, reps, threads, dt_mc);
    for (double s : {-1.5, -0.5, 0.5}) {
        int cnt = 0;
        for (const auto& row : joint) cnt += (row[0] <= s && row[1] <= s) ? 1 : 0;
        double p = static_cast<double>(cnt) / reps;
        double se = std::hypot(binom_se(p, reps), mc_allow);
        double ft = fredholm::joint_cdf_flat(t_mc, {{0.0, s}, {0.5, s}}, nodes);
        report::Row r = make_row(rep.experiment, "joint2_mc_vs_flat", t_mc, 0.5, s, p,
                                 se, ft, "fredholm_flat", seed + 1);
        zt.add(zscore(r));
        rep.rows.push_back(r);
    }

    // Degenerate threshold: everything tends to 1.
    double f_hi = fredholm::joint_cdf_flat(t_list.front(), {{0.0, 8.0}}, nodes);
    double a_hi = fredholm::joint_cdf_airy1({{0.0, 8.0}}, nodes);
    rep.passed = rep.passed && std::abs(f_hi - 1.0) < 5e-3 && std::abs(a_hi - 1.0) < 5e-3;
    rep.rows.push_back(make_row(rep.experiment, "degenerate_threshold",
                                t_list.front(), 0.0, 8.0, f_hi, 0.0, 1.0, "limit",
                                seed));
    finish(rep, zt);
    return rep;
}

ComparisonReport run_finiteN_consistency(const config::Config& cfg) {
    ComparisonReport rep;
    rep.experiment = "finite-n";
    uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 12345));
    int threads = static_cast<int>(cfg.get_int("threads", 0));
    int reps = static_cast<int>(cfg.get_int("finite.reps", 20000));
    int nodes = static_cast<int>(cfg.get_int("resolution", 40));
    double t = cfg.get_double("finite.t", 1.0);
    ZTracker zt;

    // N = 2, one label.
    auto s2 = mc_spaced(2, t, seed, reps, threads);
    for (double a : {-2.0, -2.5}) {
        int cnt = 0;
        for (const auto& x : s2) cnt += x[1] >= a ? 1 : 0;
        double p = static_cast<double>(cnt) / reps;
        double se = binom_se(p, reps);
        double det = spaced_det(t, {2}, {a}, nodes);
        report::Row r = make_row(rep.experiment, "p_x2_ge_a", t, 2.0, a, p, se, det,
                                 "fredholm_finite", seed);
        zt.add(zscore(r));
        rep.rows.push_back(r);
        double wq = warren_prob2(t, -1e6, a);
        report::Row rw = make_row(rep.experiment, "det_vs_density_quad", t, 2.0, a,
                                  det, 1e-7, wq, "transition_density", seed);
        zt.add(zscore(rw));
        rep.rows.push_back(rw);
    }

    // N = 2, joint event {x1 >= -1.5, x2 >= -2.5}.
    {
        double a1 = -1.5, a2 = -2.5;
        int cnt = 0;
        for (const auto& x : s2) cnt += (x[0] >= a1 && x[1] >= a2) ? 1 : 0;
        double p = static_cast<double>(cnt) / reps;
        double se = binom_se(p, reps);
        double det = spaced_det(t, {1, 2}, {a1, a2}, nodes);
        report::Row r = make_row(rep.experiment, "p_joint12", t, 12.0, a2, p, se, det,
                                 "fredholm_finite", seed);
        zt.add(zscore(r));
        rep.rows.push_back(r);
        // Adjacent labels put the jump of the one-step indicator down the
        // diagonal of the (1,2) block, so the Nystrom determinant only
        // oscillates within ~1e-3 of the density quadrature; quote that scale.
        double wq = warren_prob2(t, a1, a2);
        report::Row rw = make_row(rep.experiment, "joint_det_vs_density_quad", t, 12.0,
                                  a2, det, 1e-3, wq, "transition_density", seed);
        zt.add(zscore(rw));
        rep.rows.push_back(rw);
    }

    // N = 3, labels {1, 3}: MC vs determinant and the inclusion bound.
    {
        auto s3 = mc_spaced(3, t, seed + 1, reps, threads);
        double a1 = -0.8, a3 = -3.2;
        int cj = 0, c1 = 0, c3 = 0;
        for (const auto& x : s3) {
            bool e1 = x[0] >= a1, e3 = x[2] >= a3;
            cj += (e1 && e3) ? 1 : 0;
            c1 += e1 ? 1 : 0;
            c3 += e3 ? 1 : 0;
        }
        double pj = static_cast<double>(cj) / reps;
        double det_j = spaced_det(t, {1, 3}, {a1, a3}, nodes);
        double det_1 = spaced_det(t, {1}, {a1}, nodes);
        double det_3 = spaced_det(t, {3}, {a3}, nodes);
        report::Row r = make_row(rep.experiment, "p_joint13", t, 13.0, a3, pj,
                                 binom_se(pj, reps), det_j, "fredholm_finite",
                                 seed + 1);
        zt.add(zscore(r));
        rep.rows.push_back(r);
        rep.passed = rep.passed && det_j <= std::min(det_1, det_3) + 1e-9;
        rep.passed = rep.passed &&
                     pj <= std::min(static_cast<double>(c1), static_cast<double>(c3)) /
                                   reps +
                               1e-12;
        rep.rows.push_back(make_row(rep.experiment, "inclusion_margin", t, 13.0, a3,
                                    det_j, 0.0, std::min(det_1, det_3),
                                    "probability_bound", seed + 1));
    }

    // Threshold at the truncation floor: determinant tends to 1.
    double d_free = spaced_det(t, {2}, {-30.0}, nodes);
    rep.passed = rep.passed && std::abs(d_free - 1.0) < 1e-6;
    rep.rows.push_back(make_row(rep.experiment, "floor_threshold", t, 2.0, -30.0,
                                d_free, 0.0, 1.0, "limit", seed));
    finish(rep, zt);
    return rep;
}

ComparisonReport run_tagged(const config::Config& cfg) {
    ComparisonReport rep;
    rep.experiment = "tagged";
    uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 12345));
    int threads = static_cast<int>(cfg.get_int("threads", 0));
    int reps = static_cast<int>(cfg.get_int("tagged.reps", 2000));
    int nodes = static_cast<int>(cfg.get_int("resolution", 40));
    double t = cfg.get_double("tagged.t", 20.0);
    // theta = tau c(t) must stay well under t for the time-offset marginal to
    // be near its limit; tau = 0.25 keeps theta/t below 0.3 at the default t.
    std::vector<double> taus = parse_list(cfg.get_string("tagged.tau", "0,0.25"));
    ZTracker zt;

    // One-point tagged CDFs vs the limit determinants at u = -tau.
    double c = scale_c(t);
    // Grid-sup bias scales like sqrt(dt) t^{2/3}; a refined step keeps it in
    // the same few-hundredth band as the finite-t offset at t = 20.
    double dt = cfg.get_double("tagged.dt_scale", 2.5e-5) * t;
    double theta_max = 0.0;
    for (double tau : taus) theta_max = std::max(theta_max, std::abs(tau) * c);
    int n_steps = static_cast<int>(std::llround((t + theta_max) / dt)) + 2;
    simulate::TaggedParams params;
    for (double tau : taus) {
        params.theta.push_back(tau * c);
        params.u.push_back(-tau);
    }
    params.nu = 0.95;
    std::vector<std::vector<double>> samples(reps);
    parallel_for(
        reps,
        [&](int rep_i) {
            simulate::BrownianGrid g(seed, static_cast<uint64_t>(rep_i), dt, n_steps);
            samples[rep_i] = simulate::rescale_tagged(g, t, params);
        },
        threads);
    for (size_t k = 0; k < taus.size(); ++k) {
        for (double s : {-1.0, 0.0, 1.0}) {
            int cnt = 0;
            for (const auto& row : samples) cnt += row[k] <= s ? 1 : 0;
            double p = static_cast<double>(cnt) / reps;
            double se = binom_se(p, reps);
            double ax = fredholm::joint_cdf_airy1({{-taus[k], s}}, nodes);
            // Finite-t offset plus residual grid bias on top of MC error.
            double se_eff = std::hypot(se, 0.06);
            report::Row r = make_row(rep.experiment, "tagged_cdf_vs_airy1", t,
                                     taus[k], s, p, se_eff, ax, "airy1_det", seed);
            zt.add(zscore(r));
            rep.rows.push_back(r);
        }
    }

    // Decorrelation diagnostic over the t ladder.
    std::vector<double> ladder = parse_list(cfg.get_string("tagged.t_ladder", "50,200"));
    int dreps = static_cast<int>(cfg.get_int("tagged.decor_reps", 2000));
    double eps = cfg.get_double("tagged.eps", 0.25);
    std::vector<double> fractions;
    for (double tl : ladder) {
        double theta = std::pow(tl, 0.4);
        double dtl = sim_dt(tl);
        int nsl = static_cast<int>(std::llround((tl + theta) / dtl)) + 2;
        simulate::TaggedParams dp;
        dp.theta = {0.0, theta};
        dp.u = {0.0, 0.0};
        dp.nu = 0.4 + 1e-9;
        std::vector<double> xi(dreps);
        parallel_for(
            dreps,
            [&](int rep_i) {
                simulate::BrownianGrid g(seed + 7, static_cast<uint64_t>(rep_i), dtl,
                                         nsl);
                std::vector<double> v = simulate::rescale_tagged(g, tl, dp);
                xi[rep_i] = std::abs(v[1] - v[0]);
            },
            threads);
        int cnt = 0;
        for (double v : xi) cnt += v >= eps ? 1 : 0;
        double frac = static_cast<double>(cnt) / dreps;
        fractions.push_back(frac);
        std::ostringstream name;
        name << "decor_p_t" << tl;
        rep.summaries.emplace_back(name.str(), frac);
        rep.rows.push_back(make_row(rep.experiment, "decor_exceed_frac", tl, 0.0, eps,
                                    frac, binom_se(frac, dreps), 0.0,
                                    "shrinks_with_t", seed + 7));
    }
    for (size_t i = 1; i < fractions.size(); ++i)
        rep.passed = rep.passed && fractions[i] < fractions[i - 1];
    finish(rep, zt);
    return rep;
}

ComparisonReport run_step_gue(const config::Config& cfg) {
    ComparisonReport rep;
    rep.experiment = "step-gue";
    uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 12345));
    int threads = static_cast<int>(cfg.get_int("threads", 0));
    int reps = static_cast<int>(cfg.get_int("gue.reps", 10000));
    int n = static_cast<int>(cfg.get_int("gue.n", 2));
    if (n < 1 || n > 4) throw std::invalid_argument("run_step_gue: gue.n in [1,4]");
    ZTracker zt;

    auto run_at = [&](double t, uint64_t sd) {
        double dt = sim_dt(t);
        int n_steps = static_cast<int>(std::llround(t / dt));
        simulate::InitialCondition init;
        init.label_lo = 1;
        init.x.assign(n, 0.0);
        std::vector<double> out(reps);
        parallel_for(
            reps,
            [&](int rep_i) {
                simulate::BrownianGrid g(sd, static_cast<uint64_t>(rep_i), dt, n_steps);
                out[rep_i] = -simulate::evolve_reflect(g, init, t).x[n - 1] /
                             std::sqrt(t);
            },
            threads);
        return out;
    };

    std::vector<double> s_grid;
    for (int i = 0; i < 20; ++i) s_grid.push_back(-2.5 + 6.0 * i / 19.0);

    for (double t : {1.0, 4.0}) {
        auto samples = run_at(t, seed + (t > 1 ? 1 : 0));
        for (double s : s_grid) {
            int cnt = 0;
            for (double v : samples) cnt += v <= s ? 1 : 0;
            double p = static_cast<double>(cnt) / reps;
            // Measured switch-grid allowance at dt = 1e-3 t.
            double se = std::hypot(binom_se(p, reps), 0.004);
            double ex = gue::cdf_lambda_max(n, s);
            report::Row r = make_row(rep.experiment, "gue_top_cdf", t,
                                     static_cast<double>(n), s, p, se, ex,
                                     "gue_hankel", seed);
            zt.add(zscore(r));
            rep.rows.push_back(r);
        }
    }

    if (n == 2) {
        for (double s : {-1.0, 0.0, 1.0, 2.0}) {
            double h = gue::cdf_lambda_max(2, s);
            double q = gue::cdf_lambda_max_quad2(s);
            report::Row r = make_row(rep.experiment, "hankel_vs_quad2", 0.0, 2.0, s, h,
                                     1e-7, q, "tensor_quadrature", seed);
            zt.add(zscore(r));
            rep.rows.push_back(r);
        }
    }
    finish(rep, zt);
    return rep;
}

std::vector<std::string> emit_report(const ComparisonReport& rep,
                                     const config::Config& cfg) {
    std::string out_dir = cfg.get_string("out", "out");
    std::filesystem::create_directories(out_dir);
    report::Csv csv;
    for (const report::Row& r : rep.rows) csv.add(r);
    for (const auto& [name, value] : rep.summaries) {
        report::Row r;
        r.experiment = rep.experiment;
        r.observable = "summary:" + name;
        r.estimate = value;
        r.source = "summary";
        csv.add(r);
    }
    std::string csv_path = out_dir + "/" + rep.experiment + ".csv";
    csv.write(csv_path);
    std::string manifest_path = out_dir + "/manifest.json";
    report::write_manifest(manifest_path, cfg, {csv_path});
    return {csv_path, manifest_path};
}

ComparisonReport run_by_id(const std::string& id, const config::Config& cfg) {
    if (id == "flat-convergence") return run_flat_convergence(cfg);
    if (id == "finite-n") return run_finiteN_consistency(cfg);
    if (id == "tagged") return run_tagged(cfg);
    if (id == "step-gue") return run_step_gue(cfg);
    throw std::invalid_argument("unknown experiment id: " + id);
}

}  // namespace oscbm::experiments
