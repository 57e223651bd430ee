#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oscbm/config.hpp"
#include "oscbm/contour.hpp"
#include "oscbm/experiments.hpp"
#include "oscbm/fredholm.hpp"
#include "oscbm/kernels.hpp"
#include "oscbm/parallel.hpp"
#include "oscbm/report.hpp"
#include "oscbm/simulate.hpp"
#include "oscbm/version.hpp"

namespace {

using oscbm::config::Config;

std::vector<double> default_tau_grid() {
    std::vector<double> g;
    for (double v : {1.01, 1.2, 1.5, 1.9, 2.3, 2.75, 3.4, 4.5, 6.25, 8.5, 12.5, 19.99}) {
        g.push_back(v);
        g.push_back(1.0 - v);  // mirrored points on the negative half
    }
    return g;
}

int cmd_validate_contours(const std::vector<double>& rhos) {
    bool ok = true;
    for (double rho : rhos) {
        oscbm::contour::Diagnostics d =
            oscbm::contour::validate_contour(rho, default_tau_grid());
        std::printf("rho = %.4g: z0 = %.12g, z0* = %.12g, z1* = %.12g\n", rho, d.z0,
                    d.z0_star, d.z1_star);
        for (const auto& c : d.claims) {
            std::printf("  [%s] %-12s margin %.3e\n", c.pass ? "ok" : "FAIL",
                        c.name.c_str(), c.margin);
            ok = ok && c.pass;
        }
    }
    std::printf("%s\n", ok ? "all contour claims hold" : "contour claims FAILED");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-sided reflected Brownian systems: kernels, Fredholm "
                 "determinants, Monte Carlo"};
    app.set_version_flag("--version", std::string(oscbm::version::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    long long seed = -1;
    int threads = -1, resolution = -1;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--resolution", resolution, "quadrature nodes per label");

    auto* sim = app.add_subcommand("simulate", "flat-system ensemble to CSV");
    double sim_t = 10.0;
    int sim_reps = 2000;
    std::vector<double> sim_r = {0.0};
    sim->add_option("--t", sim_t, "time horizon");
    sim->add_option("--reps", sim_reps, "replicates");
    sim->add_option("--r", sim_r, "rescaled observation points r");

    auto* ker = app.add_subcommand("kernel", "evaluate kernels at one point pair");
    double k_t = 1.0, k_x1 = 0.0, k_x2 = 0.0;
    long long k_n1 = 1, k_n2 = 1;
    bool k_scaled = false;
    double k_s1 = 0.0, k_r1 = 0.0, k_s2 = 0.0, k_r2 = 0.0;
    ker->add_option("--t", k_t);
    ker->add_option("--x1", k_x1);
    ker->add_option("--n1", k_n1);
    ker->add_option("--x2", k_x2);
    ker->add_option("--n2", k_n2);
    ker->add_flag("--scaled", k_scaled, "use (s, r) scaled coordinates");
    ker->add_option("--s1", k_s1);
    ker->add_option("--r1", k_r1);
    ker->add_option("--s2", k_s2);
    ker->add_option("--r2", k_r2);

    auto* fred = app.add_subcommand("fredholm", "joint CDF determinants");
    double f_t = 0.0;  // 0 selects the limit process
    std::vector<double> f_r = {0.0}, f_s = {0.0};
    fred->add_option("--t", f_t, "time (0 = limit process)");
    fred->add_option("--r", f_r, "observation points");
    fred->add_option("--s", f_s, "thresholds, one per r");

    auto* expc = app.add_subcommand("experiment", "run a named experiment");
    std::string exp_id;
    expc->add_option("id", exp_id,
                     "flat-convergence | finite-n | tagged | step-gue")
        ->required();

    auto* val = app.add_subcommand("validate-contours", "steep-descent diagnostics");
    std::vector<double> rhos = {0.0, 0.1, 0.5};
    val->add_option("--rho", rhos, "density parameters");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        if (!config_path.empty()) cfg = Config::parse_file(config_path);
        if (seed >= 0) cfg.set("seed", std::to_string(seed));
        if (threads >= 0) cfg.set("threads", std::to_string(threads));
        if (resolution > 0) cfg.set("resolution", std::to_string(resolution));
        if (!out_dir.empty()) cfg.set("out", out_dir);

        if (val->parsed()) return cmd_validate_contours(rhos);

        if (ker->parsed()) {
            if (k_scaled) {
                double v = oscbm::kernels::eval_conjugated_kernel(
                    {k_s1, k_r1, k_t}, {k_s2, k_r2, k_t});
                double a = oscbm::kernels::eval_airy1_kernel(k_s1, k_r1, k_s2, k_r2);
                std::printf("conjugated(t=%g) = %.12g\nairy1 limit   = %.12g\n", k_t,
                            v, a);
            } else {
                double v = oscbm::kernels::eval_flat_kernel({k_x1, k_n1},
                                                            {k_x2, k_n2}, k_t);
                std::printf("flat kernel = %.12g\n", v);
            }
            return 0;
        }

        if (fred->parsed()) {
            if (f_r.size() != f_s.size()) {
                std::fprintf(stderr, "need matching --r/--s lists\n");
                return 2;
            }
            std::vector<std::pair<double, double>> rs;
            for (size_t i = 0; i < f_r.size(); ++i) rs.emplace_back(f_r[i], f_s[i]);
            int nodes = static_cast<int>(cfg.get_int("resolution", 40));
            double v = f_t > 0.0 ? oscbm::fredholm::joint_cdf_flat(f_t, rs, nodes)
                                 : oscbm::fredholm::joint_cdf_airy1(rs, nodes);
            std::printf("%.12g\n", v);
            return 0;
        }

        if (sim->parsed()) {
            uint64_t sd = static_cast<uint64_t>(cfg.get_int("seed", 12345));
            int nthreads = static_cast<int>(cfg.get_int("threads", 0));
            double dt = sim_t <= 10.0 ? 1e-3 * sim_t : 1e-4 * sim_t;
            int n_steps = static_cast<int>(sim_t / dt + 0.5);
            double c = std::pow(2.0, 5.0 / 3.0) * std::pow(sim_t, 2.0 / 3.0);
            std::vector<long long> labels(sim_r.size());
            for (size_t i = 0; i < sim_r.size(); ++i)
                labels[i] = static_cast<long long>(std::floor(-sim_t + c * sim_r[i]));
            long long m = oscbm::simulate::choose_window(sim_t, labels);
            std::vector<std::vector<double>> xs(sim_reps);
            oscbm::parallel_for(
                sim_reps,
                [&](int rep) {
                    oscbm::simulate::BrownianGrid g(sd, static_cast<uint64_t>(rep),
                                                    dt, n_steps);
                    xs[rep] = oscbm::simulate::evolve_flat(g, m, labels, sim_t);
                },
                nthreads);
            oscbm::report::Csv csv;
            for (size_t i = 0; i < sim_r.size(); ++i) {
                std::vector<double> rescaled(sim_reps);
                for (int rep = 0; rep < sim_reps; ++rep)
                    rescaled[rep] =
                        -(xs[rep][i] + c * sim_r[i]) / std::cbrt(2.0 * sim_t);
                auto st = oscbm::simulate::make_stats(
                    "flat_rescaled", sd, rescaled,
                    {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0});
                for (size_t gi = 0; gi < st.grid.size(); ++gi) {
                    oscbm::report::Row row;
                    row.experiment = "simulate";
                    row.observable = st.observable;
                    row.t = sim_t;
                    row.label = sim_r[i];
                    row.arg = st.grid[gi];
                    row.estimate = st.cdf[gi];
                    row.se = st.se[gi];
                    row.source = "monte_carlo";
                    row.seed = sd;
                    csv.add(row);
                }
            }
            std::string dir = cfg.get_string("out", "out");
            std::filesystem::create_directories(dir);
            std::string path = dir + "/simulate.csv";
            csv.write(path);
            oscbm::report::write_manifest(dir + "/manifest.json", cfg, {path});
            std::printf("wrote %s\n", path.c_str());
            return 0;
        }

        if (expc->parsed()) {
            auto rep = oscbm::experiments::run_by_id(exp_id, cfg);
            auto files = oscbm::experiments::emit_report(rep, cfg);
            std::printf("experiment %s: max |z| = %.3g, %s\n", rep.experiment.c_str(),
                        rep.max_abs_z, rep.passed ? "pass" : "FAIL");
            for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
            return rep.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
