#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>

#include "pipeflow/config.hpp"
#include "pipeflow/io.hpp"
#include "pipeflow/poiseuille.hpp"

namespace {

using namespace pipeflow;

struct Overrides {
    std::string config;
    std::string out;
    std::string alpha;
    int order = 0;
    double tol = 0.0;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
    auto* c = cmd->add_option("--config", o.config, "JSON config file");
    if (config_required) c->required();
    cmd->add_option("--out", o.out, "output directory (default from config, else .)");
    cmd->add_option("--alpha", o.alpha, "alpha list \"a,b,c\" or range min:max:count:log|lin");
    cmd->add_option("--order", o.order, "series order N");
    cmd->add_option("--tol", o.tol, "solver tolerance override, in [1e-14, 1e-6]");
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.alpha.empty()) {
        cfg.alphas = parse_alpha_spec(o.alpha);
        cfg.alphas_specified = true;
    }
    if (o.order > 0) cfg.order = o.order;
    if (o.tol != 0.0) {
        if (!(o.tol >= 1e-14 && o.tol <= 1e-6)) {
            throw ConfigError("--tol must lie in [1e-14, 1e-6]");
        }
        cfg.tol = o.tol;
    }
    if (!o.out.empty()) cfg.out_dir = o.out;
    return cfg;
}

std::shared_ptr<const TriMesh> build_mesh(const RunConfig& cfg) {
    TriMesh m = polar_mesh(cfg.section, cfg.rings, cfg.sectors);
    for (int l = 0; l < cfg.level; ++l) m = refine(m);
    return std::make_shared<const TriMesh>(std::move(m));
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir);
    const std::string path = cfg.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path);
    return out;
}

int sweep_thread_cap() {
    const char* env = std::getenv("PIPEFLOW_THREADS");
    if (!env) return 0;
    const int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

SolveOptions solver_opts(const RunConfig& cfg) {
    SolveOptions o;
    o.tol = cfg.tol;
    return o;
}

void run_solve(const Overrides& o) {
    const RunConfig cfg = resolve(o);
    if (cfg.alphas.empty()) throw ConfigError("config: \"alpha\": one value required for solve");
    auto mesh = build_mesh(cfg);
    const RobinSolution sol = solve_robin(mesh, cfg.alphas.front(), solver_opts(cfg));

    auto csv = open_out(cfg, "solution.csv");
    csv << "x,y,phi\n";
    for (int i = 0; i < mesh->n_vertices(); ++i) {
        csv << fmt_num(mesh->vertices[i].x) << ',' << fmt_num(mesh->vertices[i].y)
            << ',' << fmt_num(sol.field.values[i]) << '\n';
    }
    write_vtk(*mesh, {{"phi", &sol.field}}, cfg.out_dir + "/solution.vtk");

    std::cout << "alpha=" << fmt_num(sol.alpha) << '\n'
              << "forcing_constant=" << fmt_num(sol.forcing_constant) << '\n'
              << "grad_l2=" << fmt_num(sol.grad_l2) << '\n'
              << "flux=" << fmt_num(sol.flux) << '\n';
    // both hold for every closed form known; reported, never enforced
    if (!sol.positive) std::cout << "warning_negative_nodes=1\n";
    if (sol.forcing_constant < -1e-10) std::cout << "warning_negative_constant=1\n";
}

void run_sweep(const Overrides& o) {
    const RunConfig cfg = resolve(o);
    std::vector<double> grid = cfg.alphas;
    if (!cfg.alphas_specified) grid = default_sweep_grid();
    if (grid.empty()) throw ConfigError("config: \"alpha\": empty list");
    auto mesh = build_mesh(cfg);
    const SweepReport report =
        sweep_alpha(mesh, grid, solver_opts(cfg), sweep_thread_cap());

    auto csv = open_out(cfg, "sweep.csv");
    csv << "alpha,grad_l2,bound_ratio\n";
    for (const auto& r : report.rows) {
        csv << fmt_num(r.alpha) << ',' << fmt_num(r.grad_l2) << ','
            << fmt_num(r.bound_ratio) << '\n';
    }
    std::cout << "fitted_C=" << fmt_num(report.fitted_C) << '\n'
              << "small_alpha_slope=" << fmt_num(report.small_alpha_slope) << '\n'
              << "grad_monotone=" << (report.grad_monotone ? 1 : 0) << '\n';
}

void run_series(const Overrides& o) {
    const RunConfig cfg = resolve(o);
    auto mesh = build_mesh(cfg);
    const ExpansionReport report = series_terms(mesh, cfg.order, solver_opts(cfg));

    auto csv = open_out(cfg, "series.csv");
    csv << "n,const_n,h1_norm,ratio\n";
    for (std::size_t i = 0; i < report.terms.size(); ++i) {
        const auto& t = report.terms[i];
        const double ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                    : t.h1_norm / report.terms[i - 1].h1_norm;
        csv << t.n << ',' << fmt_num(t.const_n) << ',' << fmt_num(t.h1_norm) << ','
            << fmt_num(ratio) << '\n';
    }

    std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{0.5}
                                                    : cfg.alphas;
    auto cmp = open_out(cfg, "series_vs_direct.csv");
    cmp << "alpha,l2_diff,tail_bound\n";
    for (double a : alphas) {
        const SeriesSum sum = series_sum(report, a, /*strict=*/false);
        if (!sum.within_radius) {
            std::cerr << "warning: alpha=" << fmt_num(a)
                      << " outside the estimated series radius\n";
        }
        const RobinSolution direct = solve_robin(mesh, a, solver_opts(cfg));
        ScalarField diff{mesh, sum.field.values};
        for (std::size_t i = 0; i < diff.values.size(); ++i) {
            diff.values[i] -= direct.field.values[i];
        }
        cmp << fmt_num(a) << ',' << fmt_num(l2_norm(diff)) << ','
            << fmt_num(sum.tail_bound) << '\n';
    }
    std::cout << "ratio_estimate=" << fmt_num(report.ratio_estimate) << '\n'
              << "radius_estimate=" << fmt_num(report.radius_estimate) << '\n';
}

void run_limit(const Overrides& o) {
    const RunConfig cfg = resolve(o);
    std::vector<double> alphas = cfg.alphas.empty()
                                     ? std::vector<double>{10.0, 100.0, 1000.0}
                                     : cfg.alphas;
    auto mesh = build_mesh(cfg);
    auto csv = open_out(cfg, "dirichlet_gap.csv");
    csv << "alpha,gap,bound\n";
    for (double a : alphas) {
        const DirichletGap g = dirichlet_gap(mesh, a, solver_opts(cfg));
        csv << fmt_num(a) << ',' << fmt_num(g.gap) << ',' << fmt_num(g.bound) << '\n';
        std::cout << "alpha=" << fmt_num(a) << " gap=" << fmt_num(g.gap)
                  << " bound=" << fmt_num(g.bound) << '\n';
    }
}

void run_critical_flux(const std::string& alpha_spec) {
    std::vector<double> grid =
        alpha_spec.empty()
            ? std::vector<double>{0, 0.5, 1, 2, 4, 8, 16, 32, 64, 128, 512, 1024}
            : parse_alpha_spec(alpha_spec);
    const CriticalFluxReport report = critical_flux_disk(std::move(grid));
    for (const auto& r : report.rows) {
        std::cout << "alpha=" << fmt_num(r.alpha)
                  << " threshold=" << fmt_num(r.threshold) << '\n';
    }
    std::cout << "phi0_alpha=" << report.infimum_alpha << '\n'
              << "phi0=" << fmt_num(report.infimum) << '\n'
              << "monotonicity=" << report.monotonicity << '\n';
}

void run_growth(const std::string& path, double C, double m, double tau1) {
    const std::vector<GrowthSample> samples = read_growth_csv(path);
    const GrowthVerdict verdict = classify(samples, {C, m, tau1});
    std::cout << "verdict=" << to_string(verdict.classification) << '\n'
              << "exponent=" << fmt_num(verdict.exponent) << '\n';
    if (std::isfinite(verdict.witness)) {
        std::cout << "witness=" << fmt_num(verdict.witness) << '\n';
    }
    std::cout << "note=" << verdict.note << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poiseuille profiles on smooth cross-sections under Navier-slip"};
    app.require_subcommand(1);
    app.footer("Environment:\n  PIPEFLOW_THREADS  caps the parallelism of per-alpha sweep solves");

    Overrides solve_o, sweep_o, series_o, limit_o;
    std::string cf_alpha, growth_file, growth_tau1;
    double growth_C = 1.0, growth_m = 1.5, growth_t1 = 0.0;

    add_common(app.add_subcommand("solve", "solve one Robin profile, emit CSV/VTK"),
               solve_o, true);
    add_common(app.add_subcommand("sweep", "gradient-bound sweep over alpha"),
               sweep_o, true);
    add_common(app.add_subcommand("series", "power-series terms and comparison"),
               series_o, true);
    add_common(app.add_subcommand("limit", "gap to the no-slip (Dirichlet) limit"),
               limit_o, true);

    auto* cf = app.add_subcommand("critical-flux", "disk uniqueness thresholds");
    cf->add_option("--alpha", cf_alpha, "alpha list or range");

    auto* gr = app.add_subcommand("growth", "classify growth samples (CSV: zeta,Y)");
    gr->add_option("samples", growth_file, "two-column CSV with header zeta,Y")->required();
    gr->add_option("C", growth_C, "majorant constant C > 0")->required();
    gr->add_option("m", growth_m, "majorant exponent m > 1")->required();
    gr->add_option("--tau1", growth_t1, "majorant threshold tau1 >= 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("solve")) run_solve(solve_o);
        else if (app.got_subcommand("sweep")) run_sweep(sweep_o);
        else if (app.got_subcommand("series")) run_series(series_o);
        else if (app.got_subcommand("limit")) run_limit(limit_o);
        else if (app.got_subcommand("critical-flux")) run_critical_flux(cf_alpha);
        else if (app.got_subcommand("growth")) run_growth(growth_file, growth_C, growth_m, growth_t1);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
