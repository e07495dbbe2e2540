// Command-line front end: analytic evaluation, Monte Carlo simulation,
// cost optimization and one-command reproduction of the outage-sweep and
// optimal-density experiments. All data outputs are CSV; every run writes
// a .meta sidecar with the fully resolved configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cellnet/analytic.hpp"
#include "cellnet/montecarlo.hpp"
#include "cellnet/optimizer.hpp"
#include "cellnet/pointprocess.hpp"

namespace {

constexpr const char* kVersion = "cellnet 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Options {
    double lambda_b = 0.2;
    double lambda_u = 0.02;
    double lambda_s = 0.01;
    double theta_db = 3.0;
    double theta_linear = 0.0;  // wins over theta_db when set
    double alpha = 3.0;
    double mu = 1.0;
    double pa_A = 1.0;
    double pa_B = 0.0;

    double c1 = 0.0;
    double c2 = 1.0;
    double c3 = 0.0;
    double phi = 1.0;

    std::uint64_t seed = 1;
    std::uint64_t trials = 10000;
    double ci_level = 0.95;
    std::string window = "50x50";
    bool torus = true;
    bool tail_correction = true;
    std::string mode = "silent";        // silent | all-transmit
    std::string estimator = "typical";  // typical | all-served

    double search_low = 1e-3;
    double search_high = 10.0;
    double rel_tol = 1e-8;

    std::string out;
    std::string dump_path;
    std::vector<double> lambda_b_grid;
    std::vector<double> k_grid;

    cellnet::ModelParams model() const {
        cellnet::ModelParams m;
        m.lambda_b = lambda_b;
        m.lambda_u = lambda_u;
        m.lambda_s = lambda_s;
        m.theta = theta_linear > 0.0 ? theta_linear
                                     : cellnet::theta_from_db(theta_db);
        m.alpha = alpha;
        m.mu = mu;
        m.pa_A = pa_A;
        m.pa_B = pa_B;
        m.validate();
        return m;
    }

    cellnet::CostParams costs() const {
        cellnet::CostParams c;
        c.c1 = c1;
        c.c2 = c2;
        c.c3 = c3;
        c.phi = phi;
        c.validate();
        return c;
    }

    cellnet::SimConfig sim() const {
        cellnet::SimConfig s;
        double w = 0.0, h = 0.0;
        if (std::sscanf(window.c_str(), "%lfx%lf", &w, &h) != 2)
            throw cellnet::InvalidParameter(
                "window must have the form <width>x<height>");
        s.window = {w, h, torus};
        s.tail_correction = tail_correction;
        s.trials = trials;
        s.seed = seed;
        s.ci_level = ci_level;
        if (mode == "silent")
            s.mode = cellnet::OutageMode::SilentEmptyCells;
        else if (mode == "all-transmit")
            s.mode = cellnet::OutageMode::AllTransmit;
        else
            throw cellnet::InvalidParameter("mode must be silent|all-transmit");
        if (estimator == "typical")
            s.estimator = cellnet::EstimatorKind::OneTypical;
        else if (estimator == "all-served")
            s.estimator = cellnet::EstimatorKind::AllServed;
        else
            throw cellnet::InvalidParameter(
                "estimator must be typical|all-served");
        s.validate();
        return s;
    }

    cellnet::OptimizeSpec optimize_spec() const {
        cellnet::OptimizeSpec spec;
        spec.search_low = search_low;
        spec.search_high = search_high;
        spec.rel_tol = rel_tol;
        spec.validate();
        return spec;
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path);
    f << content;
    if (!f) throw std::ios_base::failure("write failed: " + path);
}

// Provenance sidecar: resolved configuration in the format the --config
// option reads, so `<command> --config <out>.meta` replays the run.
void write_sidecar(const Options& opt, const std::string& command,
                   const std::string& out_path) {
    if (out_path.empty()) return;
    std::ostringstream meta;
    meta << "# " << kVersion << "\n# command: " << command << "\n";
    auto kv = [&](const char* key, double v) {
        meta << key << '=' << fmt(v) << '\n';
    };
    kv("lambda-b", opt.lambda_b);
    kv("lambda-u", opt.lambda_u);
    kv("lambda-s", opt.lambda_s);
    if (opt.theta_linear > 0.0)
        kv("theta", opt.theta_linear);
    else
        kv("theta-db", opt.theta_db);
    kv("alpha", opt.alpha);
    kv("mu", opt.mu);
    kv("pa-A", opt.pa_A);
    kv("pa-B", opt.pa_B);
    kv("c1", opt.c1);
    kv("c2", opt.c2);
    kv("c3", opt.c3);
    kv("phi", opt.phi);
    meta << "seed=" << opt.seed << '\n' << "trials=" << opt.trials << '\n';
    kv("ci-level", opt.ci_level);
    meta << "window=\"" << opt.window << "\"\n"
         << "torus=" << (opt.torus ? "true" : "false") << '\n'
         << "tail-correction=" << (opt.tail_correction ? "true" : "false")
         << '\n'
         << "mode=\"" << opt.mode << "\"\n"
         << "estimator=\"" << opt.estimator << "\"\n";
    kv("search-low", opt.search_low);
    kv("search-high", opt.search_high);
    kv("rel-tol", opt.rel_tol);
    auto list = [&](const char* key, const std::vector<double>& vs) {
        if (vs.empty()) return;
        meta << key << "=[";
        for (std::size_t i = 0; i < vs.size(); ++i)
            meta << (i ? ", " : "") << fmt(vs[i]);
        meta << "]\n";
    };
    list("lambda-b-grid", opt.lambda_b_grid);
    list("k-grid", opt.k_grid);
    write_file(out_path + ".meta", meta.str());
}

std::string sweep_csv(const std::vector<cellnet::OutageSweepRow>& rows) {
    std::ostringstream os;
    os << "lambda_b,mc_mean,mc_stderr,ci_low,ci_high,analytic_exact,"
          "analytic_asymptotic,alltransmit_mc,alltransmit_stderr,discards\n";
    for (const auto& r : rows)
        os << fmt(r.lambda_b) << ',' << fmt(r.mc_mean) << ','
           << fmt(r.mc_stderr) << ',' << fmt(r.ci_low) << ','
           << fmt(r.ci_high) << ',' << fmt(r.analytic_exact) << ','
           << fmt(r.analytic_asymptotic) << ',' << fmt(r.alltransmit_mc) << ','
           << fmt(r.alltransmit_stderr) << ',' << r.discards << '\n';
    return os.str();
}

std::string gap_csv(const std::vector<cellnet::GapReport>& reports) {
    std::ostringstream os;
    os << "K,closed_form,numeric_exact,numeric_asymptotic,abs_gap,rel_error\n";
    for (const auto& r : reports)
        os << fmt(r.K) << ',' << fmt(r.closed_form) << ','
           << fmt(r.numeric_exact) << ',' << fmt(r.numeric_asymptotic) << ','
           << fmt(r.abs_gap) << ',' << fmt(r.rel_error) << '\n';
    return os.str();
}

std::string estimate_csv(const cellnet::Estimate& e) {
    std::ostringstream os;
    os << "mean,std_error,ci_low,ci_high,trials_used,discards\n"
       << fmt(e.mean) << ',' << fmt(e.std_error) << ',' << fmt(e.ci_low) << ','
       << fmt(e.ci_high) << ',' << e.trials_used << ',' << e.discards << '\n';
    return os.str();
}

void run_analytic(const Options& opt) {
    const auto model = opt.model();
    const double beta = cellnet::beta_integral(model.theta, model.alpha);
    const double p = cellnet::empty_cell_probability(model.lambda_b,
                                                     model.lambda_u);
    const auto p_asym = cellnet::empty_cell_probability_asymptotic(
        model.lambda_b, model.lambda_u);
    const double pout = cellnet::outage_exact(p, beta);
    const auto pout_asym =
        cellnet::outage_asymptotic(model.lambda_b, model.lambda_u, beta);
    const double cable =
        cellnet::cable_length_density(model.lambda_b, model.lambda_s);
    const double power = cellnet::network_power(model, p, false);

    std::ostringstream os;
    os << "lambda_b," << fmt(model.lambda_b) << "\n"
       << "lambda_u," << fmt(model.lambda_u) << "\n"
       << "lambda_s," << fmt(model.lambda_s) << "\n"
       << "theta," << fmt(model.theta) << "\n"
       << "theta_db," << fmt(cellnet::theta_to_db(model.theta)) << "\n"
       << "alpha," << fmt(model.alpha) << "\n"
       << "beta," << fmt(beta) << "\n"
       << "p_empty_exact," << fmt(p) << "\n"
       << "p_empty_asymptotic," << fmt(p_asym.value)
       << (p_asym.flagged ? " (clamped)" : "") << "\n"
       << "p_out_exact," << fmt(pout) << "\n"
       << "p_out_asymptotic," << fmt(pout_asym.value)
       << (pout_asym.flagged ? " (outside asymptotic regime)" : "") << "\n"
       << "cable_length_L," << fmt(cable) << "\n"
       << "power_exact," << fmt(power) << "\n"
       << "power_asymptotic," << fmt(cellnet::network_power(model, p, true))
       << "\n";
    try {
        const auto costs = opt.costs();
        const double k = cellnet::k_ratio(costs, model.lambda_s, model.pa_B);
        os << "cost_exact,"
           << fmt(cellnet::cost(model.lambda_b, model, costs,
                                cellnet::CostMode::Exact, beta))
           << "\n"
           << "cost_asymptotic,"
           << fmt(cellnet::cost(model.lambda_b, model, costs,
                                cellnet::CostMode::Asymptotic, beta))
           << "\n"
           << "lambda_b_star,"
           << fmt(cellnet::optimal_density_closed_form(model, costs, beta))
           << "\n"
           << "K," << fmt(k) << "\n";
    } catch (const cellnet::InvalidParameter&) {
        os << "lambda_b_star,nan\nK,nan\n";
    }
    std::cout << os.str();
    if (!opt.out.empty()) {
        write_file(opt.out, os.str());
        write_sidecar(opt, "analytic", opt.out);
    }
}

void run_simulate_outage(const Options& opt) {
    const auto model = opt.model();
    const auto sim = opt.sim();
    std::vector<double> grid = opt.lambda_b_grid;
    if (grid.empty()) grid = {model.lambda_b};
    const auto rows = cellnet::sweep_outage(model, grid, sim);
    const std::string csv = sweep_csv(rows);
    std::cout << csv;
    if (!opt.out.empty()) {
        write_file(opt.out, csv);
        write_sidecar(opt, "simulate outage", opt.out);
    }
    if (!opt.dump_path.empty()) {
        cellnet::RngStream rng(sim.seed, 0);
        cellnet::NetworkRealization net;
        while (!cellnet::sample_realization(model.lambda_b, model.lambda_u,
                                            model.lambda_s, sim.window, rng,
                                            net)) {
        }
        std::ofstream f(opt.dump_path, std::ios::binary);
        if (!f) throw std::ios_base::failure("cannot open " + opt.dump_path);
        cellnet::write_realization_csv(net, f);
    }
}

void run_simulate_scalar(const Options& opt, const std::string& what) {
    const auto sim = opt.sim();
    std::string csv;
    if (what == "empty-cells") {
        csv = estimate_csv(
            cellnet::estimate_empty_cell_prob(opt.lambda_b, opt.lambda_u, sim));
    } else if (what == "link-distance") {
        csv = estimate_csv(cellnet::estimate_link_distance(opt.lambda_b, sim));
    } else {
        const auto cable =
            cellnet::estimate_cable_length(opt.lambda_b, opt.lambda_s, sim);
        std::ostringstream os;
        os << "reading,mean,std_error,ci_low,ci_high,trials_used,discards\n";
        auto row = [&](const char* name, const cellnet::Estimate& e) {
            os << name << ',' << fmt(e.mean) << ',' << fmt(e.std_error) << ','
               << fmt(e.ci_low) << ',' << fmt(e.ci_high) << ','
               << e.trials_used << ',' << e.discards << '\n';
        };
        row("per_unit_area", cable.per_unit_area);
        row("per_sc_cell", cable.per_sc_cell);
        csv = os.str();
    }
    std::cout << csv;
    if (!opt.out.empty()) {
        write_file(opt.out, csv);
        write_sidecar(opt, "simulate " + what, opt.out);
    }
}

void run_optimize(const Options& opt) {
    const auto model = opt.model();
    const double beta = cellnet::beta_integral(model.theta, model.alpha);
    std::vector<double> ks = opt.k_grid;
    if (ks.empty()) ks = {1, 2, 5, 10, 20, 50, 100};
    const auto reports = cellnet::gap_study(ks, model, beta,
                                            opt.optimize_spec());
    const std::string csv = gap_csv(reports);
    std::cout << csv;
    if (!opt.out.empty()) {
        write_file(opt.out, csv);
        write_sidecar(opt, "optimize", opt.out);
    }
}

void run_reproduce(const Options& opt, const std::string& figure) {
    Options o = opt;
    if (figure == "fig2") {
        if (o.lambda_b_grid.empty())
            for (int i = 0; i < 19; ++i)
                o.lambda_b_grid.push_back(0.04 + 0.02 * i);
        if (o.out.empty()) o.out = "fig2.csv";
        run_simulate_outage(o);
    } else {
        if (o.k_grid.empty()) o.k_grid = {1, 2, 5, 10, 20, 50, 100};
        if (o.out.empty()) o.out = "fig3.csv";
        run_optimize(o);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage and cost analysis of dense cellular networks "
                 "(closed forms + Monte Carlo validation)"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read options from a config file (INI/TOML)");
    app.fallthrough();

    Options opt;
    app.add_option("--lambda-b", opt.lambda_b, "BS density")
        ->capture_default_str();
    app.add_option("--lambda-u", opt.lambda_u, "Mobile density")
        ->capture_default_str();
    app.add_option("--lambda-s", opt.lambda_s, "Switching-center density")
        ->capture_default_str();
    auto* theta_db_opt =
        app.add_option("--theta-db", opt.theta_db, "SIR threshold in dB")
            ->capture_default_str();
    auto* theta_opt =
        app.add_option("--theta", opt.theta_linear, "SIR threshold, linear")
            ->excludes(theta_db_opt);
    theta_db_opt->excludes(theta_opt);
    app.add_option("--alpha", opt.alpha, "Path-loss exponent (> 2)")
        ->capture_default_str();
    app.add_option("--mu", opt.mu, "BS transmit power")->capture_default_str();
    app.add_option("--pa-A", opt.pa_A, "Power model slope")
        ->capture_default_str();
    app.add_option("--pa-B", opt.pa_B, "Power model offset")
        ->capture_default_str();
    app.add_option("--c1", opt.c1, "Cost per unit cable length")
        ->capture_default_str();
    app.add_option("--c2", opt.c2, "Hardware cost per BS")
        ->capture_default_str();
    app.add_option("--c3", opt.c3, "Price per unit power")
        ->capture_default_str();
    app.add_option("--phi", opt.phi, "Outage penalty")->capture_default_str();
    app.add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    app.add_option("--trials", opt.trials, "Monte Carlo trials")
        ->capture_default_str();
    app.add_option("--ci-level", opt.ci_level, "Confidence level")
        ->capture_default_str();
    app.add_option("--window", opt.window, "Simulation window <w>x<h>")
        ->capture_default_str();
    app.add_flag("--torus,!--no-torus", opt.torus,
                 "Wrap the window into a torus")
        ->capture_default_str();
    app.add_flag("--tail-correction,!--no-tail-correction", opt.tail_correction,
                 "Add the mean far-field interference beyond the torus horizon")
        ->capture_default_str();
    app.add_option("--mode", opt.mode, "silent | all-transmit")
        ->capture_default_str();
    app.add_option("--estimator", opt.estimator, "typical | all-served")
        ->capture_default_str();
    app.add_option("--search-low", opt.search_low, "Optimizer bracket low")
        ->capture_default_str();
    app.add_option("--search-high", opt.search_high, "Optimizer bracket high")
        ->capture_default_str();
    app.add_option("--rel-tol", opt.rel_tol, "Optimizer relative tolerance")
        ->capture_default_str();
    app.add_option("--out", opt.out, "Output CSV path");
    app.add_option("--lambda-b-grid", opt.lambda_b_grid,
                   "BS density sweep values");
    app.add_option("--k-grid", opt.k_grid, "K sweep values");

    auto* analytic = app.add_subcommand("analytic",
                                        "Evaluate the closed-form quantities");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimators");
    simulate->require_subcommand(1);
    auto* sim_outage = simulate->add_subcommand("outage", "Outage probability");
    sim_outage->add_option("--dump-realization", opt.dump_path,
                           "Write one sampled realization as CSV");
    auto* sim_empty = simulate->add_subcommand("empty-cells",
                                               "Empty-cell probability");
    auto* sim_link = simulate->add_subcommand("link-distance",
                                              "Typical link distance");
    auto* sim_cable = simulate->add_subcommand("cable", "Cable length");
    auto* optimize = app.add_subcommand("optimize",
                                        "Closed form vs numeric optimum");
    auto* reproduce = app.add_subcommand("reproduce",
                                         "One-command experiment recipes");
    reproduce->require_subcommand(1);
    auto* fig2 = reproduce->add_subcommand("fig2", "Outage vs BS density sweep");
    auto* fig3 = reproduce->add_subcommand("fig3", "Optimal density vs K sweep");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (*analytic) {
            run_analytic(opt);
        } else if (*simulate) {
            if (*sim_outage) run_simulate_outage(opt);
            if (*sim_empty) run_simulate_scalar(opt, "empty-cells");
            if (*sim_link) run_simulate_scalar(opt, "link-distance");
            if (*sim_cable) run_simulate_scalar(opt, "cable");
        } else if (*optimize) {
            run_optimize(opt);
        } else if (*reproduce) {
            run_reproduce(opt, *fig2 ? "fig2" : "fig3");
        }
    } catch (const cellnet::InvalidParameter& e) {
        std::cerr << "error (invalid parameter): " << e.what() << "\n";
        return kExitBadInput;
    } catch (const cellnet::NumericalFailure& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error (I/O): " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
