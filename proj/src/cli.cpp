#include "alkit/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "alkit/acquisition.hpp"
#include "alkit/bench.hpp"
#include "alkit/designs.hpp"
#include "alkit/gp.hpp"
#include "alkit/sensitivity.hpp"
#include "alkit/testfns.hpp"
#include "alkit/theory.hpp"

namespace alkit {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Vector read_y_csv(const std::string& path, int expected_n) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open response file '" + path + "'");
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "y") continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            if (pos != line.size()) throw std::invalid_argument(line);
            values.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("response file '" + path + "' line " +
                                  std::to_string(lineno) + ": not a number");
        }
    }
    if (static_cast<int>(values.size()) != expected_n) {
        throw ValidationError("response file has " + std::to_string(values.size()) +
                              " values but the design has " +
                              std::to_string(expected_n) + " rows");
    }
    return Eigen::Map<Vector>(values.data(), static_cast<int>(values.size()));
}

Vector evaluate_function_on(const TestFunction& fn, const Matrix& points) {
    if (fn.d != points.cols()) {
        throw ValidationError("function '" + fn.name + "' has dimension " +
                              std::to_string(fn.d) + " but the design has " +
                              std::to_string(points.cols()) + " columns");
    }
    Vector y(points.rows());
    for (int i = 0; i < points.rows(); ++i) y[i] = fn(points.row(i));
    return y;
}

struct CliState {
    std::uint64_t seed = 0;
    std::string out;
    std::string config;

    void need_out(const char* who) const {
        if (out.empty()) {
            throw ValidationError(std::string(who) + ": --out is required");
        }
    }
    void reject_config(const char* who) const {
        if (!config.empty()) {
            throw ValidationError(std::string(who) +
                                  ": --config only applies to emulate and optimize");
        }
    }
};

int cmd_design(const CliState& st, const std::string& generator, int d, int n, int l,
               int iters, int skip) {
    st.need_out("design");
    st.reject_config("design");
    const DesignGenerator gen = design_generator_from_string(generator);
    DesignMatrix design;
    switch (gen) {
        case DesignGenerator::Mofat:
            design = mofat_heuristic(d, l, st.seed, iters);
            break;
        case DesignGenerator::MaximinLhd:
            design = maximin_lhd(n, d, st.seed, iters);
            break;
        case DesignGenerator::MaxPro:
            design = maxpro_design(n, d, st.seed, iters);
            break;
        case DesignGenerator::Sobol:
            design = sobol_points(n, d, skip);
            break;
        case DesignGenerator::Random:
            design = random_design(n, d, st.seed);
            break;
        default:
            throw ValidationError("design: generator '" + generator +
                                  "' cannot be generated");
    }
    write_design_csv(design, st.out);
    std::cout << "wrote " << design.n() << " x " << design.d() << " "
              << to_string(design.generator) << " design to " << st.out << "\n";
    return 0;
}

int cmd_fit(const CliState& st, const std::string& design_path, const std::string& y_path,
            const std::string& function, const std::string& family_name) {
    st.need_out("fit");
    st.reject_config("fit");
    if (y_path.empty() == function.empty()) {
        throw ValidationError("fit: give exactly one of --y or --function");
    }
    const DesignMatrix design = read_design_csv(design_path);
    const Vector y = y_path.empty()
                         ? evaluate_function_on(find_function(function), design.points)
                         : read_y_csv(y_path, design.n());
    FitOptions options;
    options.seed = st.seed;
    const GPModel model = fit(design.points, y, kernel_family_from_string(family_name),
                              options);
    save_model(model, st.out);
    std::cout << "family=" << to_string(model.spec.family) << " n=" << model.n()
              << " d=" << model.d() << "\n";
    std::cout << "theta=";
    for (int k = 0; k < model.d(); ++k) {
        std::cout << (k ? "," : "") << fmt17(model.spec.theta[k]);
    }
    std::cout << "\n";
    if (family_uses_alpha(model.spec.family)) {
        std::cout << "alpha=" << fmt17(model.spec.alpha) << "\n";
    }
    std::cout << "mu=" << fmt17(model.mu) << " sigma2=" << fmt17(model.sigma2) << "\n";
    if (!model.constant) std::cout << "nll=" << fmt17(model.nll) << "\n";
    std::cout << "model written to " << st.out << "\n";
    return 0;
}

ExperimentConfig build_experiment(const CliState& st, CLI::App* cmd,
                                  const std::string& function,
                                  const std::string& family,
                                  const std::string& generator, int l, int n_init,
                                  int budget, int n_test, int n_seeds,
                                  int design_iters, bool no_timestamp,
                                  bool no_baseline) {
    ExperimentConfig config;
    if (!st.config.empty()) apply_config_file(config, st.config);
    auto given = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;  // optimize has no --n-test
    };
    if (given("--function")) config.function = function;
    if (given("--family")) config.family = kernel_family_from_string(family);
    if (given("--generator")) config.generator = generator;
    if (given("--l")) config.l = l;
    if (given("--n-init")) config.n_init = n_init;
    if (given("--budget")) config.budget = budget;
    if (given("--n-test")) config.n_test = n_test;
    if (given("--n-seeds")) config.n_seeds = n_seeds;
    if (given("--design-iters")) config.design_iters = design_iters;
    if (no_timestamp) config.include_timing = false;
    if (no_baseline) config.with_baseline = false;
    config.seed = st.seed;
    if (!st.out.empty()) config.out_dir = st.out;
    if (config.out_dir.empty()) {
        throw ValidationError("emulate/optimize: give --out (or out= in the config)");
    }
    return config;
}

int cmd_screen(const CliState& st, const std::string& model_path,
               const std::string& design_path, const std::string& y_path,
               const std::string& family_name, int n_samples) {
    st.need_out("screen");
    st.reject_config("screen");
    const bool from_model = !model_path.empty();
    if (from_model == (!design_path.empty() || !y_path.empty())) {
        throw ValidationError("screen: give either --model or --design with --y");
    }

    GPModel model;
    DesignMatrix design;
    Vector y;
    bool have_blocks = false;
    if (from_model) {
        model = load_model(model_path);
    } else {
        if (design_path.empty() || y_path.empty()) {
            throw ValidationError("screen: --design and --y go together");
        }
        design = read_design_csv(design_path);
        y = read_y_csv(y_path, design.n());
        FitOptions options;
        options.seed = st.seed;
        model = fit(design.points, y, kernel_family_from_string(family_name), options);
        have_blocks = !design.blocks.empty();
    }

    const SobolReport report = total_sobol(
        [&model](const Vector& x) { return predict(model, x).mean; }, model.d(),
        n_samples, st.seed);

    ElementaryEffects effects;
    if (have_blocks) effects = elementary_effects(design, y);

    std::ofstream out(st.out);
    if (!out) throw ValidationError("cannot open '" + st.out + "' for writing");
    out << "# " << kVersion << " screening report\n";
    out << "# estimator=" << report.estimator << " n_samples=" << report.n_samples
        << " seed=" << report.seed << "\n";
    out << "factor,total_index,mu_star,sigma\n";
    for (int k = 0; k < model.d(); ++k) {
        out << k + 1 << "," << fmt17(report.total_indices[k]) << ",";
        if (have_blocks) {
            out << fmt17(effects.mu_star[k]) << "," << fmt17(effects.sigma[k]);
        } else {
            out << ",";
        }
        out << "\n";
    }
    if (!out) throw ValidationError("failed while writing '" + st.out + "'");
    std::cout << "screening report written to " << st.out << "\n";
    return 0;
}

int cmd_check_theory(const CliState& st, const std::string& corpus_path, double tol) {
    st.reject_config("check-theory");
    const std::vector<TheoryInstance> corpus =
        corpus_path.empty() ? theory_corpus() : load_theory_corpus(corpus_path);
    int failures = 0;
    double worst = 0.0;
    for (const auto& inst : corpus) {
        const auto rep1 = theorem1_check(inst.design, inst.x, inst.alpha,
                                         {1e-1, 1e-2, 1e-3}, tol);
        const auto rep2 = theorem2_check(inst.design, inst.x, inst.alpha,
                                         {1e-1, 1e-2, 1e-3}, tol);
        const auto sandwich = sandwich_check(
            KernelSpec::isotropic(KernelFamily::MIM, static_cast<int>(inst.design.cols()),
                                  0.1, inst.alpha),
            inst.design, inst.x);
        worst = std::max({worst, rep1.relative_errors.back(),
                          rep2.relative_errors.back()});
        if (!rep1.converged || !rep2.converged || !sandwich.ordered) ++failures;
    }
    if (!st.out.empty()) write_theory_report_csv(corpus, st.out, tol);
    std::cout << corpus.size() << " instances, worst final relative error "
              << fmt17(worst) << ", " << failures << " failures\n";
    if (failures > 0) {
        std::cerr << "check-theory: " << failures << " instance(s) exceeded tol=" << tol
                  << "\n";
        throw NumericalError("limit checks failed");
    }
    return 0;
}

int cmd_plot(const CliState& st, const std::string& summary_path) {
    st.need_out("plot");
    st.reject_config("plot");
    plot_summary(summary_path, st.out);
    std::cout << "plot written to " << st.out << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Active-learning toolkit: GP surrogates, screening designs and "
                 "sequential acquisition on the unit hypercube"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CliState st;
    app.add_option("--seed", st.seed, "master random seed")->capture_default_str();
    app.add_option("--out", st.out, "output file or directory");
    app.add_option("--config", st.config, "key=value config file (emulate/optimize)");

    // --seed/--out/--config live on the main app; fallthrough lets them be
    // written after the subcommand name as well
    auto* design = app.add_subcommand("design", "generate a design CSV");
    design->fallthrough();
    std::string d_generator = "mofat";
    int d_d = 0, d_n = 0, d_l = 4, d_iters = 10000, d_skip = 1;
    design->add_option("--generator", d_generator,
                       "mofat|maximin_lhd|maxpro|sobol|random")
        ->capture_default_str();
    design->add_option("--d", d_d, "dimension")->required();
    design->add_option("--n", d_n, "points (non-mofat generators)");
    design->add_option("--l", d_l, "mofat blocks")->capture_default_str();
    design->add_option("--iters", d_iters, "optimization proposals")
        ->capture_default_str();
    design->add_option("--skip", d_skip, "sobol: points to drop")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a surrogate and save it");
    fit_cmd->fallthrough();
    std::string f_design, f_y, f_function, f_family = "mim";
    fit_cmd->add_option("--design", f_design, "design CSV")->required();
    fit_cmd->add_option("--y", f_y, "response CSV (one column)");
    fit_cmd->add_option("--function", f_function, "evaluate a named test function");
    fit_cmd->add_option("--family", f_family, "gaussian|im|mim|expprod")
        ->capture_default_str();

    // emulate / optimize
    std::string e_function, e_family = "mim", e_generator = "mofat";
    int e_l = 4, e_n_init = 0, e_budget = 0, e_n_test = 1000, e_n_seeds = 10;
    int e_design_iters = 10000;
    bool e_no_timestamp = false, e_no_baseline = false;
    auto add_experiment_flags = [&](CLI::App* cmd, bool emulation) {
        cmd->add_option("--function", e_function, "catalog function name");
        cmd->add_option("--family", e_family, "gaussian|im|mim|expprod");
        cmd->add_option("--generator", e_generator,
                        "mofat|maximin_lhd|maxpro|sobol|random");
        cmd->add_option("--l", e_l, "mofat blocks");
        cmd->add_option("--n-init", e_n_init, "initial points (non-mofat)");
        cmd->add_option("--budget", e_budget, "total evaluations");
        cmd->add_option("--n-seeds", e_n_seeds, "replicates");
        cmd->add_option("--design-iters", e_design_iters, "design optimization effort");
        cmd->add_flag("--no-timestamp", e_no_timestamp,
                      "suppress wall-clock columns for reproducible output");
        if (emulation) {
            cmd->add_option("--n-test", e_n_test, "test points for MSE");
            cmd->add_flag("--no-baseline", e_no_baseline, "skip one-shot baselines");
        }
    };
    auto* emulate = app.add_subcommand("emulate", "active-learning emulation runs");
    emulate->fallthrough();
    add_experiment_flags(emulate, true);
    auto* optimize = app.add_subcommand("optimize", "sequential optimization runs");
    optimize->fallthrough();
    add_experiment_flags(optimize, false);

    // screen
    auto* screen = app.add_subcommand("screen", "sensitivity screening of a surrogate");
    screen->fallthrough();
    std::string s_model, s_design, s_y, s_family = "mim";
    int s_samples = 8192;
    screen->add_option("--model", s_model, "saved model file");
    screen->add_option("--design", s_design, "design CSV (with --y)");
    screen->add_option("--y", s_y, "response CSV (with --design)");
    screen->add_option("--family", s_family, "kernel family when fitting here")
        ->capture_default_str();
    screen->add_option("--n-samples", s_samples, "Sobol' sample size")
        ->capture_default_str();

    // check-theory
    auto* check = app.add_subcommand("check-theory", "verify the small-theta limits");
    check->fallthrough();
    std::string c_corpus;
    double c_tol = 0.01;
    check->add_option("--corpus", c_corpus, "alternate corpus JSON");
    check->add_option("--tol", c_tol, "relative error tolerance")->capture_default_str();

    // plot
    auto* plot = app.add_subcommand("plot", "render a summary CSV as SVG");
    plot->fallthrough();
    std::string p_summary;
    plot->add_option("--summary", p_summary, "summary CSV")->required();

    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.emplace_back("alkit");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(full.size());
    for (auto& s : full) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (design->parsed()) {
            return cmd_design(st, d_generator, d_d, d_n, d_l, d_iters, d_skip);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(st, f_design, f_y, f_function, f_family);
        }
        if (emulate->parsed() || optimize->parsed()) {
            CLI::App* cmd = emulate->parsed() ? emulate : optimize;
            const ExperimentConfig config = build_experiment(
                st, cmd, e_function, e_family, e_generator, e_l, e_n_init, e_budget,
                e_n_test, e_n_seeds, e_design_iters, e_no_timestamp, e_no_baseline);
            const auto rows = emulate->parsed() ? run_emulation(config)
                                                : run_optimization(config);
            std::cout << "wrote " << rows.size() << " summary rows to "
                      << config.out_dir << "/summary.csv\n";
            return 0;
        }
        if (screen->parsed()) {
            return cmd_screen(st, s_model, s_design, s_y, s_family, s_samples);
        }
        if (check->parsed()) {
            return cmd_check_theory(st, c_corpus, c_tol);
        }
        if (plot->parsed()) {
            return cmd_plot(st, p_summary);
        }
        throw ValidationError("no subcommand given");
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace alkit
