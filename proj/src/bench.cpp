#include "alkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "alkit/designs.hpp"
#include "alkit/numeric.hpp"
#include "alkit/testfns.hpp"

namespace alkit {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct SeedStats {
    double mean = 0.0;
    double stderr_ = 0.0;
};

SeedStats seed_stats(const std::vector<double>& values) {
    const int m = static_cast<int>(values.size());
    SeedStats s;
    s.mean = pairwise_sum(values) / m;
    if (m > 1) {
        std::vector<double> sq;
        sq.reserve(values.size());
        for (double v : values) sq.push_back((v - s.mean) * (v - s.mean));
        s.stderr_ = std::sqrt(pairwise_sum(sq) / (m - 1)) / std::sqrt(double(m));
    }
    return s;
}

DesignMatrix make_initial_design(const ExperimentConfig& config, int d,
                                 std::uint64_t run_seed) {
    const DesignGenerator gen = design_generator_from_string(config.generator);
    switch (gen) {
        case DesignGenerator::Mofat:
            return mofat_heuristic(d, config.l, run_seed, config.design_iters);
        case DesignGenerator::MaximinLhd:
            return maximin_lhd(config.n_init, d, run_seed, config.design_iters);
        case DesignGenerator::MaxPro:
            return maxpro_design(config.n_init, d, run_seed, config.design_iters);
        case DesignGenerator::Sobol:
            return sobol_points(config.n_init, d,
                                1 + static_cast<int>(splitmix64(run_seed) % 1024));
        case DesignGenerator::Random:
            return random_design(config.n_init, d, run_seed);
        default:
            throw ValidationError("generator: '" + config.generator +
                                  "' cannot seed an experiment");
    }
}

int initial_size(const ExperimentConfig& config, int d) {
    if (design_generator_from_string(config.generator) == DesignGenerator::Mofat) {
        return config.l * (d + 1);
    }
    return config.n_init;
}

double test_mse(const GPModel& model, const Matrix& test_x, const Vector& truth) {
    Vector means, vars;
    batch_predict(model, test_x, means, vars);
    std::vector<double> sq(static_cast<std::size_t>(truth.size()));
    for (int i = 0; i < truth.size(); ++i) {
        const double e = means[i] - truth[i];
        sq[static_cast<std::size_t>(i)] = e * e;
    }
    return pairwise_sum(sq) / static_cast<double>(truth.size());
}

std::string condition_name(const ExperimentConfig& config) {
    return config.generator + "_" + to_string(config.family);
}

void write_outputs(const ExperimentConfig& config, const std::vector<RunLog>& logs,
                   const std::vector<SummaryRow>& rows) {
    if (config.out_dir.empty()) return;
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const auto path = dir / ("run_" + condition_name(config) + "_seed" +
                                 std::to_string(i) + ".csv");
        write_runlog_csv(logs[i], path.string(), config.include_timing);
    }
    std::vector<std::string> comments;
    comments.push_back(std::string(kVersion) + " summary");
    comments.push_back("function=" + config.function + " family=" +
                       to_string(config.family) + " generator=" + config.generator +
                       " budget=" + std::to_string(config.budget) +
                       " n_seeds=" + std::to_string(config.n_seeds) +
                       " seed=" + std::to_string(config.seed));
    write_summary_csv(rows, (dir / "summary.csv").string(), comments);
}

}  // namespace

void ExperimentConfig::validate(bool emulation) const {
    if (function.empty()) throw ValidationError("function: must be set");
    const TestFunction fn = find_function(function);
    const DesignGenerator gen = design_generator_from_string(generator);
    if (gen == DesignGenerator::Mofat) {
        if (l < 1) throw ValidationError("l: must be >= 1 for mofat designs");
    } else if (gen == DesignGenerator::Imported) {
        throw ValidationError("generator: imported designs cannot seed an experiment");
    } else if (n_init < 2) {
        throw ValidationError("n_init: must be >= 2 for generator '" + generator + "'");
    }
    const int n0 = gen == DesignGenerator::Mofat ? l * (fn.d + 1) : n_init;
    if (budget < n0) {
        throw ValidationError("budget: must be >= the initial design size (" +
                              std::to_string(n0) + ")");
    }
    if (emulation && n_test < 1) throw ValidationError("n_test: must be >= 1");
    if (n_seeds < 1) throw ValidationError("n_seeds: must be >= 1");
    if (design_iters < 0) throw ValidationError("design_iters: must be >= 0");
}

std::vector<SummaryRow> run_emulation(const ExperimentConfig& config) {
    config.validate(true);
    const TestFunction fn = find_function(config.function);
    const int d = fn.d;
    const int n0 = initial_size(config, d);

    const Matrix test_x = sobol_points(config.n_test, d, 1).points;
    Vector truth(config.n_test);
    for (int i = 0; i < config.n_test; ++i) truth[i] = fn(test_x.row(i));

    const std::string condition = condition_name(config);
    const int n_curve = config.budget - n0 + 1;
    std::vector<std::vector<double>> curves(
        static_cast<std::size_t>(n_curve),
        std::vector<double>(static_cast<std::size_t>(config.n_seeds)));
    std::vector<RunLog> logs;

    for (int s = 0; s < config.n_seeds; ++s) {
        const std::uint64_t run_seed = hash64(config.seed, static_cast<std::uint64_t>(s));
        const DesignMatrix init = make_initial_design(config, d, run_seed);

        AcquisitionSpec acq;
        acq.kind = AcquisitionKind::ALM;
        acq.optimizer.seed = hash64(run_seed, 0xacd);
        FitOptions fit_opts;
        fit_opts.seed = hash64(run_seed, 0xf17);

        const auto observer = [&](int n_evals, const GPModel& model) {
            curves[static_cast<std::size_t>(n_evals - n0)][static_cast<std::size_t>(s)] =
                test_mse(model, test_x, truth);
        };
        RunResult res = run_active_learning([&fn](const Vector& x) { return fn(x); },
                                            init, config.budget, config.family, acq,
                                            fit_opts, observer);
        res.log.function_name = config.function;
        res.log.seed = run_seed;
        logs.push_back(std::move(res.log));
    }

    std::vector<SummaryRow> rows;
    for (int i = 0; i < n_curve; ++i) {
        const SeedStats st = seed_stats(curves[static_cast<std::size_t>(i)]);
        rows.push_back({condition, "mse", n0 + i, st.mean, st.stderr_, config.n_seeds,
                        false});
    }

    if (config.with_baseline) {
        // single-batch reference: a maxpro design of the full budget, fit once,
        // with the configured kernel and (if different) the gaussian one
        std::vector<KernelFamily> families{config.family};
        if (config.family != KernelFamily::Gaussian) {
            families.push_back(KernelFamily::Gaussian);
        }
        int cond_idx = 0;
        for (const KernelFamily fam : families) {
            std::vector<double> finals(static_cast<std::size_t>(config.n_seeds));
            for (int s = 0; s < config.n_seeds; ++s) {
                const std::uint64_t run_seed =
                    hash64(config.seed, static_cast<std::uint64_t>(s));
                const std::uint64_t dseed =
                    hash64(run_seed, 0xba5e + static_cast<std::uint64_t>(cond_idx));
                const DesignMatrix design =
                    maxpro_design(config.budget, d, dseed, config.design_iters);
                Vector y(config.budget);
                for (int i = 0; i < config.budget; ++i) y[i] = fn(design.points.row(i));
                FitOptions fit_opts;
                fit_opts.seed = hash64(dseed, 0xf17);
                const GPModel model = fit(design.points, y, fam, fit_opts);
                finals[static_cast<std::size_t>(s)] = test_mse(model, test_x, truth);
            }
            const SeedStats st = seed_stats(finals);
            rows.push_back({"baseline_maxpro_" + to_string(fam), "mse", config.budget,
                            st.mean, st.stderr_, config.n_seeds, true});
            ++cond_idx;
        }
    }

    write_outputs(config, logs, rows);
    return rows;
}

std::vector<SummaryRow> run_optimization(const ExperimentConfig& config) {
    config.validate(false);
    const TestFunction fn = find_function(config.function);
    const int d = fn.d;
    const int n0 = initial_size(config, d);
    const std::string condition = condition_name(config);

    const int n_curve = config.budget - n0 + 1;
    std::vector<std::vector<double>> best_curves(
        static_cast<std::size_t>(n_curve),
        std::vector<double>(static_cast<std::size_t>(config.n_seeds)));
    std::vector<RunLog> logs;

    for (int s = 0; s < config.n_seeds; ++s) {
        const std::uint64_t run_seed = hash64(config.seed, static_cast<std::uint64_t>(s));
        const DesignMatrix init = make_initial_design(config, d, run_seed);

        AcquisitionSpec acq;
        acq.kind = AcquisitionKind::EI;
        acq.optimizer.seed = hash64(run_seed, 0xacd);
        FitOptions fit_opts;
        fit_opts.seed = hash64(run_seed, 0xf17);

        RunResult res = run_active_learning([&fn](const Vector& x) { return fn(x); },
                                            init, config.budget, config.family, acq,
                                            fit_opts, {});
        res.log.function_name = config.function;
        res.log.seed = run_seed;
        // records carry the running best; read it off at each budget point
        for (int n = n0; n <= config.budget; ++n) {
            best_curves[static_cast<std::size_t>(n - n0)][static_cast<std::size_t>(s)] =
                res.log.records[static_cast<std::size_t>(n - 1)].best_y;
        }
        logs.push_back(std::move(res.log));
    }

    std::vector<SummaryRow> rows;
    for (int i = 0; i < n_curve; ++i) {
        const SeedStats st = seed_stats(best_curves[static_cast<std::size_t>(i)]);
        rows.push_back({condition, "best_y", n0 + i, st.mean, st.stderr_,
                        config.n_seeds, false});
    }
    if (fn.min_value) {
        for (int i = 0; i < n_curve; ++i) {
            std::vector<double> gaps = best_curves[static_cast<std::size_t>(i)];
            for (double& g : gaps) g -= *fn.min_value;
            const SeedStats st = seed_stats(gaps);
            rows.push_back({condition, "optimality_gap", n0 + i, st.mean, st.stderr_,
                            config.n_seeds, false});
        }
    }

    write_outputs(config, logs, rows);
    return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path,
                       const std::vector<std::string>& header_comments) {
    if (rows.empty()) throw ValidationError("refusing to write an empty summary");
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    for (const auto& c : header_comments) out << "# " << c << "\n";
    out << "condition,metric,n,mean,stderr,n_seeds,kind\n";
    for (const auto& r : rows) {
        out << r.condition << "," << r.metric << "," << r.n << "," << fmt17(r.mean)
            << "," << fmt17(r.stderr_) << "," << r.n_seeds << ","
            << (r.baseline ? "baseline" : "curve") << "\n";
    }
    if (!out) throw ValidationError("failed while writing '" + path + "'");
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open summary file '" + path + "'");
    std::string line;
    bool saw_header = false;
    std::vector<SummaryRow> rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "condition,metric,n,mean,stderr,n_seeds,kind") {
                throw ValidationError("summary file: unexpected header '" + line + "'");
            }
            saw_header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        SummaryRow r;
        auto next_cell = [&](const char* what) {
            if (!std::getline(ls, cell, ',')) {
                throw ValidationError("summary file line " + std::to_string(lineno) +
                                      ": missing " + what);
            }
            return cell;
        };
        r.condition = next_cell("condition");
        r.metric = next_cell("metric");
        r.n = std::stoi(next_cell("n"));
        r.mean = std::stod(next_cell("mean"));
        r.stderr_ = std::stod(next_cell("stderr"));
        r.n_seeds = std::stoi(next_cell("n_seeds"));
        const std::string kind = next_cell("kind");
        if (kind != "curve" && kind != "baseline") {
            throw ValidationError("summary file line " + std::to_string(lineno) +
                                  ": kind must be curve or baseline");
        }
        r.baseline = kind == "baseline";
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ValidationError("summary file '" + path + "' has no rows");
    return rows;
}

// ---------------------------------------------------------------------------
// SVG rendering. Geometry is computed here and written as plain shapes; the
// output references nothing external.
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors;
}

struct AxisScale {
    double lo = 0.0, hi = 1.0;
    bool log10 = false;

    double unit(double v) const {
        double t = v;
        if (log10) t = std::log10(std::max(v, 1e-300));
        return (t - lo) / (hi - lo);
    }
};

}  // namespace

std::string plot_summary_svg(const std::vector<SummaryRow>& rows,
                             const std::string& metric) {
    std::vector<const SummaryRow*> selected;
    for (const auto& r : rows) {
        if (r.metric == metric) selected.push_back(&r);
    }
    if (selected.empty()) {
        throw ValidationError("no summary rows with metric '" + metric + "'");
    }

    std::vector<std::string> curve_names, baseline_names;
    for (const auto* r : selected) {
        auto& names = r->baseline ? baseline_names : curve_names;
        if (std::find(names.begin(), names.end(), r->condition) == names.end()) {
            names.push_back(r->condition);
        }
    }

    const bool log_y = metric == "optimality_gap";
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto* r : selected) {
        x_lo = std::min(x_lo, double(r->n));
        x_hi = std::max(x_hi, double(r->n));
        double v = r->mean;
        if (log_y) v = std::log10(std::max(v, 1e-12));
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
    }
    if (x_hi - x_lo < 1.0) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    if (y_hi - y_lo < 1e-12) {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    const double y_pad = 0.05 * (y_hi - y_lo);
    AxisScale xs{x_lo, x_hi, false};
    AxisScale ys{y_lo - y_pad, y_hi + y_pad, log_y};

    const double width = 760, height = 480;
    const double ml = 70, mr = 190, mt = 24, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double n) { return ml + pw * xs.unit(n); };
    auto py = [&](double v) { return mt + ph * (1.0 - ys.unit(v)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // ticks
    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / n_ticks;
        svg << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << fmt_short(fx) << "</text>\n";
        const double uy = ys.lo + (ys.hi - ys.lo) * t / n_ticks;
        const double label = log_y ? std::pow(10.0, uy) : uy;
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph * (1.0 - double(t) / n_ticks) + 4
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << fmt_short(label) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << "evaluations</text>\n";
    svg << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << metric
        << (log_y ? " (log scale)" : "") << "</text>\n";

    double legend_y = mt + 10;
    const double legend_x = ml + pw + 14;

    int color_idx = 0;
    for (const auto& name : curve_names) {
        const std::string color =
            palette()[static_cast<std::size_t>(color_idx) % palette().size()];
        ++color_idx;
        std::ostringstream pts;
        for (const auto* r : selected) {
            if (r->baseline || r->condition != name) continue;
            pts << px(r->n) << "," << py(r->mean) << " ";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
        svg << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y << "\" x2=\""
            << legend_x + 24 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"/>\n";
        svg << "<text x=\"" << legend_x + 30 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << name << "</text>\n";
        legend_y += 18;
    }
    for (const auto& name : baseline_names) {
        const std::string color =
            palette()[static_cast<std::size_t>(color_idx) % palette().size()];
        ++color_idx;
        double level = 0.0;
        for (const auto* r : selected) {
            if (r->baseline && r->condition == name) level = r->mean;
        }
        svg << "<line x1=\"" << ml << "\" y1=\"" << py(level) << "\" x2=\"" << ml + pw
            << "\" y2=\"" << py(level) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.4\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y << "\" x2=\""
            << legend_x + 24 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
            << "\" stroke-width=\"1.4\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << legend_x + 30 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << name << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

void plot_summary(const std::string& summary_csv_path, const std::string& svg_path) {
    const auto rows = read_summary_csv(summary_csv_path);
    std::string metric;
    for (const char* preferred : {"mse", "optimality_gap", "best_y"}) {
        for (const auto& r : rows) {
            if (r.metric == preferred) {
                metric = preferred;
                break;
            }
        }
        if (!metric.empty()) break;
    }
    if (metric.empty()) metric = rows.front().metric;
    const std::string svg = plot_summary_svg(rows, metric);
    std::ofstream out(svg_path);
    if (!out) throw ValidationError("cannot open '" + svg_path + "' for writing");
    out << svg;
    if (!out) throw ValidationError("failed while writing '" + svg_path + "'");
}

// ---------------------------------------------------------------------------
// key=value configuration files.
// ---------------------------------------------------------------------------

void apply_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw ValidationError("config file '" + path + "' line " +
                              std::to_string(lineno) + ": " + why);
    };
    auto parse_bool = [&](const std::string& v) {
        if (v == "1" || v == "true") return true;
        if (v == "0" || v == "false") return false;
        fail("expected a boolean, got '" + v + "'");
        return false;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // trim
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        auto trim = [](std::string s) {
            const auto lo = s.find_first_not_of(" \t");
            if (lo == std::string::npos) return std::string();
            const auto hi = s.find_last_not_of(" \t");
            return s.substr(lo, hi - lo + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "function") {
                config.function = val;
            } else if (key == "family") {
                config.family = kernel_family_from_string(val);
            } else if (key == "generator") {
                config.generator = val;
            } else if (key == "l") {
                config.l = std::stoi(val);
            } else if (key == "n_init") {
                config.n_init = std::stoi(val);
            } else if (key == "budget") {
                config.budget = std::stoi(val);
            } else if (key == "n_test") {
                config.n_test = std::stoi(val);
            } else if (key == "n_seeds") {
                config.n_seeds = std::stoi(val);
            } else if (key == "seed") {
                config.seed = std::stoull(val);
            } else if (key == "design_iters") {
                config.design_iters = std::stoi(val);
            } else if (key == "no_timestamp") {
                config.include_timing = !parse_bool(val);
            } else if (key == "no_baseline") {
                config.with_baseline = !parse_bool(val);
            } else if (key == "out") {
                config.out_dir = val;
            } else {
                fail("unknown key '" + key + "'");
            }
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            fail("cannot parse value '" + val + "' for key '" + key + "'");
        }
    }
}

}  // namespace alkit
