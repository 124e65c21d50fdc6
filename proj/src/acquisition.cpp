#include "alkit/acquisition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace alkit {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double min_inf_distance(const Matrix& points, const Vector& x) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points.rows(); ++i) {
        lo = std::min(lo, (points.row(i).transpose() - x).cwiseAbs().maxCoeff());
    }
    return lo;
}

}  // namespace

std::string to_string(AcquisitionKind kind) {
    return kind == AcquisitionKind::ALM ? "alm" : "ei";
}

AcquisitionKind acquisition_from_string(const std::string& name) {
    if (name == "alm") return AcquisitionKind::ALM;
    if (name == "ei") return AcquisitionKind::EI;
    throw ValidationError("unknown acquisition '" + name + "' (expected alm or ei)");
}

double alm_score(const GPModel& model, const Vector& x) {
    return predict(model, x).var;
}

double expected_improvement(double mean, double sd, double y_star, double s_floor) {
    if (!(sd > s_floor)) return std::max(y_star - mean, 0.0);
    const double diff = y_star - mean;
    const double u = diff / sd;
    const double ei = diff * norm_cdf(u) + sd * norm_pdf(u);
    return std::max(ei, 0.0);
}

double expected_improvement(const GPModel& model, const Vector& x, double y_star) {
    const Prediction p = predict(model, x);
    return expected_improvement(p.mean, std::sqrt(std::max(p.var, 0.0)), y_star);
}

NextPoint next_point(const GPModel& model, const AcquisitionSpec& spec) {
    if (spec.duplicate_tol <= 0.0) {
        throw ValidationError("next_point: duplicate_tol must be positive");
    }
    std::function<double(const Vector&)> objective;
    if (spec.kind == AcquisitionKind::ALM) {
        objective = [&model](const Vector& x) { return alm_score(model, x); };
    } else {
        const double y_star = model.y.minCoeff();
        const double s_floor = spec.s_floor;
        objective = [&model, y_star, s_floor](const Vector& x) {
            const Prediction p = predict(model, x);
            return expected_improvement(p.mean, std::sqrt(std::max(p.var, 0.0)),
                                        y_star, s_floor);
        };
    }

    const BoxOptimum opt = maximize_box(objective, model.d(), spec.optimizer);
    for (const auto& [x, value] : opt.ranked) {
        if (min_inf_distance(model.design, x) >= spec.duplicate_tol) {
            return {x, value, false};
        }
    }

    // Everything the optimizer saw sits on top of the design (tiny tolerance
    // or a fully explored model). Nudge the best point along the coordinate
    // the design varies least, far enough to clear the tolerance.
    Vector x = opt.ranked.front().first;
    int k_least = 0;
    double least_spread = std::numeric_limits<double>::infinity();
    for (int k = 0; k < model.d(); ++k) {
        const double spread =
            model.design.col(k).maxCoeff() - model.design.col(k).minCoeff();
        if (spread < least_spread) {
            least_spread = spread;
            k_least = k;
        }
    }
    const double delta = spec.duplicate_tol * 1e3;
    x[k_least] = x[k_least] + delta <= 1.0 ? x[k_least] + delta : x[k_least] - delta;
    x[k_least] = std::clamp(x[k_least], 0.0, 1.0);
    return {x, objective(x), true};
}

RunResult run_active_learning(const Objective& f, const DesignMatrix& init,
                              int n_total, KernelFamily family,
                              const AcquisitionSpec& acq,
                              const FitOptions& fit_options,
                              const FitObserver& observer) {
    const int n0 = init.n();
    const int d = init.d();
    if (n0 < 2) throw ValidationError("run_active_learning: need >= 2 initial points");
    if (n_total < n0) {
        throw ValidationError("run_active_learning: budget smaller than the design");
    }

    using clock = std::chrono::steady_clock;
    RunLog log;
    log.d = d;
    log.family = family;
    log.generator = to_string(init.generator);
    log.acq = acq.kind;
    log.n_init = n0;
    log.n_total = n_total;

    Matrix X(n_total, d);
    Vector y(n_total);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n0; ++i) {
        const auto t0 = clock::now();
        X.row(i) = init.points.row(i);
        y[i] = f(init.points.row(i));
        best = std::min(best, y[i]);
        IterationRecord rec;
        rec.iter = i;
        rec.x = init.points.row(i);
        rec.y = y[i];
        rec.best_y = best;
        rec.has_acq = false;
        rec.elapsed_ms =
            std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        log.records.push_back(std::move(rec));
    }

    auto refit = [&](int count, const GPModel* previous) {
        FitOptions opts = fit_options;
        opts.seed = hash64(fit_options.seed, static_cast<std::uint64_t>(count));
        if (previous != nullptr && !previous->constant) {
            opts.warm_starts.push_back(previous->spec);
        }
        try {
            return fit(X.topRows(count), y.head(count), family, opts);
        } catch (const NotPositiveDefinite& e) {
            throw NotPositiveDefinite("refit with " + std::to_string(count) +
                                      " points failed: " + e.what());
        }
    };

    GPModel model = refit(n0, nullptr);
    if (observer) observer(n0, model);

    for (int t = n0; t < n_total; ++t) {
        const auto t0 = clock::now();
        AcquisitionSpec acq_t = acq;
        acq_t.optimizer.seed = hash64(acq.optimizer.seed, static_cast<std::uint64_t>(t));
        const NextPoint np = next_point(model, acq_t);
        const double y_new = f(np.x);
        X.row(t) = np.x;
        y[t] = y_new;
        best = std::min(best, y_new);
        model = refit(t + 1, &model);

        IterationRecord rec;
        rec.iter = t;
        rec.x = np.x;
        rec.y = y_new;
        rec.best_y = best;
        rec.acq_value = np.acq_value;
        rec.has_acq = true;
        rec.duplicate_fallback = np.duplicate_fallback;
        rec.elapsed_ms =
            std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        log.records.push_back(std::move(rec));
        if (observer) observer(t + 1, model);
    }
    return {std::move(model), std::move(log)};
}

void write_runlog_csv(const RunLog& log, const std::string& path, bool include_timing) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "# " << kVersion << " run log\n";
    out << "# function=" << log.function_name << " d=" << log.d
        << " family=" << to_string(log.family) << " generator=" << log.generator
        << " acq=" << to_string(log.acq) << "\n";
    out << "# seed=" << log.seed << " n_init=" << log.n_init
        << " n_total=" << log.n_total << "\n";
    bool any_fallback = false;
    for (const auto& rec : log.records) any_fallback |= rec.duplicate_fallback;
    if (any_fallback) {
        out << "# duplicate_fallback_iters=";
        bool first = true;
        for (const auto& rec : log.records) {
            if (rec.duplicate_fallback) {
                out << (first ? "" : ",") << rec.iter;
                first = false;
            }
        }
        out << "\n";
    }
    out << "iter";
    for (int k = 0; k < log.d; ++k) out << ",x" << k + 1;
    out << ",y,best_y,acq_value,elapsed_ms\n";
    for (const auto& rec : log.records) {
        out << rec.iter;
        for (int k = 0; k < log.d; ++k) out << "," << fmt17(rec.x[k]);
        out << "," << fmt17(rec.y) << "," << fmt17(rec.best_y) << ",";
        if (rec.has_acq) out << fmt17(rec.acq_value);
        out << "," << (include_timing ? fmt17(rec.elapsed_ms) : "0");
        out << "\n";
    }
    if (!out) throw ValidationError("failed while writing '" + path + "'");
}

}  // namespace alkit
