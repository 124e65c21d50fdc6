#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "alkit/designs.hpp"
#include "alkit/gp.hpp"
#include "alkit/numeric.hpp"
#include "alkit/types.hpp"

namespace alkit {

enum class AcquisitionKind { ALM, EI };

std::string to_string(AcquisitionKind kind);
AcquisitionKind acquisition_from_string(const std::string& name);

struct AcquisitionSpec {
    AcquisitionKind kind = AcquisitionKind::ALM;
    BoxOptimizerConfig optimizer;
    double duplicate_tol = 1e-8;  // min inf-distance to existing design rows
    double s_floor = 1e-12;       // below this the EI noise term is dropped
};

// Predictive variance at x (active learning MacKay).
double alm_score(const GPModel& model, const Vector& x);

// Expected improvement for minimization, closed form:
//   EI = (y_star - mean) Phi(u) + s phi(u),  u = (y_star - mean) / s
// with the degenerate branch max(y_star - mean, 0) when s <= s_floor.
// Never negative.
double expected_improvement(double mean, double sd, double y_star,
                            double s_floor = 1e-12);
double expected_improvement(const GPModel& model, const Vector& x, double y_star);

struct NextPoint {
    Vector x;
    double acq_value = 0.0;
    // True when every optimizer result fell within duplicate_tol of the
    // design and the point had to be perturbed away.
    bool duplicate_fallback = false;
};

// Maximizes the acquisition over the unit box and returns the best point
// that is not a near-duplicate of an existing design row. For EI the
// incumbent is min(model.y). Deterministic given spec.optimizer.seed.
NextPoint next_point(const GPModel& model, const AcquisitionSpec& spec);

struct IterationRecord {
    int iter = 0;          // 0-based position in the design
    Vector x;
    double y = 0.0;
    double best_y = 0.0;   // running minimum
    double acq_value = 0.0;
    bool has_acq = false;  // false for initial-design rows
    double elapsed_ms = 0.0;
    bool duplicate_fallback = false;
};

struct RunLog {
    std::string function_name;
    int d = 0;
    KernelFamily family = KernelFamily::Gaussian;
    std::string generator;
    AcquisitionKind acq = AcquisitionKind::ALM;
    std::uint64_t seed = 0;
    int n_init = 0;
    int n_total = 0;
    std::vector<IterationRecord> records;
};

struct RunResult {
    GPModel model;
    RunLog log;
};

using Objective = std::function<double(const Vector&)>;

// Called after every refit with the current number of evaluations; used to
// track learning curves without re-running anything.
using FitObserver = std::function<void(int n_evals, const GPModel& model)>;

// Evaluate f on the initial design, then alternate acquisition, evaluation
// and a warm-started refit until n_total evaluations have been spent.
// Per-iteration randomness is derived from the acquisition and fit seeds
// with hash64(seed, iteration), so runs are reproducible end to end. Fit
// failures propagate with the iteration index attached.
RunResult run_active_learning(const Objective& f, const DesignMatrix& init,
                              int n_total, KernelFamily family,
                              const AcquisitionSpec& acq,
                              const FitOptions& fit_options,
                              const FitObserver& observer = {});

// CSV: iter,x1..xd,y,best_y,acq_value,elapsed_ms with a '#' comment header
// carrying the run configuration. acq_value is empty on initial rows.
// include_timing=false writes elapsed_ms as 0 so identical runs are byte
// identical.
void write_runlog_csv(const RunLog& log, const std::string& path,
                      bool include_timing = true);

}  // namespace alkit
