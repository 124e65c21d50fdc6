#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "alkit/acquisition.hpp"
#include "alkit/kernels.hpp"
#include "alkit/types.hpp"

namespace alkit {

// Multi-seed experiment harness. An experiment runs one (function, kernel,
// design generator, acquisition) condition over n_seeds independent
// replicates, collects per-iteration metric curves and writes run logs plus
// an aggregated summary. Seeds for replicate i derive from
// hash64(master_seed, i), so conditions can be reproduced independently.

struct ExperimentConfig {
    std::string function = "";              // catalog name, e.g. "levy6_aug10"
    KernelFamily family = KernelFamily::MIM;
    std::string generator = "mofat";        // mofat|maximin_lhd|maxpro|sobol|random
    int l = 4;                              // mofat block count
    int n_init = 0;                         // initial size for non-mofat generators
    int budget = 0;                         // total evaluations (init + sequential)
    int n_test = 1000;                      // Sobol' test points for emulation MSE
    int n_seeds = 10;
    std::uint64_t seed = 0;                 // master seed
    int design_iters = 10000;               // optimization effort per design
    bool with_baseline = true;              // emulation: one-shot designs at budget
    bool include_timing = true;             // false zeroes elapsed_ms in run logs
    std::string out_dir = "";               // empty: keep results in memory only

    // Throws ValidationError naming the offending field.
    void validate(bool emulation) const;
};

struct SummaryRow {
    std::string condition;  // e.g. "mofat_mim" or "baseline_maxpro_gaussian"
    std::string metric;     // "mse" | "best_y" | "optimality_gap"
    int n = 0;              // evaluations spent
    double mean = 0.0;
    double stderr_ = 0.0;   // 0 when n_seeds == 1
    int n_seeds = 0;
    bool baseline = false;  // drawn as a flat dashed line
};

// Active-learning emulation (ALM): metric is out-of-sample MSE on a fixed
// Sobol' test set, logged after every refit from n_init to budget. With
// with_baseline, also fits one-shot MaxPro designs of size `budget` under
// both the chosen family and the Gaussian family.
std::vector<SummaryRow> run_emulation(const ExperimentConfig& config);

// Sequential optimization (EI): metrics are best_y and, when the function's
// minimum is known, optimality_gap = best_y - min_value per iteration.
std::vector<SummaryRow> run_optimization(const ExperimentConfig& config);

// summary.csv: condition,metric,n,mean,stderr,n_seeds,kind with '#' comment
// headers; kind is "curve" or "baseline".
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path,
                       const std::vector<std::string>& header_comments = {});
std::vector<SummaryRow> read_summary_csv(const std::string& path);

// Standalone SVG with one polyline per curve condition, dashed horizontal
// lines for baselines, axes, ticks and a legend. Optimality-gap plots use a
// log10 y-axis. Pure text, no external references.
std::string plot_summary_svg(const std::vector<SummaryRow>& rows,
                             const std::string& metric);
void plot_summary(const std::string& summary_csv_path, const std::string& svg_path);

// key=value configuration files: '#' lines are comments, unknown keys are
// errors. Keys mirror the CLI flags (function, family, generator, l, n_init,
// budget, n_test, n_seeds, seed, design_iters, no_timestamp, no_baseline,
// out).
void apply_config_file(ExperimentConfig& config, const std::string& path);

}  // namespace alkit
