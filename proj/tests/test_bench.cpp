#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "alkit/bench.hpp"
#include "test_util.hpp"

using namespace alkit;
using alkit_tests::TempDir;
using alkit_tests::slurp;
using alkit_tests::spit;

namespace {

std::vector<SummaryRow> demo_rows() {
    return {
        {"mofat_mim", "mse", 6, 2.0, 0.1, 3, false},
        {"mofat_mim", "mse", 7, 1.5, 0.08, 3, false},
        {"mofat_mim", "mse", 8, 1.1, 0.05, 3, false},
        {"sobol_gaussian", "mse", 6, 2.5, 0.2, 3, false},
        {"sobol_gaussian", "mse", 7, 2.1, 0.15, 3, false},
        {"sobol_gaussian", "mse", 8, 1.9, 0.1, 3, false},
        {"baseline_maxpro_mim", "mse", 8, 1.4, 0.07, 3, true},
    };
}

int count_of(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

}  // namespace

TEST_SUITE_BEGIN("bench");

TEST_CASE("summary files round trip") {
    TempDir tmp("bench");
    const std::string path = tmp.file("summary.csv");
    const auto rows = demo_rows();
    write_summary_csv(rows, path, {"demo summary", "three conditions"});

    const std::string text = slurp(path);
    CHECK(text.find("# demo summary\n") == 0);
    CHECK(text.find("condition,metric,n,mean,stderr,n_seeds,kind\n") != std::string::npos);

    const auto loaded = read_summary_csv(path);
    REQUIRE(loaded.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(loaded[i].condition == rows[i].condition);
        CHECK(loaded[i].metric == rows[i].metric);
        CHECK(loaded[i].n == rows[i].n);
        CHECK(loaded[i].mean == rows[i].mean);
        CHECK(loaded[i].stderr_ == rows[i].stderr_);
        CHECK(loaded[i].n_seeds == rows[i].n_seeds);
        CHECK(loaded[i].baseline == rows[i].baseline);
    }
}

TEST_CASE("summary files are strict about their shape") {
    TempDir tmp("bench");
    const std::string path = tmp.file("bad.csv");

    CHECK_THROWS_AS(write_summary_csv({}, path), ValidationError);
    CHECK_THROWS_AS(read_summary_csv(tmp.file("missing.csv")), ValidationError);

    spit(path, "condition,metric,n,mean\nmofat_mim,mse,6,2.0\n");
    CHECK_THROWS_AS(read_summary_csv(path), ValidationError);

    spit(path, "condition,metric,n,mean,stderr,n_seeds,kind\n");
    CHECK_THROWS_AS(read_summary_csv(path), ValidationError);  // no data rows

    spit(path,
         "condition,metric,n,mean,stderr,n_seeds,kind\n"
         "mofat_mim,mse,6,2.0,0.1,3,dotted\n");
    CHECK_THROWS_WITH_AS(read_summary_csv(path),
                         doctest::Contains("kind must be curve or baseline"),
                         ValidationError);

    spit(path,
         "# comment\n\ncondition,metric,n,mean,stderr,n_seeds,kind\n"
         "mofat_mim,mse,6,2.0,0.1,3,curve\n");
    CHECK(read_summary_csv(path).size() == 1);
}

TEST_CASE("svg plots have one shape per condition") {
    const std::string svg = plot_summary_svg(demo_rows(), "mse");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 2);
    // baselines draw a dashed plot line plus a dashed legend swatch
    CHECK(count_of(svg, "stroke-dasharray") == 2);
    CHECK(svg.find(">mofat_mim</text>") != std::string::npos);
    CHECK(svg.find(">sobol_gaussian</text>") != std::string::npos);
    CHECK(svg.find(">baseline_maxpro_mim</text>") != std::string::npos);
    CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);

    CHECK_THROWS_AS(plot_summary_svg(demo_rows(), "best_y"), ValidationError);
}

TEST_CASE("gap plots survive zero means") {
    std::vector<SummaryRow> rows = {
        {"mofat_mim", "optimality_gap", 6, 1.0, 0.0, 1, false},
        {"mofat_mim", "optimality_gap", 7, 0.0, 0.0, 1, false},
    };
    const std::string svg = plot_summary_svg(rows, "optimality_gap");
    CHECK(svg.find("log scale") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
}

TEST_CASE("config files set every key") {
    TempDir tmp("bench");
    const std::string path = tmp.file("exp.cfg");
    spit(path,
         "# experiment\n"
         "function = levy6_aug10\n"
         "  family=gaussian\n"
         "generator=sobol\n"
         "l=3\n"
         "n_init=20\n"
         "budget=60\n"
         "n_test=500\n"
         "n_seeds=4\n"
         "seed=42\n"
         "design_iters=123\n"
         "no_timestamp=true\n"
         "no_baseline=1\n"
         "out=results/demo\n");
    ExperimentConfig cfg;
    apply_config_file(cfg, path);
    CHECK(cfg.function == "levy6_aug10");
    CHECK(cfg.family == KernelFamily::Gaussian);
    CHECK(cfg.generator == "sobol");
    CHECK(cfg.l == 3);
    CHECK(cfg.n_init == 20);
    CHECK(cfg.budget == 60);
    CHECK(cfg.n_test == 500);
    CHECK(cfg.n_seeds == 4);
    CHECK(cfg.seed == 42);
    CHECK(cfg.design_iters == 123);
    CHECK(!cfg.include_timing);
    CHECK(!cfg.with_baseline);
    CHECK(cfg.out_dir == "results/demo");
}

TEST_CASE("config file errors carry the line number") {
    TempDir tmp("bench");
    const std::string path = tmp.file("bad.cfg");
    ExperimentConfig cfg;

    spit(path, "function=levy6\n\nbudget=oops\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, path), doctest::Contains("line 3"),
                         ValidationError);

    spit(path, "function=levy6\nwhatever=1\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, path),
                         doctest::Contains("unknown key 'whatever'"), ValidationError);

    spit(path, "function levy6\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, path),
                         doctest::Contains("expected key=value"), ValidationError);

    spit(path, "no_baseline=maybe\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, path),
                         doctest::Contains("expected a boolean"), ValidationError);

    CHECK_THROWS_AS(apply_config_file(cfg, tmp.file("none.cfg")), ValidationError);
}

TEST_CASE("experiment configs name the offending field") {
    ExperimentConfig cfg;
    cfg.function = "levy2";
    cfg.generator = "mofat";
    cfg.l = 2;
    cfg.budget = 10;
    CHECK_NOTHROW(cfg.validate(true));

    ExperimentConfig bad = cfg;
    bad.function = "";
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("function"),
                         ValidationError);

    bad = cfg;
    bad.l = 0;
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("l:"), ValidationError);

    bad = cfg;
    bad.generator = "imported";
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("generator"),
                         ValidationError);

    bad = cfg;
    bad.generator = "maximin_lhd";
    bad.n_init = 1;
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("n_init"),
                         ValidationError);

    bad = cfg;
    bad.budget = 5;  // below l * (d + 1) = 6
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("budget"),
                         ValidationError);

    bad = cfg;
    bad.n_test = 0;
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("n_test"),
                         ValidationError);
    CHECK_NOTHROW(bad.validate(false));  // n_test only matters for emulation

    bad = cfg;
    bad.n_seeds = 0;
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("n_seeds"),
                         ValidationError);

    bad = cfg;
    bad.design_iters = -1;
    CHECK_THROWS_WITH_AS(bad.validate(true), doctest::Contains("design_iters"),
                         ValidationError);
}

TEST_CASE("small emulation experiment end to end") {
    TempDir tmp("bench");
    ExperimentConfig cfg;
    cfg.function = "levy2";
    cfg.family = KernelFamily::MIM;
    cfg.generator = "mofat";
    cfg.l = 2;  // initial size 2 * 3 = 6
    cfg.budget = 9;
    cfg.n_test = 32;
    cfg.n_seeds = 2;
    cfg.seed = 5;
    cfg.design_iters = 200;
    cfg.include_timing = false;
    cfg.out_dir = tmp.file("run_a");

    const auto rows = run_emulation(cfg);
    // 4 curve points (n = 6..9) and two one-shot references
    REQUIRE(rows.size() == 6);
    for (int i = 0; i < 4; ++i) {
        CHECK(rows[i].condition == "mofat_mim");
        CHECK(rows[i].metric == "mse");
        CHECK(rows[i].n == 6 + i);
        CHECK(!rows[i].baseline);
        CHECK(rows[i].n_seeds == 2);
        CHECK(std::isfinite(rows[i].mean));
        CHECK(rows[i].mean >= 0.0);
        CHECK(rows[i].stderr_ >= 0.0);
    }
    CHECK(rows[4].condition == "baseline_maxpro_mim");
    CHECK(rows[5].condition == "baseline_maxpro_gaussian");
    for (int i = 4; i < 6; ++i) {
        CHECK(rows[i].baseline);
        CHECK(rows[i].n == 9);
        CHECK(std::isfinite(rows[i].mean));
    }

    namespace fs = std::filesystem;
    CHECK(fs::exists(fs::path(cfg.out_dir) / "summary.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "run_mofat_mim_seed0.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "run_mofat_mim_seed1.csv"));

    // the whole experiment is reproducible byte for byte
    ExperimentConfig again = cfg;
    again.out_dir = tmp.file("run_b");
    run_emulation(again);
    CHECK(slurp((fs::path(cfg.out_dir) / "summary.csv").string()) ==
          slurp((fs::path(again.out_dir) / "summary.csv").string()));
    CHECK(slurp((fs::path(cfg.out_dir) / "run_mofat_mim_seed0.csv").string()) ==
          slurp((fs::path(again.out_dir) / "run_mofat_mim_seed0.csv").string()));
}

TEST_CASE("gaussian emulation dedups its reference fit") {
    ExperimentConfig cfg;
    cfg.function = "levy2";
    cfg.family = KernelFamily::Gaussian;
    cfg.generator = "mofat";
    cfg.l = 2;
    cfg.budget = 6;  // equal to the initial size: fit once, no acquisition
    cfg.n_test = 16;
    cfg.n_seeds = 1;
    cfg.seed = 1;
    cfg.design_iters = 100;

    const auto rows = run_emulation(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].condition == "mofat_gaussian");
    CHECK(rows[0].stderr_ == 0.0);  // single seed
    CHECK(rows[1].condition == "baseline_maxpro_gaussian");
}

TEST_CASE("small optimization experiment tracks the running best") {
    ExperimentConfig cfg;
    cfg.function = "levy2";
    cfg.generator = "maximin_lhd";
    cfg.n_init = 5;
    cfg.budget = 8;
    cfg.n_seeds = 2;
    cfg.seed = 3;
    cfg.design_iters = 200;

    const auto rows = run_optimization(cfg);
    REQUIRE(rows.size() == 8);  // 4 best_y rows + 4 optimality_gap rows
    for (int i = 0; i < 4; ++i) {
        CHECK(rows[i].metric == "best_y");
        CHECK(rows[i].n == 5 + i);
        CHECK(rows[i + 4].metric == "optimality_gap");
        CHECK(rows[i + 4].n == 5 + i);
        // levy's minimum is 0, so the gap equals best_y here
        CHECK(rows[i + 4].mean == doctest::Approx(rows[i].mean).epsilon(1e-15));
        CHECK(rows[i + 4].mean >= 0.0);
        if (i > 0) CHECK(rows[i].mean <= rows[i - 1].mean + 1e-15);
    }
}

TEST_CASE("functions without a known minimum skip the gap metric") {
    ExperimentConfig cfg;
    cfg.function = "friedman5";
    cfg.generator = "sobol";
    cfg.n_init = 6;
    cfg.budget = 7;
    cfg.n_seeds = 1;
    cfg.seed = 2;

    const auto rows = run_optimization(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) CHECK(r.metric == "best_y");
}

TEST_SUITE_END();
