#include <doctest.h>

#include <cmath>
#include <sstream>

#include "alkit/acquisition.hpp"
#include "alkit/designs.hpp"
#include "test_util.hpp"

using namespace alkit;
using alkit_tests::TempDir;
using alkit_tests::slurp;
using alkit_tests::vec;

TEST_SUITE_BEGIN("acquisition");

TEST_CASE("expected improvement closed form") {
    // at the incumbent the improvement is pure exploration: s * pdf(0)
    CHECK(expected_improvement(3.0, 1.0, 3.0) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(expected_improvement(3.0, 0.5, 3.0) ==
          doctest::Approx(0.5 * 0.3989422804014327).epsilon(1e-15));

    // one standard deviation above the incumbent
    CHECK(expected_improvement(4.0, 1.0, 3.0) ==
          doctest::Approx(0.08331547058768632).epsilon(1e-13));

    // certain improvement dominated by the mean gap
    CHECK(expected_improvement(1.0, 1e-3, 3.0) ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("expected improvement degenerate branch") {
    CHECK(expected_improvement(2.0, 0.0, 3.0) == 1.0);
    CHECK(expected_improvement(4.0, 0.0, 3.0) == 0.0);
    CHECK(expected_improvement(2.0, 1e-13, 3.0) == 1.0);  // below the floor
    CHECK(expected_improvement(2.0, 5e-3, 3.0, 1e-2) == 1.0);  // custom floor
}

TEST_CASE("expected improvement is nonnegative and increasing in s") {
    for (double mean : {-2.0, 0.0, 1.0, 5.0}) {
        double prev = expected_improvement(mean, 1e-12, 0.0);
        CHECK(prev >= 0.0);
        for (double s : {1e-6, 1e-3, 0.1, 1.0, 10.0}) {
            const double ei = expected_improvement(mean, s, 0.0);
            CHECK(ei >= prev);
            prev = ei;
        }
    }
}

TEST_CASE("model overloads agree with the scalar forms") {
    const DesignMatrix design = maximin_lhd(8, 2, 17, 300);
    Vector y(8);
    for (int i = 0; i < 8; ++i) {
        y[i] = std::sin(5.0 * design.points(i, 0)) + design.points(i, 1);
    }
    const GPModel m = fit_fixed(design.points, y,
                                KernelSpec::isotropic(KernelFamily::MIM, 2, 0.4));
    const Vector x = vec({0.31, 0.62});
    const Prediction p = predict(m, x);
    CHECK(alm_score(m, x) == p.var);
    CHECK(expected_improvement(m, x, 0.5) ==
          expected_improvement(p.mean, std::sqrt(p.var), 0.5));
}

TEST_CASE("next_point avoids the design and is deterministic") {
    const DesignMatrix design = maximin_lhd(6, 2, 40, 300);
    Vector y(6);
    for (int i = 0; i < 6; ++i) y[i] = design.points(i, 0);
    const GPModel m = fit_fixed(design.points, y,
                                KernelSpec::isotropic(KernelFamily::Gaussian, 2, 0.3));

    AcquisitionSpec spec;
    spec.kind = AcquisitionKind::ALM;
    spec.optimizer.seed = 5;
    const NextPoint a = next_point(m, spec);
    CHECK(!a.duplicate_fallback);
    CHECK(a.x.size() == 2);
    CHECK(a.x.minCoeff() >= 0.0);
    CHECK(a.x.maxCoeff() <= 1.0);
    CHECK(a.acq_value == alm_score(m, a.x));
    for (int i = 0; i < 6; ++i) {
        const double gap =
            (design.points.row(i).transpose() - a.x).cwiseAbs().maxCoeff();
        CHECK(gap >= spec.duplicate_tol);
    }

    const NextPoint b = next_point(m, spec);
    CHECK((a.x - b.x).norm() == 0.0);
    CHECK(a.acq_value == b.acq_value);

    spec.kind = AcquisitionKind::EI;
    const NextPoint e = next_point(m, spec);
    CHECK(e.acq_value >= 0.0);
    CHECK(e.x.minCoeff() >= 0.0);
    CHECK(e.x.maxCoeff() <= 1.0);
}

TEST_CASE("next_point falls back when everything is a duplicate") {
    Matrix X(2, 1);
    X << 0.25, 0.75;
    const Vector y = vec({1.0, 2.0});
    const GPModel m =
        fit_fixed(X, y, KernelSpec::isotropic(KernelFamily::Gaussian, 1, 0.4));
    AcquisitionSpec spec;
    spec.duplicate_tol = 0.6;  // nothing in the box clears this
    const NextPoint np = next_point(m, spec);
    CHECK(np.duplicate_fallback);
    CHECK(np.x.minCoeff() >= 0.0);
    CHECK(np.x.maxCoeff() <= 1.0);

    spec.duplicate_tol = 0.0;
    CHECK_THROWS_AS(next_point(m, spec), ValidationError);
}

TEST_CASE("active learning loop bookkeeping") {
    const auto f = [](const Vector& x) {
        return std::pow(x[0] - 0.3, 2) + 0.5 * x[1];
    };
    const DesignMatrix init = maximin_lhd(4, 2, 31, 300);
    AcquisitionSpec acq;
    acq.kind = AcquisitionKind::EI;
    acq.optimizer.seed = 11;
    acq.optimizer.n_candidates = 200;
    FitOptions fo;
    fo.seed = 3;
    fo.restarts = 2;

    std::vector<int> seen;
    const RunResult res = run_active_learning(
        f, init, 8, KernelFamily::Gaussian, acq, fo,
        [&seen](int n, const GPModel&) { seen.push_back(n); });

    CHECK(res.log.records.size() == 8);
    CHECK(res.model.n() == 8);
    CHECK(seen == std::vector<int>{4, 5, 6, 7, 8});
    double best = res.log.records[0].y;
    for (std::size_t i = 0; i < res.log.records.size(); ++i) {
        const auto& rec = res.log.records[i];
        CHECK(rec.iter == static_cast<int>(i));
        CHECK(rec.has_acq == (i >= 4));
        best = std::min(best, rec.y);
        CHECK(rec.best_y == best);
        CHECK(rec.y == f(rec.x));
    }

    // a rerun reproduces the sampled points bitwise
    const RunResult again =
        run_active_learning(f, init, 8, KernelFamily::Gaussian, acq, fo);
    CHECK((again.model.design - res.model.design).norm() == 0.0);
}

TEST_CASE("active learning edge cases") {
    const auto f = [](const Vector& x) { return x[0]; };
    const DesignMatrix init = maximin_lhd(4, 1, 2, 100);
    AcquisitionSpec acq;
    FitOptions fo;

    // budget equal to the design size: evaluate and fit once, acquire nothing
    const RunResult res = run_active_learning(f, init, 4, KernelFamily::MIM, acq, fo);
    CHECK(res.log.records.size() == 4);
    for (const auto& rec : res.log.records) CHECK(!rec.has_acq);

    CHECK_THROWS_AS(run_active_learning(f, init, 3, KernelFamily::MIM, acq, fo),
                    ValidationError);

    DesignMatrix tiny;
    tiny.points = Matrix::Constant(1, 1, 0.5);
    CHECK_THROWS_AS(run_active_learning(f, tiny, 5, KernelFamily::MIM, acq, fo),
                    ValidationError);
}

TEST_CASE("fit failures carry the iteration count") {
    const auto f = [](const Vector& x) { return x[0]; };
    DesignMatrix init;
    init.points = Matrix(3, 1);
    init.points << 0.4, 0.4, 0.9;  // duplicate rows
    AcquisitionSpec acq;
    FitOptions fo;
    fo.nugget = 0.0;
    CHECK_THROWS_WITH_AS(run_active_learning(f, init, 5, KernelFamily::Gaussian, acq, fo),
                         doctest::Contains("refit with 3 points"),
                         NotPositiveDefinite);
}

TEST_CASE("run log files") {
    TempDir tmp("acq");
    const auto f = [](const Vector& x) { return std::abs(x[0] - 0.6); };
    const DesignMatrix init = maximin_lhd(3, 1, 7, 100);
    AcquisitionSpec acq;
    acq.optimizer.n_candidates = 100;
    FitOptions fo;
    fo.restarts = 2;

    RunResult res = run_active_learning(f, init, 5, KernelFamily::MIM, acq, fo);
    res.log.function_name = "fold1";
    res.log.seed = 99;

    const std::string p1 = tmp.file("run1.csv");
    write_runlog_csv(res.log, p1, false);
    const std::string text = slurp(p1);

    CHECK(text.find("# alkit 1.0.0 run log\n") == 0);
    CHECK(text.find("# function=fold1 d=1 family=mim generator=maximin_lhd acq=alm\n") !=
          std::string::npos);
    CHECK(text.find("# seed=99 n_init=3 n_total=5\n") != std::string::npos);
    CHECK(text.find("iter,x1,y,best_y,acq_value,elapsed_ms\n") != std::string::npos);

    // initial rows leave the acquisition cell empty and timing reads 0
    std::istringstream lines(text);
    std::string line;
    int data_rows = 0, empty_acq = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("iter", 0) == 0) continue;
        ++data_rows;
        CHECK(line.substr(line.size() - 2) == ",0");
        const auto tail = line.find(",,");
        if (tail != std::string::npos) ++empty_acq;
    }
    CHECK(data_rows == 5);
    CHECK(empty_acq == 3);

    // identical reruns give byte-identical files once timing is suppressed
    RunResult res2 = run_active_learning(f, init, 5, KernelFamily::MIM, acq, fo);
    res2.log.function_name = "fold1";
    res2.log.seed = 99;
    const std::string p2 = tmp.file("run2.csv");
    write_runlog_csv(res2.log, p2, false);
    CHECK(slurp(p2) == text);
}

TEST_CASE("acquisition names") {
    CHECK(to_string(AcquisitionKind::ALM) == "alm");
    CHECK(to_string(AcquisitionKind::EI) == "ei");
    CHECK(acquisition_from_string("alm") == AcquisitionKind::ALM);
    CHECK(acquisition_from_string("ei") == AcquisitionKind::EI);
    CHECK_THROWS_AS(acquisition_from_string("ucb"), ValidationError);
}

TEST_SUITE_END();
