#include "alkit/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alkit/embedded_data.hpp"
#include "alkit/numeric.hpp"

namespace alkit {

namespace {

constexpr double kSeparation = 1e-3;

void check_query(const Matrix& design, const Vector& x) {
    if (design.rows() < 1) throw ValidationError("limit check: empty design");
    if (x.size() != design.cols()) {
        throw DimensionMismatch("limit check: point dimension does not match design");
    }
}

void check_theta_sequence(const std::vector<double>& seq) {
    if (seq.empty()) throw ValidationError("limit check: empty theta sequence");
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!(seq[i] > 0.0)) throw ValidationError("limit check: theta must be positive");
        if (i > 0 && !(seq[i] < seq[i - 1])) {
            throw ValidationError("limit check: theta sequence must strictly decrease");
        }
    }
}

// Shared evaluation: log r_i(theta) from a per-point closure, the quadratic
// form on the rescaled vector, and the log normalizer. Everything stays in
// logs until the final ratio so theta = 1e-3 at alpha = 3 cannot underflow.
LimitCheckReport run_limit_check(const Matrix& design, double alpha,
                                 const std::vector<double>& theta_seq, double tol,
                                 KernelFamily family,
                                 const std::function<double(int, double)>& log_r,
                                 const std::function<double(double)>& log_norm,
                                 double log_rhs) {
    const int n = static_cast<int>(design.rows());
    const int d = static_cast<int>(design.cols());
    LimitCheckReport report;
    report.theta_sequence = theta_seq;
    report.tol = tol;
    report.rhs_value = std::exp(log_rhs);

    for (double theta : theta_seq) {
        const KernelSpec spec = KernelSpec::isotropic(family, d, theta, alpha, 0.0);
        const CholeskyFactor chol = cholesky(correlation_matrix(spec, design), 0.0);
        std::vector<double> logs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) logs[static_cast<std::size_t>(i)] = log_r(i, theta);
        const double m = *std::max_element(logs.begin(), logs.end());
        Vector w(n);
        for (int i = 0; i < n; ++i) w[i] = std::exp(logs[static_cast<std::size_t>(i)] - m);
        const double quad = chol.quad_form(w);  // e^{-2m} r^T R^{-1} r
        const double log_lhs = 2.0 * m + std::log(quad) + log_norm(theta);
        report.lhs_values.push_back(std::exp(log_lhs));
        report.relative_errors.push_back(std::abs(std::expm1(log_lhs - log_rhs)));
    }
    report.converged = report.relative_errors.back() <= tol;
    return report;
}

}  // namespace

LimitCheckReport theorem1_check(const Matrix& design, const Vector& x, double alpha,
                                const std::vector<double>& theta_sequence, double tol) {
    check_query(design, x);
    check_theta_sequence(theta_sequence);
    const int n = static_cast<int>(design.rows());

    Vector dist2(n);
    for (int i = 0; i < n; ++i) {
        const Vector diff = design.row(i).transpose() - x;
        if (diff.cwiseAbs().maxCoeff() < kSeparation) {
            std::ostringstream msg;
            msg << "query point is within " << kSeparation << " of design row " << i + 1
                << " in the max norm";
            throw PointInDesign(msg.str());
        }
        dist2[i] = diff.squaredNorm();
    }

    std::vector<double> rhs_logs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        rhs_logs[static_cast<std::size_t>(i)] = -2.0 * alpha * std::log(dist2[i]);
    }
    const double log_rhs = log_sum_exp(rhs_logs);

    return run_limit_check(
        design, alpha, theta_sequence, tol, KernelFamily::IM,
        [&](int i, double theta) {
            return -alpha * std::log1p(dist2[i] / (theta * theta));
        },
        [&](double theta) { return -4.0 * alpha * std::log(theta); }, log_rhs);
}

LimitCheckReport theorem2_check(const Matrix& design, const Vector& x, double alpha,
                                const std::vector<double>& theta_sequence, double tol) {
    check_query(design, x);
    check_theta_sequence(theta_sequence);
    const int n = static_cast<int>(design.rows());
    const int d = static_cast<int>(design.cols());

    Matrix diff2(n, d);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            const double delta = std::abs(x[k] - design(i, k));
            if (delta < kSeparation) {
                std::ostringstream msg;
                msg << "query coordinate " << k + 1 << " is within " << kSeparation
                    << " of design row " << i + 1;
                throw CoordinateCollision(msg.str());
            }
            diff2(i, k) = delta * delta;
        }
    }

    std::vector<double> rhs_logs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += std::log(diff2(i, k));
        rhs_logs[static_cast<std::size_t>(i)] = -2.0 * alpha * s;
    }
    const double log_rhs = log_sum_exp(rhs_logs);

    return run_limit_check(
        design, alpha, theta_sequence, tol, KernelFamily::MIM,
        [&](int i, double theta) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += std::log1p(diff2(i, k) / (theta * theta));
            return -alpha * s;
        },
        [&](double theta) { return -4.0 * alpha * d * std::log(theta); }, log_rhs);
}

SandwichResult sandwich_check(const KernelSpec& spec, const Matrix& design,
                              const Vector& x) {
    check_query(design, x);
    if (design.rows() > 100) {
        throw ValidationError("sandwich_check: dense eigensolve capped at n = 100");
    }
    const Matrix R = correlation_matrix(spec, design);
    const Vector r = correlation_vector(spec, design, x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(R);
    if (es.info() != Eigen::Success) {
        throw NumericalError("sandwich_check: eigensolver failed");
    }
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmin > 0.0)) {
        throw NotPositiveDefinite("sandwich_check: non-positive eigenvalue");
    }
    SandwichResult res;
    res.quad = cholesky(R, spec.nugget).quad_form(r);
    res.lower = r.squaredNorm() / lmax;
    res.upper = r.squaredNorm() / lmin;
    const double slack = 1e-10 * std::max(1.0, res.quad);
    res.ordered = res.lower <= res.quad + slack && res.quad <= res.upper + slack;
    return res;
}

double sequential_criterion(const Matrix& design, const Vector& x, double alpha,
                            SequentialCriterion kind) {
    check_query(design, x);
    const int n = static_cast<int>(design.rows());
    const int d = static_cast<int>(design.cols());
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(n));
    if (kind == SequentialCriterion::Maximin) {
        for (int i = 0; i < n; ++i) {
            const double dist2 = (design.row(i).transpose() - x).squaredNorm();
            if (dist2 == 0.0) return std::numeric_limits<double>::infinity();
            logs.push_back(-2.0 * alpha * std::log(dist2));
        }
    } else {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                const double delta = std::abs(x[k] - design(i, k));
                if (delta == 0.0) return std::numeric_limits<double>::infinity();
                s += std::log(delta);
            }
            logs.push_back(-4.0 * alpha * s);
        }
    }
    return std::exp(log_sum_exp(logs));
}

namespace {

std::vector<TheoryInstance> parse_corpus(const nlohmann::json& doc,
                                         const std::string& origin) {
    std::vector<TheoryInstance> out;
    try {
        for (const auto& item : doc.at("instances")) {
            TheoryInstance inst;
            inst.id = item.at("id").get<int>();
            inst.alpha = item.at("alpha").get<double>();
            const auto& rows = item.at("design");
            const int n = static_cast<int>(rows.size());
            const int d = static_cast<int>(rows.at(0).size());
            inst.design.resize(n, d);
            for (int i = 0; i < n; ++i) {
                for (int k = 0; k < d; ++k) {
                    inst.design(i, k) = rows.at(i).at(k).get<double>();
                }
            }
            const auto& xq = item.at("x");
            if (static_cast<int>(xq.size()) != d) {
                throw ValidationError(origin + ": instance x dimension mismatch");
            }
            inst.x.resize(d);
            for (int k = 0; k < d; ++k) inst.x[k] = xq.at(k).get<double>();
            out.push_back(std::move(inst));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    if (out.empty()) throw ValidationError(origin + ": no instances");
    return out;
}

}  // namespace

std::vector<TheoryInstance> theory_corpus() {
    static const std::vector<TheoryInstance> corpus =
        parse_corpus(nlohmann::json::parse(std::string(embedded::kTheoryCorpus)),
                     "bundled corpus");
    return corpus;
}

std::vector<TheoryInstance> load_theory_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open corpus file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("corpus file '" + path + "': " + e.what());
    }
    return parse_corpus(doc, "corpus file '" + path + "'");
}

void write_theory_report_csv(const std::vector<TheoryInstance>& corpus,
                             const std::string& path, double tol) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "instance,theorem,alpha,n,d,theta,lhs,rhs,rel_error,converged\n";
    char buf[64];
    auto emit = [&](const TheoryInstance& inst, int which,
                    const LimitCheckReport& rep) {
        for (std::size_t i = 0; i < rep.theta_sequence.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.6g", rep.theta_sequence[i]);
            out << inst.id << "," << which << "," << inst.alpha << ","
                << inst.design.rows() << "," << inst.design.cols() << "," << buf;
            std::snprintf(buf, sizeof(buf), "%.12g", rep.lhs_values[i]);
            out << "," << buf;
            std::snprintf(buf, sizeof(buf), "%.12g", rep.rhs_value);
            out << "," << buf;
            std::snprintf(buf, sizeof(buf), "%.6g", rep.relative_errors[i]);
            out << "," << buf << "," << (rep.converged ? 1 : 0) << "\n";
        }
    };
    for (const auto& inst : corpus) {
        emit(inst, 1, theorem1_check(inst.design, inst.x, inst.alpha, {1e-1, 1e-2, 1e-3}, tol));
        emit(inst, 2, theorem2_check(inst.design, inst.x, inst.alpha, {1e-1, 1e-2, 1e-3}, tol));
    }
    if (!out) throw ValidationError("failed while writing '" + path + "'");
}

}  // namespace alkit
