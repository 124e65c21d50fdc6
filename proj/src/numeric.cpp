#include "alkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace alkit {

namespace {

constexpr double kMaxJitter = 1e-2;
constexpr double kPolishStep0 = 0.25;
constexpr double kPolishStepMin = 1e-4;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

int Rng::uniform_int(int n) {
    if (n <= 0) throw ValidationError("uniform_int needs a positive range");
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % un);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % un);
}

Vector Rng::uniform_vec(int d) {
    Vector v(d);
    for (int k = 0; k < d; ++k) v[k] = uniform01();
    return v;
}

double pairwise_sum(const std::vector<double>& values) {
    // Iterative cascade: combine adjacent partial sums until one remains.
    if (values.empty()) return 0.0;
    std::vector<double> acc = values;
    std::size_t m = acc.size();
    while (m > 1) {
        std::size_t half = m / 2;
        for (std::size_t i = 0; i < half; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
        if (m % 2 == 1) {
            acc[half] = acc[m - 1];
            m = half + 1;
        } else {
            m = half;
        }
    }
    return acc[0];
}

double log_sum_exp(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("log_sum_exp of an empty list");
    const double m = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(m)) return m;  // all -inf, or an inf/nan dominates
    std::vector<double> terms;
    terms.reserve(values.size());
    for (double v : values) terms.push_back(std::exp(v - m));
    return m + std::log(pairwise_sum(terms));
}

Vector CholeskyFactor::solve(const Vector& b) const {
    if (b.size() != L.rows()) throw DimensionMismatch("solve: size mismatch");
    Vector z = L.triangularView<Eigen::Lower>().solve(b);
    return L.transpose().triangularView<Eigen::Upper>().solve(z);
}

double CholeskyFactor::quad_form(const Vector& b) const {
    if (b.size() != L.rows()) throw DimensionMismatch("quad_form: size mismatch");
    Vector z = L.triangularView<Eigen::Lower>().solve(b);
    return z.squaredNorm();
}

CholeskyFactor cholesky(const Matrix& A, double eta) {
    if (A.rows() != A.cols()) throw DimensionMismatch("cholesky needs a square matrix");
    if (eta < 0.0) throw ValidationError("jitter must be non-negative");
    double jitter = eta;
    while (true) {
        Matrix B = A;
        if (jitter > eta) B.diagonal().array() += jitter - eta;
        Eigen::LLT<Matrix> llt(B);
        if (llt.info() == Eigen::Success) {
            CholeskyFactor f;
            f.L = llt.matrixL();
            f.jitter_used = jitter;
            f.log_det = 2.0 * f.L.diagonal().array().log().sum();
            return f;
        }
        if (jitter == 0.0) break;  // nothing to escalate from
        const double next = jitter * 10.0;
        if (next > kMaxJitter * (1.0 + 1e-12)) break;
        jitter = next;
    }
    std::ostringstream msg;
    msg << "matrix not positive definite (jitter reached " << jitter
        << "); likely duplicated points or degenerate length scales";
    throw NotPositiveDefinite(msg.str());
}

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

// Coordinate-wise pattern search from (x, fx); never returns a worse point.
std::pair<Vector, double> polish(const std::function<double(const Vector&)>& f,
                                 Vector x, double fx, int max_evals, double tol) {
    const int d = static_cast<int>(x.size());
    int evals = 0;
    double step = kPolishStep0;
    while (step >= kPolishStepMin && evals < max_evals) {
        int best_k = -1;
        double best_f = fx;
        Vector best_x = x;
        for (int k = 0; k < d && evals < max_evals; ++k) {
            for (double sgn : {1.0, -1.0}) {
                if (evals >= max_evals) break;
                Vector xn = x;
                xn[k] = clamp01(xn[k] + sgn * step);
                if (xn[k] == x[k]) continue;
                const double fn = f(xn);
                ++evals;
                if (fn > best_f) {
                    best_f = fn;
                    best_x = xn;
                    best_k = k;
                }
            }
        }
        if (best_k >= 0) {
            const double gain = best_f - fx;
            x = best_x;
            fx = best_f;
            if (!(gain > tol * std::max(1.0, std::abs(fx)))) step *= 0.5;
        } else {
            step *= 0.5;
        }
    }
    return {x, fx};
}

}  // namespace

BoxOptimum maximize_box(const std::function<double(const Vector&)>& f, int d,
                        const BoxOptimizerConfig& config,
                        const std::vector<Vector>& extra_starts) {
    if (d < 1) throw ValidationError("maximize_box: dimension must be positive");
    if (config.n_candidates < 1 && extra_starts.empty()) {
        throw ValidationError("maximize_box: no candidates and no starts");
    }
    if (config.tol <= 0.0) throw ValidationError("maximize_box: tol must be positive");

    std::vector<Vector> points;
    points.reserve(extra_starts.size() + static_cast<std::size_t>(config.n_candidates));
    for (const Vector& s : extra_starts) {
        if (s.size() != d) throw DimensionMismatch("extra start has wrong dimension");
        Vector c = s;
        for (int k = 0; k < d; ++k) c[k] = clamp01(c[k]);
        points.push_back(std::move(c));
    }
    Rng rng(config.seed);
    for (int i = 0; i < config.n_candidates; ++i) points.push_back(rng.uniform_vec(d));

    const int m = static_cast<int>(points.size());
    std::vector<double> values(m);
    for (int i = 0; i < m; ++i) values[i] = f(points[i]);

    // Starts to polish: every extra start, then the best-ranked candidates
    // until n_polish_starts points are covered.
    const int n_extra = static_cast<int>(extra_starts.size());
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });

    std::vector<int> starts;
    for (int i = 0; i < n_extra; ++i) starts.push_back(i);
    for (int idx : order) {
        if (static_cast<int>(starts.size()) >= std::max(config.n_polish_starts, n_extra))
            break;
        if (idx < n_extra) continue;
        starts.push_back(idx);
    }

    BoxOptimum out;
    out.ranked.reserve(points.size() + starts.size());
    for (int i = 0; i < m; ++i) out.ranked.emplace_back(points[i], values[i]);
    for (int idx : starts) {
        if (!std::isfinite(values[idx]) && values[idx] < 0) {
            // -inf start: polishing would only probe neighbours of an
            // infeasible point; keep it as a plain candidate.
            continue;
        }
        auto [px, pv] =
            polish(f, points[idx], values[idx], config.max_polish_evals, config.tol);
        out.ranked.emplace_back(std::move(px), pv);
    }

    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    out.x = out.ranked.front().first;
    out.value = out.ranked.front().second;
    return out;
}

}  // namespace alkit
