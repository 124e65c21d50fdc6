#include "alkit/sensitivity.hpp"

#include <cmath>

#include "alkit/numeric.hpp"
#include "alkit/sobol.hpp"

namespace alkit {

namespace {

std::uint64_t next_pow2(std::uint64_t v) {
    std::uint64_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

}  // namespace

SobolReport total_sobol(const std::function<double(const Vector&)>& predictor, int d,
                        int n_samples, std::uint64_t seed) {
    if (d < 1) throw ValidationError("total_sobol: d must be >= 1");
    if (2 * d > SobolSequence::max_dimension()) {
        throw ValidationError("total_sobol: 2d exceeds the bundled Sobol' table (d <= " +
                              std::to_string(SobolSequence::max_dimension() / 2) + ")");
    }
    if (n_samples < 2) throw ValidationError("total_sobol: n_samples must be >= 2");

    // A and B are the two halves of one 2d-dimensional Sobol' block. The seed
    // picks which power-of-two aligned block, skipping the origin block.
    SobolSequence seq(2 * d);
    const std::uint64_t block = next_pow2(static_cast<std::uint64_t>(n_samples));
    const std::uint64_t offset = block * (1 + splitmix64(seed) % 256);
    seq.seek(offset);
    const Matrix ab = seq.take(n_samples);

    const int n = n_samples;
    Vector fa(n), fb(n);
    Vector point(d);
    for (int j = 0; j < n; ++j) {
        point = ab.row(j).head(d);
        fa[j] = predictor(point);
        point = ab.row(j).tail(d);
        fb[j] = predictor(point);
    }

    // Pooled variance over the 2n A/B evaluations, in fixed summation order.
    std::vector<double> pool;
    pool.reserve(2 * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) pool.push_back(fa[j]);
    for (int j = 0; j < n; ++j) pool.push_back(fb[j]);
    const double mean = pairwise_sum(pool) / (2.0 * n);
    std::vector<double> sq;
    sq.reserve(pool.size());
    for (double v : pool) sq.push_back((v - mean) * (v - mean));
    const double variance = pairwise_sum(sq) / (2.0 * n);
    if (variance < 1e-30) {
        throw ZeroVariance("total_sobol: the predictor is constant on the sample");
    }

    SobolReport report;
    report.total_indices.resize(d);
    report.n_samples = n;
    report.seed = seed;
    std::vector<double> diffs(static_cast<std::size_t>(n));
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < n; ++j) {
            point = ab.row(j).head(d);
            point[k] = ab(j, d + k);
            const double fab = predictor(point);
            const double t = fa[j] - fab;
            diffs[static_cast<std::size_t>(j)] = t * t;
        }
        report.total_indices[k] = pairwise_sum(diffs) / (2.0 * n) / variance;
    }
    return report;
}

ElementaryEffects elementary_effects(const DesignMatrix& design, const Vector& y) {
    if (design.blocks.empty()) {
        throw ValidationError(
            "elementary_effects: design has no one-factor block metadata");
    }
    validate_ofat_structure(design);
    if (y.size() != design.n()) {
        throw DimensionMismatch("elementary_effects: y length does not match design");
    }
    const int d = design.d();
    const int l = static_cast<int>(design.blocks.size());

    ElementaryEffects out;
    out.mu_star = Vector::Zero(d);
    out.sigma = Vector::Zero(d);
    out.l = l;
    std::vector<double> effects(static_cast<std::size_t>(l));
    for (int k = 0; k < d; ++k) {
        for (int b = 0; b < l; ++b) {
            const auto& rows = design.blocks[static_cast<std::size_t>(b)];
            const int rf = rows.factor_rows[static_cast<std::size_t>(k)];
            const double dx = design.points(rf, k) - design.points(rows.base_row, k);
            effects[static_cast<std::size_t>(b)] = (y[rf] - y[rows.base_row]) / dx;
        }
        double mu = 0.0, mu_abs = 0.0;
        for (double e : effects) {
            mu += e;
            mu_abs += std::abs(e);
        }
        mu /= l;
        mu_abs /= l;
        double var = 0.0;
        for (double e : effects) var += (e - mu) * (e - mu);
        out.mu_star[k] = mu_abs;
        out.sigma[k] = l > 1 ? std::sqrt(var / l) : 0.0;
    }
    return out;
}

}  // namespace alkit
