#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "alkit/types.hpp"

namespace alkit {

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// Every randomized routine in the library takes an explicit 64-bit seed and
// derives sub-seeds with hash64, so identical seeds give identical output on
// any platform. Uniform doubles are built directly from the top 53 bits of
// the generator output; none of the distribution adapters from <random> are
// used because their output is implementation-defined.
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive combination of a seed and a stream index.
std::uint64_t hash64(std::uint64_t a, std::uint64_t b);

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n); n must be positive.
    int uniform_int(int n);

    Vector uniform_vec(int d);

  private:
    std::mt19937_64 eng_;
};

// Fixed-order pairwise (cascade) summation; deterministic and far more
// accurate than a running sum for long accumulations.
double pairwise_sum(const std::vector<double>& values);

// log(sum_i exp(v_i)) without overflow; v may contain -inf entries.
double log_sum_exp(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// SPD linear algebra.
// ---------------------------------------------------------------------------

struct CholeskyFactor {
    Matrix L;                // lower triangular, A = L L^T
    double log_det = 0.0;    // log det A
    double jitter_used = 0.0;

    int n() const { return static_cast<int>(L.rows()); }

    // A^{-1} b
    Vector solve(const Vector& b) const;

    // b^T A^{-1} b, always >= 0 up to roundoff
    double quad_form(const Vector& b) const;
};

// Cholesky with escalating diagonal jitter. Tries eta first; on failure
// multiplies by 10 until the factorization succeeds or the jitter would
// exceed 1e-2, then throws NotPositiveDefinite. With eta == 0 there is
// nothing to escalate, so a singular matrix fails immediately.
CholeskyFactor cholesky(const Matrix& A, double eta);

// Standard normal density and distribution function. norm_cdf is accurate in
// the far tails (built on erfc, not erf).
double norm_pdf(double x);
double norm_cdf(double x);

// ---------------------------------------------------------------------------
// Global maximization over the unit box.
//
// Evaluates a batch of seeded uniform candidates, then polishes the best few
// (and every caller-supplied start) with a coordinate-wise pattern search:
// step 0.25, halved whenever no coordinate move improves, floor 1e-4, moves
// clamped to [0, 1]^d. Deterministic for a fixed seed; ties break toward the
// earliest point in evaluation order. The objective may return -inf to mark
// infeasible points.
// ---------------------------------------------------------------------------

struct BoxOptimizerConfig {
    int n_candidates = 1000;
    int n_polish_starts = 20;   // extra starts always polish, even beyond this
    int max_polish_evals = 200; // per start
    double tol = 1e-6;          // relative gain below which the step shrinks
    std::uint64_t seed = 0;
};

struct BoxOptimum {
    Vector x;
    double value = 0.0;
    // Every evaluated candidate and every polished end point, best first.
    // Callers that need fallbacks (e.g. duplicate avoidance) walk this list.
    std::vector<std::pair<Vector, double>> ranked;
};

BoxOptimum maximize_box(const std::function<double(const Vector&)>& f, int d,
                        const BoxOptimizerConfig& config,
                        const std::vector<Vector>& extra_starts = {});

}  // namespace alkit
