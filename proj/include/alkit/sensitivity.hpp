#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "alkit/designs.hpp"
#include "alkit/types.hpp"

namespace alkit {

// Total-effect Sobol' indices of a cheap predictor (typically a fitted
// surrogate) on [0,1]^d, via the Jansen pick-and-freeze estimator:
//
//   T_k = E[(f(A_j) - f(AB^k_j))^2] / (2 Var f)
//
// where A and B are the two d-column halves of a 2d-dimensional Sobol'
// block and AB^k is A with column k taken from B. The variance is estimated
// from the pooled f(A), f(B) values. A coordinate the predictor ignores
// gets T_k = 0 up to roundoff. Costs N * (d + 2) predictor calls.
struct SobolReport {
    Vector total_indices;
    int n_samples = 0;
    std::uint64_t seed = 0;
    std::string estimator = "jansen-pick-freeze";
};

// The seed selects which aligned block of the Sobol' sequence is used, so
// results are reproducible and distinct seeds give near-independent
// replicates. Throws ZeroVariance when the predictor is constant on the
// sample, and ValidationError when 2d exceeds the bundled Sobol' table.
SobolReport total_sobol(const std::function<double(const Vector&)>& predictor,
                        int d, int n_samples = 8192, std::uint64_t seed = 0);

// Morris-style screening from an OFAT-structured design and its responses:
// per block b and coordinate k the finite difference
//   e_bk = (y[factor row] - y[base row]) / (x change in coordinate k),
// summarized by mu_star_k = mean_b |e_bk| and sigma_k = sd_b(e_bk)
// (population sd; 0 when l == 1). Requires block metadata on the design.
struct ElementaryEffects {
    Vector mu_star;
    Vector sigma;
    int l = 0;
};

ElementaryEffects elementary_effects(const DesignMatrix& design, const Vector& y);

}  // namespace alkit
