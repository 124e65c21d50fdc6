#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alkit/kernels.hpp"
#include "alkit/numeric.hpp"
#include "alkit/types.hpp"

namespace alkit {

// Ordinary-kriging Gaussian process interpolator with a constant trend:
//
//   mean(x) = mu + r(x)^T R^{-1} (y - mu 1)
//   var(x)  = sigma2 * (1 - r(x)^T R^{-1} r(x))
//
// where R is the (nugget-augmented) correlation matrix of the design and
// r(x) the correlation vector. mu and sigma2 have closed-form maximum
// likelihood values given the kernel hyperparameters, so fitting only
// searches over theta (and alpha where the family has one).

struct FitOptions {
    double theta_init = 0.1;
    double alpha_init = 1.0;
    double theta_lo = 1e-3, theta_hi = 1e3;
    double alpha_lo = 0.01, alpha_hi = 3.0;
    double nugget = 1e-6;
    int restarts = 5;          // 1 start at the init point + restarts-1 random
    std::uint64_t seed = 0;
    // Extra polished starts, e.g. the previous model's hyperparameters when
    // refitting inside a sequential loop.
    std::vector<KernelSpec> warm_starts;
};

struct NllResult {
    double nll = 0.0;        // n log sigma2_hat + log det R  (constants dropped)
    double mu_hat = 0.0;
    double sigma2_hat = 0.0;
};

// Profile likelihood at fixed hyperparameters. Throws NotPositiveDefinite if
// the correlation matrix cannot be factorized even after jitter escalation.
NllResult concentrated_nll(const KernelSpec& spec, const Matrix& X, const Vector& y);

struct GPModel {
    Matrix design;
    Vector y;
    KernelSpec spec;
    double mu = 0.0;
    double sigma2 = 0.0;
    CholeskyFactor chol;   // factor of the nugget-augmented correlation matrix
    Vector weights;        // R^{-1} (y - mu 1)
    double nll = 0.0;
    bool constant = false; // y had zero range; model predicts (y[0], 0)

    int n() const { return static_cast<int>(design.rows()); }
    int d() const { return static_cast<int>(design.cols()); }
};

// Maximum likelihood fit. theta is searched on a log scale and alpha on a
// linear scale, both mapped to the unit box and optimized with maximize_box.
// Deterministic for fixed (data, options). Constant responses return a
// flagged constant model instead of failing.
GPModel fit(const Matrix& X, const Vector& y, KernelFamily family,
            const FitOptions& options = {});

// Skip estimation: use the given hyperparameters, with mu and sigma2 at their
// closed-form values (first overload) or pinned explicitly (second).
GPModel fit_fixed(const Matrix& X, const Vector& y, const KernelSpec& spec);
GPModel fit_fixed(const Matrix& X, const Vector& y, const KernelSpec& spec,
                  double mu, double sigma2);

struct Prediction {
    double mean = 0.0;
    double var = 0.0;  // clamped at 0
};

Prediction predict(const GPModel& model, const Vector& x);

// Row-wise predict; means and vars are resized to X.rows().
void batch_predict(const GPModel& model, const Matrix& X, Vector& means, Vector& vars);

// Plain-text model format:
//
//   gpmodel v1 family=<id> d=<d> n=<n>
//   theta=<t1,...,td>
//   alpha=<a>            (families with a shape exponent)
//   nugget=<eta>
//   mu=<mu>  sigma2=<s2>  (one per line)
//   constant=1           (only for constant models)
//   data
//   x1,...,xd,y          header then n CSV rows
//
// Numbers are written with 17 significant digits so doubles round-trip
// exactly; load refactorizes, giving bit-identical predictions.
void save_model(const GPModel& model, const std::string& path);
GPModel load_model(const std::string& path);

}  // namespace alkit
