#pragma once

#include <string>

#include "alkit/types.hpp"

namespace alkit {

// Stationary correlation families on the unit hypercube. All of them are 1 at
// zero distance and decay monotonically in every coordinate distance.
//
//   Gaussian:    exp(-sum_k dk^2 / theta_k^2)
//   IM:          (1 + sum_k dk^2 / theta_k^2)^(-alpha)
//   MIM:         prod_k (1 + dk^2 / theta_k^2)^(-alpha)
//   ExpProduct:  prod_k exp(-|dk| / theta_k)
//
// with dk = x_k - x'_k. IM and MIM share the shape exponent alpha; the other
// two ignore it. MIM is the product form of IM: heavy polynomial tails per
// coordinate, so a far-away point can stay informative about the coordinates
// in which it is close.
enum class KernelFamily { Gaussian, IM, MIM, ExpProduct };

std::string to_string(KernelFamily family);

// Accepts the ids used in files and on the command line: "gaussian" (or
// "gauss"), "im", "mim", "expprod". Throws ValidationError otherwise.
KernelFamily kernel_family_from_string(const std::string& name);

bool family_uses_alpha(KernelFamily family);

struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    Vector theta;         // per-coordinate length scales, one per dimension
    double alpha = 1.0;   // shape exponent for IM / MIM
    double nugget = 1e-6; // added to the correlation matrix diagonal only

    int dim() const { return static_cast<int>(theta.size()); }

    // Throws ValidationError unless every theta is in [1e-3, 1e3], alpha is
    // in [0.01, 3] (checked only for IM/MIM) and nugget is in [0, 1e-2].
    void validate() const;

    static KernelSpec isotropic(KernelFamily family, int d, double theta,
                                double alpha = 1.0, double nugget = 1e-6);
};

// Correlation between two points; in (0, 1], exactly 1 when xi == xj. The
// nugget is not applied here.
double eval_kernel(const KernelSpec& spec, const Vector& xi, const Vector& xj);

// n x n symmetric matrix with (1 + nugget) on the diagonal. Rows of `points`
// are the design sites.
Matrix correlation_matrix(const KernelSpec& spec, const Matrix& points);

// Correlations between `x` and every row of `points`; no nugget.
Vector correlation_vector(const KernelSpec& spec, const Matrix& points,
                          const Vector& x);

}  // namespace alkit
