#pragma once

#include <string>
#include <vector>

#include "alkit/kernels.hpp"
#include "alkit/types.hpp"

namespace alkit {

// Small-theta limits of the interpolator's reduction term r(x)^T R^{-1} r(x).
// As the length scales shrink, the design decorrelates (R -> I) and the
// normalized reduction converges to an inverse-distance sum over the design:
//
//   IM, theta_k = theta:   r^T R^{-1} r / theta^(4a) -> sum_i |x - x_i|^(-4a)
//   MIM, prod theta_k^(-4a) r^T R^{-1} r -> sum_i prod_k |x_k - x_ik|^(-4a)
//
// The MIM limit depends on per-coordinate distances only: points that align
// with x in any single coordinate dominate it, no matter how far away they
// are in the remaining coordinates. These checks evaluate both sides along a
// decreasing theta sequence; everything runs in log space so tiny length
// scales cannot underflow.

struct LimitCheckReport {
    std::vector<double> theta_sequence;
    std::vector<double> lhs_values;      // normalized reduction at each theta
    double rhs_value = 0.0;              // the limit
    std::vector<double> relative_errors;
    double tol = 0.0;
    bool converged = false;              // last relative error <= tol
};

// Isotropic IM limit. Requires x at inf-distance >= 1e-3 from every design
// row (PointInDesign otherwise) and a strictly decreasing theta sequence
// within [1e-3, 1e3].
LimitCheckReport theorem1_check(const Matrix& design, const Vector& x, double alpha,
                                const std::vector<double>& theta_sequence =
                                    {1e-1, 1e-2, 1e-3},
                                double tol = 0.01);

// MIM limit with equal length scales. Additionally requires per-coordinate
// separation |x_k - x_ik| >= 1e-3 for every row and coordinate
// (CoordinateCollision otherwise).
LimitCheckReport theorem2_check(const Matrix& design, const Vector& x, double alpha,
                                const std::vector<double>& theta_sequence =
                                    {1e-1, 1e-2, 1e-3},
                                double tol = 0.01);

// Eigenvalue bracket r^T r / lmax <= r^T R^{-1} r <= r^T r / lmin, evaluated
// with a dense symmetric eigensolve (n <= 100).
struct SandwichResult {
    double lower = 0.0;
    double quad = 0.0;
    double upper = 0.0;
    bool ordered = false;
};

SandwichResult sandwich_check(const KernelSpec& spec, const Matrix& design,
                              const Vector& x);

// Scores a candidate x against an existing design by the limit expressions
// themselves, usable as cheap space-filling criteria for sequential points:
// Maximin uses the isotropic sum, MaxPro the per-coordinate product sum.
// Returns +inf when x collides with a design row (Maximin: identical point;
// MaxPro: any exactly matching coordinate).
enum class SequentialCriterion { Maximin, MaxPro };

double sequential_criterion(const Matrix& design, const Vector& x, double alpha,
                            SequentialCriterion kind);

// Frozen random instances for the limit checks, bundled with the library;
// each instance satisfies both separation preconditions.
struct TheoryInstance {
    int id = 0;
    double alpha = 1.0;
    Matrix design;
    Vector x;
};

std::vector<TheoryInstance> theory_corpus();
std::vector<TheoryInstance> load_theory_corpus(const std::string& path);

// One CSV row per (instance, theorem, theta): instance id, theorem, alpha,
// theta, lhs, rhs, relative error, converged flag.
void write_theory_report_csv(const std::vector<TheoryInstance>& corpus,
                             const std::string& path, double tol = 0.01);

}  // namespace alkit
