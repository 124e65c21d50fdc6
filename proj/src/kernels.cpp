#include "alkit/kernels.hpp"

#include <cmath>
#include <sstream>

namespace alkit {

namespace {

constexpr double kThetaLo = 1e-3;
constexpr double kThetaHi = 1e3;
constexpr double kAlphaLo = 0.01;
constexpr double kAlphaHi = 3.0;
constexpr double kNuggetHi = 1e-2;

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::IM: return "im";
        case KernelFamily::MIM: return "mim";
        case KernelFamily::ExpProduct: return "expprod";
    }
    throw ValidationError("unknown kernel family enum value");
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "gaussian" || name == "gauss") return KernelFamily::Gaussian;
    if (name == "im") return KernelFamily::IM;
    if (name == "mim") return KernelFamily::MIM;
    if (name == "expprod") return KernelFamily::ExpProduct;
    throw ValidationError("unknown kernel family '" + name +
                          "' (expected gaussian, im, mim or expprod)");
}

bool family_uses_alpha(KernelFamily family) {
    return family == KernelFamily::IM || family == KernelFamily::MIM;
}

void KernelSpec::validate() const {
    if (theta.size() == 0) throw ValidationError("kernel spec has no length scales");
    for (int k = 0; k < theta.size(); ++k) {
        const double t = theta[k];
        if (!(t >= kThetaLo && t <= kThetaHi)) {
            std::ostringstream msg;
            msg << "theta[" << k << "] = " << t << " outside [" << kThetaLo << ", "
                << kThetaHi << "]";
            throw ValidationError(msg.str());
        }
    }
    if (family_uses_alpha(family) && !(alpha >= kAlphaLo && alpha <= kAlphaHi)) {
        std::ostringstream msg;
        msg << "alpha = " << alpha << " outside [" << kAlphaLo << ", " << kAlphaHi << "]";
        throw ValidationError(msg.str());
    }
    if (!(nugget >= 0.0 && nugget <= kNuggetHi)) {
        std::ostringstream msg;
        msg << "nugget = " << nugget << " outside [0, " << kNuggetHi << "]";
        throw ValidationError(msg.str());
    }
}

KernelSpec KernelSpec::isotropic(KernelFamily family, int d, double theta,
                                 double alpha, double nugget) {
    if (d < 1) throw ValidationError("kernel dimension must be positive");
    KernelSpec spec;
    spec.family = family;
    spec.theta = Vector::Constant(d, theta);
    spec.alpha = alpha;
    spec.nugget = nugget;
    return spec;
}

namespace {

// Core evaluation on two coordinate accessors; avoids Eigen temporaries in
// the matrix assembly loops.
template <typename A, typename B>
double eval_core(const KernelSpec& spec, const A& xi, const B& xj) {
    const int d = spec.dim();
    switch (spec.family) {
        case KernelFamily::Gaussian: {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                const double t = (xi(k) - xj(k)) / spec.theta[k];
                s += t * t;
            }
            return std::exp(-s);
        }
        case KernelFamily::IM: {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                const double t = (xi(k) - xj(k)) / spec.theta[k];
                s += t * t;
            }
            return std::pow(1.0 + s, -spec.alpha);
        }
        case KernelFamily::MIM: {
            // Literal product so the d-dimensional value factors exactly into
            // one-dimensional evaluations.
            double p = 1.0;
            for (int k = 0; k < d; ++k) {
                const double t = (xi(k) - xj(k)) / spec.theta[k];
                p *= std::pow(1.0 + t * t, -spec.alpha);
            }
            return p;
        }
        case KernelFamily::ExpProduct: {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                s += std::abs(xi(k) - xj(k)) / spec.theta[k];
            }
            return std::exp(-s);
        }
    }
    throw ValidationError("unknown kernel family enum value");
}

}  // namespace

double eval_kernel(const KernelSpec& spec, const Vector& xi, const Vector& xj) {
    if (xi.size() != spec.dim() || xj.size() != spec.dim()) {
        throw DimensionMismatch("kernel arguments must match theta's dimension");
    }
    return eval_core(
        spec, [&](int k) { return xi[k]; }, [&](int k) { return xj[k]; });
}

Matrix correlation_matrix(const KernelSpec& spec, const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    if (points.cols() != spec.dim()) {
        throw DimensionMismatch("design dimension does not match kernel spec");
    }
    Matrix R(n, n);
    for (int i = 0; i < n; ++i) {
        R(i, i) = 1.0 + spec.nugget;
        for (int j = i + 1; j < n; ++j) {
            const double v = eval_core(
                spec, [&](int k) { return points(i, k); },
                [&](int k) { return points(j, k); });
            R(i, j) = v;
            R(j, i) = v;
        }
    }
    return R;
}

Vector correlation_vector(const KernelSpec& spec, const Matrix& points,
                          const Vector& x) {
    const int n = static_cast<int>(points.rows());
    if (points.cols() != spec.dim() || x.size() != spec.dim()) {
        throw DimensionMismatch("point dimension does not match kernel spec");
    }
    Vector r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = eval_core(
            spec, [&](int k) { return points(i, k); }, [&](int k) { return x[k]; });
    }
    return r;
}

}  // namespace alkit
