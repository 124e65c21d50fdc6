#include "alkit/gp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "alkit/numeric.hpp"

namespace alkit {

namespace {

constexpr double kSigmaFloor = 1e-300;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_data(const Matrix& X, const Vector& y, int min_rows) {
    const int n = static_cast<int>(X.rows());
    if (n < min_rows) {
        throw ValidationError("need at least " + std::to_string(min_rows) +
                              " observations, got " + std::to_string(n));
    }
    if (y.size() != n) throw DimensionMismatch("X and y row counts differ");
    if (X.cols() < 1) throw ValidationError("design has no columns");
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < X.cols(); ++k) {
            if (!(X(i, k) >= 0.0 && X(i, k) <= 1.0)) {
                std::ostringstream msg;
                msg << "design row " << i + 1 << ", coordinate " << k + 1
                    << " outside [0, 1]";
                throw ValidationError(msg.str());
            }
        }
        if (!std::isfinite(y[i])) {
            throw ValidationError("response " + std::to_string(i + 1) + " is not finite");
        }
    }
}

// Maps hyperparameters to the optimizer's unit box: log theta coordinates
// first, then alpha (linear) when the family has one.
struct ParamMap {
    KernelFamily family;
    int d;
    double log_lo, log_hi;
    double alpha_lo, alpha_hi;
    double nugget;

    int n_params() const { return d + (family_uses_alpha(family) ? 1 : 0); }

    KernelSpec decode(const Vector& t) const {
        KernelSpec spec;
        spec.family = family;
        spec.nugget = nugget;
        spec.theta.resize(d);
        for (int k = 0; k < d; ++k) {
            spec.theta[k] = std::exp(log_lo + (log_hi - log_lo) * t[k]);
        }
        if (family_uses_alpha(family)) {
            spec.alpha = alpha_lo + (alpha_hi - alpha_lo) * t[d];
        }
        return spec;
    }

    Vector encode(const KernelSpec& spec) const {
        Vector t(n_params());
        for (int k = 0; k < d; ++k) {
            const double lt = std::log(spec.theta[k]);
            t[k] = std::clamp((lt - log_lo) / (log_hi - log_lo), 0.0, 1.0);
        }
        if (family_uses_alpha(family)) {
            t[d] = std::clamp((spec.alpha - alpha_lo) / (alpha_hi - alpha_lo), 0.0, 1.0);
        }
        return t;
    }
};

GPModel finalize_model(const Matrix& X, const Vector& y, const KernelSpec& spec,
                       double mu, double sigma2, double nll, bool constant) {
    GPModel m;
    m.design = X;
    m.y = y;
    m.spec = spec;
    m.mu = mu;
    m.sigma2 = sigma2;
    m.nll = nll;
    m.constant = constant;
    m.chol = cholesky(correlation_matrix(spec, X), spec.nugget);
    if (constant) {
        m.weights = Vector::Zero(y.size());
    } else {
        m.weights = m.chol.solve(y - Vector::Constant(y.size(), mu));
    }
    return m;
}

}  // namespace

NllResult concentrated_nll(const KernelSpec& spec, const Matrix& X, const Vector& y) {
    spec.validate();
    check_data(X, y, 1);
    if (X.cols() != spec.dim()) {
        throw DimensionMismatch("kernel dimension does not match the design");
    }
    const int n = static_cast<int>(X.rows());
    const CholeskyFactor chol = cholesky(correlation_matrix(spec, X), spec.nugget);
    const Vector ones = Vector::Ones(n);
    const Vector rinv_one = chol.solve(ones);
    const double denom = rinv_one.sum();  // 1^T R^{-1} 1 > 0 for SPD R
    NllResult res;
    res.mu_hat = rinv_one.dot(y) / denom;
    res.sigma2_hat = chol.quad_form(y - Vector::Constant(n, res.mu_hat)) / n;
    res.nll = n * std::log(std::max(res.sigma2_hat, kSigmaFloor)) + chol.log_det;
    return res;
}

GPModel fit(const Matrix& X, const Vector& y, KernelFamily family,
            const FitOptions& options) {
    check_data(X, y, 2);
    if (!(options.theta_lo > 0.0 && options.theta_lo < options.theta_hi)) {
        throw ValidationError("fit: bad theta bounds");
    }
    if (!(options.alpha_lo < options.alpha_hi)) {
        throw ValidationError("fit: bad alpha bounds");
    }
    if (options.restarts < 1) throw ValidationError("fit: restarts must be >= 1");

    const int d = static_cast<int>(X.cols());
    const ParamMap pm{family,
                      d,
                      std::log(options.theta_lo),
                      std::log(options.theta_hi),
                      options.alpha_lo,
                      options.alpha_hi,
                      options.nugget};

    if (y.maxCoeff() - y.minCoeff() == 0.0) {
        KernelSpec spec = KernelSpec::isotropic(family, d, options.theta_init,
                                                options.alpha_init, options.nugget);
        return finalize_model(X, y, spec, y[0], 0.0,
                              std::numeric_limits<double>::quiet_NaN(), true);
    }

    const auto objective = [&](const Vector& t) {
        try {
            return -concentrated_nll(pm.decode(t), X, y).nll;
        } catch (const NotPositiveDefinite&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    std::vector<Vector> starts;
    starts.push_back(pm.encode(KernelSpec::isotropic(
        family, d, options.theta_init, options.alpha_init, options.nugget)));
    for (const KernelSpec& warm : options.warm_starts) {
        if (warm.dim() != d || warm.family != family) {
            throw ValidationError("fit: warm start does not match family/dimension");
        }
        starts.push_back(pm.encode(warm));
    }
    Rng rng(hash64(options.seed, 0x57a7));
    for (int r = 1; r < options.restarts; ++r) {
        starts.push_back(rng.uniform_vec(pm.n_params()));
    }

    BoxOptimizerConfig cfg;
    cfg.n_candidates = 0;  // the start list is the whole search
    cfg.n_polish_starts = static_cast<int>(starts.size());
    cfg.max_polish_evals = std::max(200, 36 * pm.n_params());
    cfg.tol = 1e-6;
    cfg.seed = hash64(options.seed, 0x0b07);

    const BoxOptimum opt = maximize_box(objective, pm.n_params(), cfg, starts);
    if (!std::isfinite(opt.value)) {
        throw NotPositiveDefinite(
            "fit: correlation matrix factorization failed at every start");
    }
    const KernelSpec spec = pm.decode(opt.x);
    const NllResult res = concentrated_nll(spec, X, y);
    return finalize_model(X, y, spec, res.mu_hat, res.sigma2_hat, res.nll, false);
}

GPModel fit_fixed(const Matrix& X, const Vector& y, const KernelSpec& spec) {
    const NllResult res = concentrated_nll(spec, X, y);
    const bool constant = y.maxCoeff() - y.minCoeff() == 0.0;
    return finalize_model(X, y, spec, res.mu_hat, constant ? 0.0 : res.sigma2_hat,
                          res.nll, constant);
}

GPModel fit_fixed(const Matrix& X, const Vector& y, const KernelSpec& spec,
                  double mu, double sigma2) {
    spec.validate();
    check_data(X, y, 1);
    if (X.cols() != spec.dim()) {
        throw DimensionMismatch("kernel dimension does not match the design");
    }
    if (!(sigma2 >= 0.0)) throw ValidationError("fit_fixed: sigma2 must be >= 0");
    return finalize_model(X, y, spec, mu, sigma2,
                          std::numeric_limits<double>::quiet_NaN(),
                          y.maxCoeff() - y.minCoeff() == 0.0 && sigma2 == 0.0);
}

Prediction predict(const GPModel& model, const Vector& x) {
    if (x.size() != model.d()) {
        throw DimensionMismatch("predict: point dimension does not match the model");
    }
    if (model.constant) return {model.mu, 0.0};
    const Vector r = correlation_vector(model.spec, model.design, x);
    Prediction p;
    p.mean = model.mu + r.dot(model.weights);
    const double reduction = model.chol.quad_form(r);
    p.var = model.sigma2 * std::max(0.0, 1.0 - reduction);
    return p;
}

void batch_predict(const GPModel& model, const Matrix& X, Vector& means, Vector& vars) {
    if (X.cols() != model.d()) {
        throw DimensionMismatch("batch_predict: dimension does not match the model");
    }
    const int n = static_cast<int>(X.rows());
    means.resize(n);
    vars.resize(n);
    for (int i = 0; i < n; ++i) {
        const Prediction p = predict(model, X.row(i));
        means[i] = p.mean;
        vars[i] = p.var;
    }
}

void save_model(const GPModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "gpmodel v1 family=" << to_string(model.spec.family) << " d=" << model.d()
        << " n=" << model.n() << "\n";
    out << "theta=";
    for (int k = 0; k < model.d(); ++k) out << (k ? "," : "") << fmt17(model.spec.theta[k]);
    out << "\n";
    if (family_uses_alpha(model.spec.family)) {
        out << "alpha=" << fmt17(model.spec.alpha) << "\n";
    }
    out << "nugget=" << fmt17(model.spec.nugget) << "\n";
    out << "mu=" << fmt17(model.mu) << "\n";
    out << "sigma2=" << fmt17(model.sigma2) << "\n";
    if (model.constant) out << "constant=1\n";
    out << "data\n";
    for (int k = 0; k < model.d(); ++k) out << "x" << k + 1 << ",";
    out << "y\n";
    for (int i = 0; i < model.n(); ++i) {
        for (int k = 0; k < model.d(); ++k) out << fmt17(model.design(i, k)) << ",";
        out << fmt17(model.y[i]) << "\n";
    }
    if (!out) throw ValidationError("failed while writing '" + path + "'");
}

GPModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("model file is empty");

    std::istringstream head(line);
    std::string magic, version;
    head >> magic >> version;
    if (magic != "gpmodel" || version != "v1") {
        throw ValidationError("model file: expected 'gpmodel v1' header");
    }
    KernelSpec spec;
    int d = 0, n = 0;
    std::string tok;
    while (head >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ValidationError("model header: bad token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "family") {
            spec.family = kernel_family_from_string(val);
        } else if (key == "d") {
            d = std::stoi(val);
        } else if (key == "n") {
            n = std::stoi(val);
        } else {
            throw ValidationError("model header: unknown key '" + key + "'");
        }
    }
    if (d < 1 || n < 1) throw ValidationError("model header: missing d or n");

    double mu = 0.0, sigma2 = 0.0;
    bool constant = false;
    bool saw_theta = false, saw_mu = false, saw_sigma2 = false, saw_data = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "data") {
            saw_data = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("model file: expected key=value, got '" + line + "'");
        }
        const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "theta") {
            std::istringstream ts(val);
            std::string cell;
            std::vector<double> th;
            while (std::getline(ts, cell, ',')) th.push_back(std::stod(cell));
            if (static_cast<int>(th.size()) != d) {
                throw ValidationError("model file: theta length does not match d");
            }
            spec.theta = Eigen::Map<Vector>(th.data(), static_cast<int>(th.size()));
            saw_theta = true;
        } else if (key == "alpha") {
            spec.alpha = std::stod(val);
        } else if (key == "nugget") {
            spec.nugget = std::stod(val);
        } else if (key == "mu") {
            mu = std::stod(val);
            saw_mu = true;
        } else if (key == "sigma2") {
            sigma2 = std::stod(val);
            saw_sigma2 = true;
        } else if (key == "constant") {
            constant = val == "1";
        } else {
            throw ValidationError("model file: unknown key '" + key + "'");
        }
    }
    if (!saw_theta || !saw_mu || !saw_sigma2 || !saw_data) {
        throw ValidationError("model file: missing theta, mu, sigma2 or data section");
    }
    if (!std::getline(in, line)) throw ValidationError("model file: missing data header");

    Matrix X(n, d);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw ValidationError("model file: expected " + std::to_string(n) +
                                  " data rows");
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string cell;
        for (int k = 0; k <= d; ++k) {
            if (!std::getline(ls, cell, ',')) {
                throw ValidationError("model file: short data row " + std::to_string(i + 1));
            }
            const double v = std::stod(cell);
            if (k < d) {
                X(i, k) = v;
            } else {
                y[i] = v;
            }
        }
    }
    GPModel m = fit_fixed(X, y, spec, mu, sigma2);
    m.constant = constant;
    if (constant) m.weights = Vector::Zero(n);
    return m;
}

}  // namespace alkit
