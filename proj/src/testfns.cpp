#include "alkit/testfns.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace alkit {

namespace {

constexpr double kPi = std::numbers::pi;

double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }

// All evaluators take the active coordinates already mapped to the native
// domain of the function.

double levy(const Vector& z) {
    const int d = static_cast<int>(z.size());
    Vector w(d);
    for (int k = 0; k < d; ++k) w[k] = 1.0 + (z[k] - 1.0) / 4.0;
    const double s1 = std::sin(kPi * w[0]);
    double f = s1 * s1;
    for (int k = 0; k + 1 < d; ++k) {
        const double sk = std::sin(kPi * w[k] + 1.0);
        f += (w[k] - 1.0) * (w[k] - 1.0) * (1.0 + 10.0 * sk * sk);
    }
    const double sd = std::sin(2.0 * kPi * w[d - 1]);
    f += (w[d - 1] - 1.0) * (w[d - 1] - 1.0) * (1.0 + sd * sd);
    return f;
}

double ackley(const Vector& z) {
    const int d = static_cast<int>(z.size());
    const double a = 20.0, b = 0.2, c = 2.0 * kPi;
    double s2 = 0.0, sc = 0.0;
    for (int k = 0; k < d; ++k) {
        s2 += z[k] * z[k];
        sc += std::cos(c * z[k]);
    }
    return -a * std::exp(-b * std::sqrt(s2 / d)) - std::exp(sc / d) + a +
           std::numbers::e;
}

double rastrigin(const Vector& z) {
    const int d = static_cast<int>(z.size());
    double f = 10.0 * d;
    for (int k = 0; k < d; ++k) {
        f += z[k] * z[k] - 10.0 * std::cos(2.0 * kPi * z[k]);
    }
    return f;
}

double friedman(const Vector& z) {
    return 10.0 * std::sin(kPi * z[0] * z[1]) + 20.0 * (z[2] - 0.5) * (z[2] - 0.5) +
           10.0 * z[3] + 5.0 * z[4];
}

double detpep(const Vector& z) {
    const double t1 = z[0] - 2.0 + 8.0 * z[1] - 8.0 * z[1] * z[1];
    const double t2 = 3.0 - 4.0 * z[1];
    const double t3 = 2.0 * z[2] - 1.0;
    double f = 4.0 * t1 * t1 + t2 * t2 + 16.0 * std::sqrt(z[2] + 1.0) * t3 * t3;
    for (int i = 4; i <= 8; ++i) {
        double inner = 0.0;
        for (int j = 3; j <= i; ++j) inner += z[j - 1];
        f += i * std::log(1.0 + inner);
    }
    return f;
}

double otl_circuit(const Vector& z) {
    const double rb1 = z[0], rb2 = z[1], rf = z[2], rc1 = z[3], rc2 = z[4],
                 beta = z[5];
    const double vb1 = 12.0 * rb2 / (rb1 + rb2);
    const double brc = beta * (rc2 + 9.0);
    return (vb1 + 0.74) * brc / (brc + rf) + 11.35 * rf / (brc + rf) +
           0.74 * rf * brc / ((brc + rf) * rc1);
}

double piston(const Vector& z) {
    const double m = z[0], s = z[1], v0 = z[2], k = z[3], p0 = z[4], ta = z[5],
                 t0 = z[6];
    const double a = p0 * s + 19.62 * m - k * v0 / s;
    const double v =
        s / (2.0 * k) * (std::sqrt(a * a + 4.0 * k * p0 * v0 * ta / t0) - a);
    return 2.0 * kPi * std::sqrt(m / (k + s * s * p0 * v0 * ta / (t0 * v * v)));
}

double robot_arm(const Vector& z) {
    // z = (theta1..theta4, L1..L4)
    double u = 0.0, v = 0.0, angle = 0.0;
    for (int i = 0; i < 4; ++i) {
        angle += z[i];
        u += z[4 + i] * std::cos(angle);
        v += z[4 + i] * std::sin(angle);
    }
    return std::sqrt(u * u + v * v);
}

double wing_weight(const Vector& z) {
    const double sw = z[0], wfw = z[1], aspect = z[2], lam_deg = z[3], q = z[4],
                 taper = z[5], tc = z[6], nz = z[7], wdg = z[8], wp = z[9];
    const double lam = lam_deg * kPi / 180.0;
    const double c = std::cos(lam);
    return 0.036 * std::pow(sw, 0.758) * std::pow(wfw, 0.0035) *
               std::pow(aspect / (c * c), 0.6) * std::pow(q, 0.006) *
               std::pow(taper, 0.04) * std::pow(100.0 * tc / c, -0.3) *
               std::pow(nz * wdg, 0.49) +
           sw * wp;
}

struct BaseInfo {
    std::string name;
    int fixed_arity;  // 0: any dimension
    std::vector<std::pair<double, double>> domain;  // per input; cycled if arity 0
    double (*eval)(const Vector&);
    bool has_min;
    double min_value;
    double min_unit_coord;  // unit-box coordinate of the minimizer (isotropic)
};

const std::vector<BaseInfo>& bases() {
    static const std::vector<BaseInfo> table = {
        {"levy", 0, {{-10.0, 10.0}}, levy, true, 0.0, 0.55},
        {"ackley", 0, {{-32.768, 32.768}}, ackley, true, 0.0, 0.5},
        {"rastrigin", 0, {{-5.12, 5.12}}, rastrigin, true, 0.0, 0.5},
        {"friedman", 5, {{0.0, 1.0}}, friedman, false, 0.0, 0.0},
        {"detpep", 8, {{0.0, 1.0}}, detpep, false, 0.0, 0.0},
        {"otl",
         6,
         {{50.0, 150.0}, {25.0, 70.0}, {0.5, 3.0}, {1.2, 2.5}, {0.25, 1.2}, {50.0, 300.0}},
         otl_circuit,
         false,
         0.0,
         0.0},
        {"piston",
         7,
         {{30.0, 60.0},
          {0.005, 0.020},
          {0.002, 0.010},
          {1000.0, 5000.0},
          {90000.0, 110000.0},
          {290.0, 296.0},
          {340.0, 360.0}},
         piston,
         false,
         0.0,
         0.0},
        {"robotarm",
         8,
         {{0.0, 2.0 * kPi},
          {0.0, 2.0 * kPi},
          {0.0, 2.0 * kPi},
          {0.0, 2.0 * kPi},
          {0.0, 1.0},
          {0.0, 1.0},
          {0.0, 1.0},
          {0.0, 1.0}},
         robot_arm,
         false,
         0.0,
         0.0},
        {"wingweight",
         10,
         {{150.0, 200.0},
          {220.0, 300.0},
          {6.0, 10.0},
          {-10.0, 10.0},
          {16.0, 45.0},
          {0.5, 1.0},
          {0.08, 0.18},
          {2.5, 6.0},
          {1700.0, 2500.0},
          {0.025, 0.08}},
         wing_weight,
         false,
         0.0,
         0.0},
    };
    return table;
}

TestFunction make_function(const BaseInfo& base, int d_active, int d_total,
                           const std::string& name) {
    TestFunction fn;
    fn.name = name;
    fn.d = d_total;
    fn.d_active = d_active;
    std::vector<std::pair<double, double>> dom(static_cast<std::size_t>(d_active));
    for (int k = 0; k < d_active; ++k) {
        dom[static_cast<std::size_t>(k)] =
            base.domain[static_cast<std::size_t>(k) % base.domain.size()];
    }
    auto eval = base.eval;
    fn.eval = [dom, d_active, eval](const Vector& x) {
        Vector z(d_active);
        for (int k = 0; k < d_active; ++k) {
            const auto [lo, hi] = dom[static_cast<std::size_t>(k)];
            z[k] = lerp(lo, hi, x[k]);
        }
        return eval(z);
    };
    if (base.has_min) {
        fn.min_value = base.min_value;
        Vector loc = Vector::Constant(d_total, 0.5);
        for (int k = 0; k < d_active; ++k) loc[k] = base.min_unit_coord;
        fn.min_location = loc;
    }
    return fn;
}

}  // namespace

double TestFunction::operator()(const Vector& x) const {
    if (static_cast<int>(x.size()) != d) {
        std::ostringstream msg;
        msg << name << " expects " << d << " coordinates, got " << x.size();
        throw DimensionMismatch(msg.str());
    }
    for (int k = 0; k < d; ++k) {
        if (!(x[k] >= 0.0 && x[k] <= 1.0)) {
            std::ostringstream msg;
            msg << name << ": coordinate " << k + 1 << " = " << x[k]
                << " outside [0, 1]";
            throw ValidationError(msg.str());
        }
    }
    return eval(x);
}

TestFunction find_function(const std::string& name) {
    // Grammar: <base><active_d>[_aug<total_d>]
    const BaseInfo* base = nullptr;
    std::size_t prefix_len = 0;
    for (const auto& b : bases()) {
        if (name.rfind(b.name, 0) == 0 && b.name.size() > prefix_len) {
            base = &b;
            prefix_len = b.name.size();
        }
    }
    if (base == nullptr) {
        throw ValidationError("unknown test function '" + name + "'");
    }
    std::string rest = name.substr(prefix_len);
    const std::size_t aug_pos = rest.find("_aug");
    std::string active_str = rest.substr(0, aug_pos);
    std::string total_str =
        aug_pos == std::string::npos ? "" : rest.substr(aug_pos + 4);

    auto parse_dim = [&](const std::string& s, const char* what) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw ValidationError("test function '" + name + "': cannot parse " +
                                  what + " (expected <base><d>[_aug<D>])");
        }
        return std::stoi(s);
    };

    const int d_active = parse_dim(active_str, "the active dimension");
    if (d_active < 1) {
        throw ValidationError("test function '" + name + "': dimension must be >= 1");
    }
    if (base->fixed_arity > 0 && d_active != base->fixed_arity) {
        std::ostringstream msg;
        msg << "test function '" << name << "': " << base->name << " takes exactly "
            << base->fixed_arity << " inputs";
        throw ValidationError(msg.str());
    }
    int d_total = d_active;
    if (aug_pos != std::string::npos) {
        d_total = parse_dim(total_str, "the augmented dimension");
        if (d_total < d_active) {
            throw ValidationError("test function '" + name +
                                  "': augmented dimension is smaller than the active one");
        }
    }
    return make_function(*base, d_active, d_total, name);
}

std::vector<TestFunction> catalog() {
    static const std::vector<std::string> names = {
        // emulation set
        "friedman5_aug10", "detpep8_aug10", "otl6_aug10", "piston7_aug10",
        "robotarm8_aug10", "wingweight10",
        // optimization set
        "ackley6", "ackley6_aug10", "levy6", "levy6_aug10", "rastrigin6",
        "rastrigin6_aug10",
        // low-dimensional screening example
        "levy4_aug6"};
    std::vector<TestFunction> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(find_function(n));
    return out;
}

}  // namespace alkit
