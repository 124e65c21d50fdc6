#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alkit/types.hpp"

namespace alkit {

// Synthetic benchmark functions. Every instance is evaluated on [0,1]^d and
// internally rescales to the function's native domain, so designs, models
// and acquisition all work on the unit box. Inert coordinates (appended
// after the active ones) are accepted and ignored: "levy6_aug10" is the
// 6-dimensional Levy function embedded in a 10-dimensional input.
struct TestFunction {
    std::string name;
    int d = 0;         // total input dimension
    int d_active = 0;  // leading coordinates that influence the output
    std::function<double(const Vector&)> eval;      // takes a d-vector in [0,1]^d
    std::optional<double> min_value;                // known global minimum
    std::optional<Vector> min_location;             // in [0,1]^d, when known

    double operator()(const Vector& x) const;       // validates dimension/range
};

// Name grammar: <base><active_d>[_aug<total_d>], e.g. "levy6", "ackley6_aug10",
// "friedman5_aug10". Bases and native domains:
//
//   levy       [-10, 10]^d          min 0 at x = 1
//   ackley     [-32.768, 32.768]^d  min 0 at x = 0
//   rastrigin  [-5.12, 5.12]^d      min 0 at x = 0
//   friedman   [0, 1]^5             (emulation only)
//   detpep     [0, 1]^8             (emulation only)
//   otl        circuit, 6 inputs
//   piston     cycle time, 7 inputs
//   robotarm   position error, 8 inputs
//   wingweight 10 inputs
//
// The fixed-arity bases reject an explicit active dimension that does not
// match. Throws ValidationError for unknown names.
TestFunction find_function(const std::string& name);

// The benchmark catalog used by the experiment harness.
std::vector<TestFunction> catalog();

}  // namespace alkit
