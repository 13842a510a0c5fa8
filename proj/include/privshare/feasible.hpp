#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

namespace privshare {

/// Compact feasible interval for the scalar decision variable.
struct FeasibleSet {
    double lower = -2.0;
    double upper = 2.0;

    void validate() const {
        if (!(lower < upper)) throw std::invalid_argument("feasible set: lower bound must be below upper bound");
    }

    double project(double x) const { return std::clamp(x, lower, upper); }
    bool contains(double x) const { return x >= lower && x <= upper; }
    double width() const { return upper - lower; }
};

/// Diminishing learning rate alpha_k = a/(k+b) with k counting from 1, which
/// is positive, non-increasing, non-summable and square-summable.
struct StepSchedule {
    double numerator = 1.0;
    double offset = 1e-4;

    void validate() const {
        if (!(numerator > 0.0)) throw std::invalid_argument("step schedule: numerator must be positive");
        if (offset < 0.0) throw std::invalid_argument("step schedule: offset must be non-negative");
    }

    double alpha(int k) const { return numerator / (static_cast<double>(k) + offset); }
};

}  // namespace privshare
