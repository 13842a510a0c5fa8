#include "privshare/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace privshare {

double coefficient_distance(const Polynomial& a, const Polynomial& b) {
    std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a.coeff(i) - b.coeff(i)));
    return worst;
}

bool approx_equal(const Polynomial& a, const Polynomial& b, double tol) {
    return coefficient_distance(a, b) <= tol;
}

Polynomial least_squares_fit(std::span<const FitPoint> points, int degree) {
    if (degree < 0) throw std::invalid_argument("least_squares_fit: degree must be non-negative");
    const auto n = static_cast<Eigen::Index>(points.size());
    const Eigen::Index cols = degree + 1;
    if (n < cols) throw DegenerateFit("least_squares_fit: need at least degree+1 points");

    Eigen::MatrixXd vandermonde(n, cols);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            vandermonde(i, j) = p;
            p *= points[static_cast<std::size_t>(i)].x;
        }
        rhs(i) = points[static_cast<std::size_t>(i)].y;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vandermonde);
    if (qr.rank() < cols)
        throw DegenerateFit("least_squares_fit: rank-deficient Vandermonde system (too few distinct x values)");

    Eigen::VectorXd sol = qr.solve(rhs);
    return Polynomial(std::vector<double>(sol.data(), sol.data() + sol.size()));
}

Polynomial random_polynomial(int degree, double coeff_bound, bool zero_constant, std::mt19937_64& rng) {
    if (degree < 0) throw std::invalid_argument("random_polynomial: degree must be non-negative");
    if (!(coeff_bound > 0.0)) throw std::invalid_argument("random_polynomial: coeff_bound must be positive");

    const auto ticks = static_cast<long long>(std::floor(std::ldexp(coeff_bound, 16)));
    std::uniform_int_distribution<long long> dist(-ticks, ticks);
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = std::ldexp(static_cast<double>(dist(rng)), -16);
    if (zero_constant) coeffs[0] = 0.0;
    return Polynomial(std::move(coeffs));
}

}  // namespace privshare
