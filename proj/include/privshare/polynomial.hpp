#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace privshare {

/// Univariate real polynomial with dense coefficient storage, lowest degree
/// first. Trailing zero coefficients are stripped on construction; the zero
/// polynomial stores no coefficients and reports degree 0. Instances are
/// immutable after construction and safe to share across threads.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        normalize();
    }

    static Polynomial constant(double c) { return Polynomial({c}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    /// Coefficient of x^i, zero beyond the stored range.
    double coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }

    /// Horner evaluation.
    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    /// Formal antiderivative with the integration constant fixed to zero.
    Polynomial antiderivative() const {
        if (coeffs_.empty()) return {};
        std::vector<double> a(coeffs_.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
        return Polynomial(std::move(a));
    }

    /// Copy with the constant term dropped.
    Polynomial nonconstant_part() const {
        if (coeffs_.empty()) return {};
        std::vector<double> c = coeffs_;
        c[0] = 0.0;
        return Polynomial(std::move(c));
    }

    Polynomial operator-() const {
        std::vector<double> c = coeffs_;
        for (double& v : c) v = -v;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    /// Exact comparison on normalized coefficients.
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

/// Largest absolute coefficient difference between two polynomials.
double coefficient_distance(const Polynomial& a, const Polynomial& b);

/// True when every coefficient difference stays within tol.
bool approx_equal(const Polynomial& a, const Polynomial& b, double tol);

/// The Vandermonde system of a least-squares fit is rank deficient, typically
/// because too few distinct abscissae were supplied.
struct DegenerateFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Least-squares polynomial fit of at most the given degree, solved through a
/// column-pivoting QR factorization of the Vandermonde matrix. Requires at
/// least degree+1 points with enough distinct x values; throws DegenerateFit
/// otherwise.
Polynomial least_squares_fit(std::span<const FitPoint> points, int degree);

/// Random polynomial with coefficients drawn uniformly from a fine dyadic
/// grid over [-coeff_bound, +coeff_bound]. Grid values are multiples of 2^-16,
/// which keeps every polynomial sum at desk scale exactly representable in
/// double precision, so algebraic identities hold with zero tolerance.
/// zero_constant forces the constant term to zero.
Polynomial random_polynomial(int degree, double coeff_bound, bool zero_constant, std::mt19937_64& rng);

}  // namespace privshare
