#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fbr {

/// Truncated Fourier data of a boundary function with period L:
///
///   p(x) = a_0/2 + sum_{n=1..N} (a_n cos(w_n x) + b_n sin(w_n x)) + drift * x,
///   w_n  = 2 pi n / L.
///
/// `b[0]` is kept only so that `a` and `b` share indexing; it is always zero.
/// The drift slope is the simply connected case's linear part; periodic data has drift 0.
struct TrigPolynomial {
    double period = 1.0;
    std::vector<double> a{0.0};
    std::vector<double> b{0.0};
    double drift = 0.0;

    TrigPolynomial() = default;
    TrigPolynomial(double period, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                   double drift = 0.0);

    static TrigPolynomial constant(double period, double value);
    static TrigPolynomial cosine(double period, int n, double amplitude = 1.0);
    static TrigPolynomial sine(double period, int n, double amplitude = 1.0);

    int degree() const { return static_cast<int>(a.size()) - 1; }
    double omega(int n) const;

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    /// k-th derivative, k >= 0.
    double derivative(double x, int k = 1) const;

    /// Drops modes above `max_degree` and any coefficient with magnitude at or below
    /// `rel_tol * max|coefficient|`. Returns the sum of discarded magnitudes (tail bound).
    double prune(int max_degree, double rel_tol = 1e-13);

    void validate() const;

    TrigPolynomial& operator+=(const TrigPolynomial& other);
    TrigPolynomial& operator*=(double s);
};

TrigPolynomial operator+(TrigPolynomial lhs, const TrigPolynomial& rhs);
TrigPolynomial operator*(double s, TrigPolynomial p);

/// Trigonometric interpolation of `samples` taken at x_j = j L / M, j = 0..M-1.
/// With M odd the interpolant has degree (M-1)/2 and reproduces the samples exactly;
/// with M even the Nyquist cosine is kept with half weight.
TrigPolynomial fourier_analyze(std::span<const double> samples, double period);

/// Same, with explicit abscissae; they must be uniformly spaced with step L/M.
TrigPolynomial fourier_analyze(std::span<const double> xs, std::span<const double> samples,
                               double period);

/// Drift extraction for non-periodic data sampled on a closed period [x0, x0 + L]
/// (M + 1 points including both endpoints): drift = (f(x0+L) - f(x0)) / L and the
/// remainder f - drift*x is analyzed as periodic data.
TrigPolynomial fourier_analyze_with_drift(std::span<const double> xs_closed,
                                          std::span<const double> samples_closed);

/// Text record: `period=<L>` followed by `a<n>=<v>`, `b<n>=<v>`, `b0=<drift>` lines.
/// Zero coefficients are omitted.
void write_trig_polynomial(std::ostream& out, const TrigPolynomial& p);
std::string to_text(const TrigPolynomial& p);

/// Parses key=value lines; unknown keys and malformed numbers raise InputError naming
/// the offending line (numbered from `first_line_number`).
TrigPolynomial parse_trig_polynomial(std::span<const std::string> lines, int first_line_number = 1);
TrigPolynomial parse_trig_polynomial(const std::string& text);

}  // namespace fbr
