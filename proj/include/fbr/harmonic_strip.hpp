#pragma once

#include <array>
#include <vector>

#include "fbr/trig_polynomial.hpp"

namespace fbr {

/// Default bound on |w * (y - y0)| before mode evaluation is refused.
inline constexpr double kDefaultModeGuard = 30.0;

/// One Fourier index n >= 1 of an entire harmonic function on a strip, w = 2 pi n / L,
/// eta = y - y0:
///   cosh(w eta) (cos_cosh cos(wx) + sin_cosh sin(wx))
/// + sinh(w eta) / w * (cos_sinh cos(wx) + sin_sinh sin(wx)).
struct StripMode {
    int n = 1;
    double cos_cosh = 0.0;
    double sin_cosh = 0.0;
    double cos_sinh = 0.0;
    double sin_sinh = 0.0;
};

/// Value, gradient and Hessian of a scalar function of (x, y).
struct ScalarJet {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;
};

/// Harmonic function on the strip given as a mode sum plus a harmonic polynomial part
///   constant + slope_x x + slope_y eta + drift x eta + quad (x^2 - eta^2).
/// Values are immutable after construction; every member function is const and thread-safe.
class HarmonicStripFunction {
public:
    HarmonicStripFunction() = default;
    HarmonicStripFunction(double period, double y0, std::vector<StripMode> modes);

    double period() const { return period_; }
    double axis() const { return y0_; }
    double omega(int n) const;
    const std::vector<StripMode>& modes() const { return modes_; }

    double constant = 0.0;
    double slope_x = 0.0;
    double slope_y = 0.0;
    double drift = 0.0;
    double quad = 0.0;

    /// Largest |w * eta| accepted by evaluate(); beyond it EvaluationRangeError is raised.
    double guard = kDefaultModeGuard;

    double max_omega() const;

    double operator()(double x, double y) const { return evaluate(x, y); }
    double evaluate(double x, double y) const;
    std::array<double, 2> gradient(double x, double y) const;
    ScalarJet jet(double x, double y) const;

    HarmonicStripFunction& operator+=(const HarmonicStripFunction& other);
    HarmonicStripFunction& operator*=(double s);

private:
    void check_range(double eta) const;

    double period_ = 1.0;
    double y0_ = 0.0;
    std::vector<StripMode> modes_;
};

HarmonicStripFunction operator+(HarmonicStripFunction lhs, const HarmonicStripFunction& rhs);
HarmonicStripFunction operator*(double s, HarmonicStripFunction h);

/// Boundary data of the Cauchy problem on the axis y = y0: h = g and h_y = f there.
/// The derivative is taken in the flat strip coordinate y.
struct CauchyData {
    TrigPolynomial g;
    TrigPolynomial f;
    double y0 = 0.0;
};

/// h(x, y0) = 0, h_y(x, y0) = f. A nonzero f.drift contributes drift * x * eta.
HarmonicStripFunction solve_cauchy_neumann(const TrigPolynomial& f, double y0 = 0.0);

/// h(x, y0) = g, h_y(x, y0) = 0. A nonzero g.drift contributes the harmonic term drift * x.
HarmonicStripFunction solve_cauchy_dirichlet(const TrigPolynomial& g, double y0 = 0.0);

/// Sum of the two special solutions. Throws InputError when the periods differ.
HarmonicStripFunction solve_cauchy(const CauchyData& data);

/// Harmonic conjugate h* with h*_x = h_y and h*_y = -h_x, normalized so h*(0, y0) = 0.
HarmonicStripFunction conjugate_harmonic(const HarmonicStripFunction& h);

/// Independent evaluation path for the Cauchy solution through the power series in eta,
///   sum_k (-1)^k [ g^(2k)(x) eta^(2k) / (2k)! + F^(2k)(x) eta^(2k+1) / (2k+1)! ],
/// where F = f including its drift. Terms are summed until they fall below `tol`.
double taylor_cauchy_evaluate(const CauchyData& data, double x, double y, double tol = 1e-16,
                              int max_terms = 400);

}  // namespace fbr
