#pragma once

#include <complex>
#include <vector>

#include "fbr/harmonic_strip.hpp"

namespace fbr {

using cplx = std::complex<double>;

/// Value and first two complex derivatives of a holomorphic function.
struct ComplexJet {
    cplx value;
    cplx d1;
    cplx d2;
};

struct ComplexMode {
    double omega = 0.0;
    cplx coeff;
};

/// Holomorphic function on a horizontal strip:
///
///   F(Z) = sum_k c_k exp(i w_k Z) + sum_j p_j Z^j + r Z exp(i s Z)
///
/// The last term only appears when the reflection ODE hits resonance (s is the
/// resonance frequency). Derivatives are exact per term.
class HolomorphicModel {
public:
    HolomorphicModel() = default;

    std::vector<ComplexMode> modes;
    std::vector<cplx> poly;
    cplx resonant_coeff{0.0, 0.0};
    double resonant_omega = 1.0;

    /// Period in Re Z of the mode part (informational; modes need not be commensurate).
    double period = 0.0;

    /// Largest |w Im Z| accepted by evaluation.
    double guard = kDefaultModeGuard;

    cplx operator()(cplx z) const { return jet(z).value; }
    cplx value(cplx z) const { return jet(z).value; }
    cplx derivative(cplx z) const { return jet(z).d1; }
    ComplexJet jet(cplx z) const;
    /// n-th derivative for n >= 0 (used by Newton polishing of branch points).
    cplx derivative_n(cplx z, int n) const;

    double max_omega() const;

    /// Merges modes with equal frequency and drops zero coefficients.
    void canonicalize(double omega_tol = 1e-12);

    HolomorphicModel& operator+=(const HolomorphicModel& other);
    HolomorphicModel& operator*=(cplx s);
    HolomorphicModel& add_constant(cplx c);

private:
    void check_range(cplx z) const;
};

HolomorphicModel operator+(HolomorphicModel lhs, const HolomorphicModel& rhs);
HolomorphicModel operator*(cplx s, HolomorphicModel m);

/// Holomorphic F with Re F = h on the strip. The imaginary constant is fixed so that
/// Im F(i * anchor_y) = 0; anchor_y defaults to the function's axis.
HolomorphicModel holomorphic_completion(const HarmonicStripFunction& h);
HolomorphicModel holomorphic_completion(const HarmonicStripFunction& h, double anchor_y);

}  // namespace fbr
