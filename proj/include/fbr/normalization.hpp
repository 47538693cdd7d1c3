#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fbr/harmonic_strip.hpp"
#include "fbr/holomorphic_model.hpp"
#include "fbr/surface.hpp"

namespace fbr {

inline constexpr double kDefaultExclusionRadius = 1e-3;

/// F(x, 0) = |Psi_x(x, 0)| along a boundary edge, in the chart where the edge is y = 0
/// and the surface lies above. `samples` points per period (2N + 1 for N modes).
TrigPolynomial boundary_conformal_factor(const AnalyticSurface& surface, const BoundaryEdge& edge,
                                         int samples = 65);

struct Puncture {
    cplx z;
    int multiplicity = 1;
};

/// Zeros of H' in a search rectangle, with the argument-principle total over the rectangle.
struct PunctureSet {
    std::vector<Puncture> points;
    double exclusion_radius = kDefaultExclusionRadius;
    int total_winding = 0;

    int total_multiplicity() const;
    bool empty() const { return points.empty(); }
    /// True when z lies within the exclusion radius of a puncture (or one of its periodic copies).
    bool excludes(cplx z, double period = 0.0) const;
};

/// Source coordinates z = x + i y  ->  normalized coordinates Z = H(z) = X + i Y with
/// Y = 0 and Y_y = F on the axis, so the conformal factor of Psi o H^{-1} is 1 there.
class NormalizationMap {
public:
    NormalizationMap() = default;
    NormalizationMap(HarmonicStripFunction X, HarmonicStripFunction Y, HolomorphicModel H, double period,
                     double y_lo, double y_hi);

    const HarmonicStripFunction& X() const { return X_; }
    const HarmonicStripFunction& Y() const { return Y_; }
    const HolomorphicModel& H() const { return H_; }
    double source_period() const { return period_; }
    /// Increase of X over one source period (arc length of the edge in the source metric).
    double P() const { return P_; }

    cplx operator()(cplx z) const { return H_.value(z); }
    ComplexJet jet(cplx z) const { return H_.jet(z); }

    /// H^{-1}(Z) by Newton iteration seeded from a table over the source strip (y_lo, y_hi).
    /// Throws ConvergenceError naming Z on failure.
    cplx inverse(cplx Z) const;

    PunctureSet punctures;

private:
    HarmonicStripFunction X_, Y_;
    HolomorphicModel H_;
    double period_ = 0.0;
    double P_ = 0.0;
    double y_lo_ = 0.0, y_hi_ = 1.0;
    std::vector<std::pair<cplx, cplx>> table_;  // (z, H(z)) over one period
};

/// Y = Cauchy solution with Y = 0, Y_y = F on the axis; X its conjugate with X(0, 0) = 0.
/// `y_lo`, `y_hi` bound the source strip used to seed the inverse.
NormalizationMap build_normalization(const TrigPolynomial& F, double y_lo = 0.0, double y_hi = 1.0);

struct SearchRect {
    double x_lo, x_hi, y_lo, y_hi;
};

/// Zeros of H' inside `rect` (the outer boundary itself is excluded). Each grid cell's
/// winding number of H' is computed; nonzero cells are polished by damped Newton on H'.
/// A zero on a cell edge triggers a perturbed grid, at most 3 retries.
PunctureSet find_branch_points(const HolomorphicModel& H, const SearchRect& rect, int nx, int ny,
                               double exclusion_radius = kDefaultExclusionRadius);
PunctureSet find_branch_points(const NormalizationMap& map, const SearchRect& rect, int nx, int ny);

/// Psi o H^{-1}. The chart is the strip 0 < Y < min_x Y(x, a) contained in the image,
/// periodic with period P; the edge sits at Y = 0. Queries within the exclusion radius of
/// a puncture raise EvaluationRangeError.
SurfacePtr push_forward(const SurfacePtr& surface, const NormalizationMap& map);

/// `component=X|Y` blocks of the boundary data of X and Y on the axis.
void write_normalization(std::ostream& out, const NormalizationMap& map);

}  // namespace fbr
