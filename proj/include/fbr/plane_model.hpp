#pragma once

#include <vector>

#include "fbr/normalization.hpp"
#include "fbr/surface.hpp"

namespace fbr {

/// Periodic strip surface seen through w = exp(-i s z), s = 2 pi / period.
/// |w| = exp(s y), so the strip (y_lo, y_hi) becomes the annulus
/// exp(s y_lo) < |w| < exp(s y_hi); the line y = 0 is the unit circle.
class PlaneModel {
public:
    explicit PlaneModel(SurfacePtr strip, PunctureSet punctures = {});

    double s() const { return s_; }
    const SurfacePtr& strip() const { return strip_; }
    const PunctureSet& punctures() const { return punctures_; }
    double inner_radius() const;
    double outer_radius() const;
    double circle_radius(double y) const;

    static cplx to_plane(cplx z, double s);
    cplx to_plane(cplx z) const { return to_plane(z, s_); }
    /// Principal branch i log(w) / s; any other branch differs by a multiple of the period.
    cplx to_strip(cplx w) const;
    std::vector<cplx> plane_punctures() const;

    /// Psi(i log(w) / s) with derivatives in (u, v) = (Re w, Im w).
    /// Throws EvaluationRangeError outside the annulus or inside a puncture exclusion disk.
    SurfacePoint evaluate(cplx w) const;
    /// Same, through an explicit strip point z (any branch).
    SurfacePoint evaluate_branch(cplx z) const;

private:
    SurfacePtr strip_;
    PunctureSet punctures_;
    double s_ = 1.0;
};

}  // namespace fbr
