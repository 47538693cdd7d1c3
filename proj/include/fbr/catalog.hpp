#pragma once

#include <array>
#include <string>

#include "fbr/harmonic_strip.hpp"
#include "fbr/surface.hpp"

namespace fbr {

/// t0 solves t tanh t = 1 (orthogonality to the sphere); c = 1 / sqrt(cosh^2 t0 + t0^2)
/// places the boundary circles on the unit sphere.
struct CatenoidConstants {
    double t0;
    double c;
    double boundary_radius() const;  // c cosh t0
    double boundary_height() const;  // c t0
};

/// Bisection on [1, 1.5]; iterates to full double precision (well inside 1e-12).
const CatenoidConstants& critical_catenoid_constants();

/// Catenoid band Psi = c (cosh t cos x, cosh t sin x, t) with t = t_start + direction * y,
/// y in (0, height). Edge "gamma1" is y = 0 (surface above), "gamma2" is y = height
/// (surface below). An edge is free when it lies on the unit sphere.
SurfacePtr catenoid_band(double c, double t_start, int direction, double height, std::string name);

/// The critical catenoid: t = t0 - y, y in (0, 2 t0). gamma1 is the circle t = t0.
SurfacePtr critical_catenoid();

/// The piece t in (t0, 3 t0) outside the ball, with its free boundary t = t0 at y = 0.
SurfacePtr exterior_critical_catenoid();

/// Catenoid band |t| < fraction * t0 rescaled so both circles reach the unit sphere.
/// Meets the sphere at an angle other than 90 degrees (negative control).
SurfacePtr noncritical_catenoid(double fraction);

/// Psi = e^{-y} (cos x, sin x, 0), y in (0, y_max); free boundary at y = 0.
SurfacePtr equatorial_disk(double y_max = 8.0);

/// The equatorial disk composed with Q(z) = z + eps sin z: Psi = (Re, Im)(exp(i Q(z))).
/// Free boundary at y = 0 with conformal factor 1 + eps cos x.
SurfacePtr warped_disk(double eps, double y_max = 3.0);

/// Planar map Psi = (Re, Im)(z + eps sin(pi z) / pi), period 2, y in (0, 1).
/// Boundary conformal factor along y = 0 is 1 + eps cos(pi x). Not on the sphere.
SurfacePtr warped_plane(double eps);

/// Round sphere of radius R in Mercator coordinates (conformal, not minimal).
SurfacePtr sphere_patch(double radius, double y_span = 1.5);

/// Psi = (x, y, 0) on (-1, 1) x (-1, 1), non-periodic.
SurfacePtr flat_plane();

/// Surface whose three coordinates are harmonic strip functions.
class SeriesSurface final : public AnalyticSurface {
public:
    SeriesSurface(std::array<HarmonicStripFunction, 3> components, double height, std::string name);

    SurfacePoint evaluate(double x, double y) const override;
    StripDomain domain() const override;
    std::vector<BoundaryEdge> edges() const override { return edges_; }
    std::string name() const override { return name_; }

    const std::array<HarmonicStripFunction, 3>& components() const { return comps_; }

private:
    std::array<HarmonicStripFunction, 3> comps_;
    double height_;
    std::string name_;
    std::vector<BoundaryEdge> edges_;
};

/// Classifies a boundary line: free when | |Psi| - 1 | <= sphere_tol at sampled points,
/// interior when |Psi| decreases going into the surface.
BoundaryEdge classify_edge(const AnalyticSurface& surface, std::string label, double y, EdgeSide side,
                           double sphere_tol = 1e-8);

/// Resolves a catalog selector: "critical-catenoid", "exterior-catenoid",
/// "noncritical-catenoid:<fraction>", "equatorial-disk[:<y_max>]", "warped-disk:<eps>",
/// "warped-plane:<eps>", "sphere:<R>", "plane", or "file:<path>".
SurfacePtr catalog_surface(const std::string& selector);

}  // namespace fbr
