#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbr/plane_model.hpp"
#include "fbr/surface.hpp"

namespace fbr {

/// Forms of a conformal chart: metric = |Psi_x|^2 = F^2, second form L dx^2 + 2 M dx dy + N dy^2.
struct FundamentalForms {
    double metric = 0.0;
    double L = 0.0, M = 0.0, N = 0.0;
    double H_mean = 0.0;
    double K = 0.0;
    Vec3 normal = Vec3::Zero();
    /// Largest residual of the three Gauss-Weingarten relations, relative to max(1, |second derivatives|).
    double rectangle_residual = 0.0;

    /// Hopf differential coefficient f = (L - N) / 2 - i M.
    cplx hopf() const { return {(L - N) / 2.0, -M}; }
};

/// From exact derivatives. Throws EvaluationRangeError at a branch point.
FundamentalForms fundamental_forms(const SurfacePoint& p);
FundamentalForms fundamental_forms(const AnalyticSurface& surface, double x, double y);

/// Centered differences of positions only, Richardson-extrapolated (steps h and h/2).
SurfacePoint finite_difference_point(const AnalyticSurface& surface, double x, double y, double h1 = 1e-5,
                                     double h2 = 1e-3);
FundamentalForms fundamental_forms_fd(const AnalyticSurface& surface, double x, double y);

/// alpha + i beta = w^2 f(w) in the plane model.
struct HopfSample {
    cplx w;
    double alpha = 0.0;
    double beta = 0.0;
    double K = 0.0;
    double metric = 0.0;
};
HopfSample hopf_quantities(const PlaneModel& model, cplx w);

/// |w| |d/d conj(w)| of alpha + i beta by centered differences of step h |w|,
/// relative to max(1, |alpha + i beta|).
double hopf_cauchy_riemann(const PlaneModel& model, cplx w, double h);

struct HopfReport {
    int samples = 0;
    double beta_sup = 0.0;
    double alpha_mean = 0.0;
    double alpha_std = 0.0;
    double alpha_spread = 0.0;  // (max - min) / |mean|; 0 when alpha vanishes identically
    double c = 0.0;             // constant estimate: the mean
    double K_max = 0.0;
    double K_min = 0.0;
    double holomorphy = 0.0;    // sup Cauchy-Riemann residual at step cr_step
};
/// Samples a grid of nx x ny strip points, mapped to w. Rows sit at cell centres in y.
HopfReport hopf_scan(const PlaneModel& model, int nx, int ny, double cr_step = 1e-4);

/// Residuals on one boundary circle of radius rho = exp(s y_edge). sigma_edge = -1 when the
/// surface lies outside the circle (|w| > rho) and the edge is interior, with the usual flip
/// for exterior edges: X_rho = sigma_edge sqrt(Lambda) X and 1/rho + F_rho / F = sigma_edge F.
struct BoundaryRelation {
    std::string label;
    double radius = 0.0;
    double sigma_edge = 1.0;
    double position = 0.0;  // sup |X_rho - sigma_edge sqrt(Lambda) X|
    double relative = 0.0;  // the same divided by sqrt(Lambda): scale-free in rho
    double factor = 0.0;    // sup |1/rho + F_rho / F - sigma_edge F|
    double beta = 0.0;      // sup |beta|
};
std::vector<BoundaryRelation> boundary_curvature_relations(const PlaneModel& model,
                                                           const std::vector<BoundaryEdge>& edges,
                                                           int samples = 128);
std::vector<BoundaryRelation> boundary_curvature_relations(const PlaneModel& model, int samples = 128);

/// sup over the grid of |K - K_id| / |K| with K_id = -|c / w^2|^2 / F^4 (absolute when K = 0).
double gaussian_curvature_identity(const PlaneModel& model, double c, int nx, int ny);

/// x-integral of K F^2 (or |K| F^2) along the line y; periodic trapezoid rule with nx nodes.
double curvature_density(const AnalyticSurface& surface, double y, int nx = 64, bool absolute = false);
/// Integral of K dA (or |K| dA) over R/period x (y_lo, y_hi): trapezoid in x, Gauss-Legendre in y.
double curvature_integral(const AnalyticSurface& surface, double y_lo, double y_hi, int nx = 64,
                          bool absolute = false, double max_panel = 0.5);

/// Quadrature over the whole strip plus an exponential tail at each end: the density
/// I(y) is fitted as I(end) exp(-lambda |y - end|) from I(end - d) and I(end); tail = I(end) / lambda.
struct TotalCurvature {
    double value = 0.0;
    double tail = 0.0;
    double total = 0.0;
    double rate_lo = 0.0, rate_hi = 0.0;
    double fit_residual = 0.0;  // misfit of the exponential at end - 2 d, relative to I(end - 2 d)
};
TotalCurvature total_curvature(const AnalyticSurface& surface, int nx = 64, double fit_distance = 0.0);

/// Integral of d Psi / d nu ds over a periodic edge (nu outward), and sigma * integral of Psi ds.
struct FluxReport {
    Vec3 flux = Vec3::Zero();
    Vec3 steklov_side = Vec3::Zero();
    double identity_residual = 0.0;  // |flux - steklov_side|
};
FluxReport flux(const AnalyticSurface& surface, const BoundaryEdge& edge, int nodes = 128);

/// Geodesic curvature (gamma' x gamma'') . gamma / |gamma'|^3 of the edge curve on the sphere.
/// The indicator is min(s kappa) with s the sign of the mean: positive iff strictly convex.
struct ConvexityReport {
    double indicator = 0.0;
    double min_curvature = 0.0;
    double max_curvature = 0.0;
};
ConvexityReport boundary_convexity(const AnalyticSurface& surface, const BoundaryEdge& edge, int nodes = 128);

struct GaussMapSample {
    double x = 0.0, y = 0.0;
    Vec3 normal = Vec3::Zero();
};
/// Unit normals on an nx x ny grid (x over one period, y at cell centres).
std::vector<GaussMapSample> gauss_map_samples(const AnalyticSurface& surface, int nx, int ny);

struct InjectivityReport {
    double min_angle = 0.0;       // smallest angle between normals of distinct samples
    std::size_t first = 0, second = 0;
    double unit_error = 0.0;      // max | |n| - 1 |
};
InjectivityReport injectivity_scan(const std::vector<GaussMapSample>& samples);

/// Checks for r = |Psi|: Delta r^2 = 4 (finite differences) and Delta log r >= 0,
/// i.e. k = -log r superharmonic; on free edges k = 0 and dk/dnu = sigma (nu the inward conormal).
struct SuperharmonicReport {
    int samples = 0;
    double laplacian_r2 = 0.0;     // sup |Delta r^2 - 4|
    double log_max = 0.0;          // max Delta(-log r), <= 0 for superharmonic k
    double log_min = 0.0;
    double boundary_value = 0.0;   // sup |k| on free edges
    double boundary_normal = 0.0;  // sup |dk/dnu - sigma| on free edges
};
SuperharmonicReport superharmonic_checks(const AnalyticSurface& surface, int samples, std::uint64_t seed,
                                         double fd_step = 1e-3);

/// Forms in the curvature-line frame d zeta = sqrt(f) dz. Expected: I = (1/kappa)(dxi^2 + deta^2)
/// with kappa = |f| / F^2, II = dxi^2 - deta^2.
struct CurvatureLineReport {
    std::string status;          // "ok", "general" (f not constant: only II diagonalization), "skipped" (K >= 0)
    double first_form = 0.0;     // sup of the I residuals relative to 1/kappa
    double second_form = 0.0;    // sup of the II residuals
    double diagonalization = 0.0;  // sup |II(xi, eta)|
    double hopf_spread = 0.0;    // relative spread of f over the samples
    double kappa_min = 0.0, kappa_max = 0.0;
};
CurvatureLineReport curvature_line_forms_check(const AnalyticSurface& surface, int nx, int ny);

/// Summary of the curvature checks on a periodic surface (an extension or a single strip) whose
/// lines of reflection are `lines`. Steklov and Schwarz residuals are measured on those lines.
struct CurvatureReport {
    HopfReport hopf;
    TotalCurvature total;
    struct Line {
        std::string label;
        Vec3 flux = Vec3::Zero();
        double steklov = 0.0;
        double schwarz = 0.0;
        double convexity = 0.0;  // indicator
    };
    std::vector<Line> lines;
    Vec3 flux_sum = Vec3::Zero();
};
CurvatureReport curvature_report(const PlaneModel& model, const std::vector<BoundaryEdge>& lines, int nx, int ny);

}  // namespace fbr
