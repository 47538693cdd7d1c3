#pragma once

#include <array>
#include <string>
#include <vector>

#include "fbr/holomorphic_model.hpp"
#include "fbr/normalization.hpp"
#include "fbr/surface.hpp"

namespace fbr {

/// Residual |Psi - sigma * d Psi / d nu| along a boundary edge (nu the outward conormal,
/// sigma = +1 inside the ball, -1 outside). The sphere precondition is reported, not thrown.
struct SteklovReport {
    double max_residual = 0.0;
    double mean_residual = 0.0;
    std::array<double, 3> component_max{};  // per coordinate: what |Im Lambda_j| measures
    double sphere_deviation = 0.0;  // max | |Psi| - 1 | on the edge
    bool on_sphere = false;
    double worst_x = 0.0;           // where max_residual is attained
};

SteklovReport verify_steklov(const AnalyticSurface& surface, const BoundaryEdge& edge, int samples = 256,
                             double sphere_tol = 1e-8);

/// Lambda = i sigma Phi - Phi'. Modes: c -> i (sigma - w) c; polynomial
/// p_j -> i sigma p_j - (j + 1) p_{j+1}; a resonant r Z e^{i sigma Z} adds -r e^{i sigma Z}.
HolomorphicModel lambda_field(const HolomorphicModel& phi, double sigma = 1.0);

/// sup over the samples and components of |Im Lambda_j(X)| on the real axis.
double verify_schwarz_condition(const std::array<HolomorphicModel, 3>& lambda, const std::vector<double>& axis);

/// Schwarz-symmetric continuation: Lambda(conj Z) = conj Lambda(Z). Mode coefficients are
/// replaced by (c_w + conj c_{-w}) / 2 and polynomial coefficients by their real parts,
/// which leaves Lambda unchanged on the axis up to its imaginary residual.
/// Throws StageError("schwarz") when the axis residual exceeds `tol`.
HolomorphicModel schwarz_extend(const HolomorphicModel& lambda, const std::vector<double>& axis, double tol);

/// Solves i sigma Phi - Phi' = Lambda per mode; a homogeneous C e^{i sigma Z} is fitted by
/// least squares to the axis trace of Re Phi (4N + 1 points) when e^{i sigma Z} has
/// period `period`. Throws StageError("ode") when the fit misses the trace by more than `tol`.
struct OdeSolution {
    HolomorphicModel phi;
    cplx homogeneous{0.0, 0.0};
    double axis_mismatch = 0.0;
};
OdeSolution solve_reflection_ode(const HolomorphicModel& lambda, const HolomorphicModel& axis_trace, double period,
                                 int fit_points, double tol, double sigma = 1.0);

struct ReflectionOptions {
    double steklov_tol = 1e-8;
    double schwarz_tol = 1e-8;
    double match_tol = 1e-8;
    int samples = 65;          // axis samples per period (2N + 1)
    double prune_tol = 1e-13;  // relative cut for Fourier coefficients
    double mirror_height = 0;  // 0: same height as the reflected piece
};

struct ReflectionResiduals {
    double steklov = 0.0;
    double schwarz = 0.0;
    double conformality = 0.0;    // |sum_j (d phi_j / dZ)^2| relative to sum_j |d phi_j / dZ|^2
    double match_value = 0.0;     // seam: |Psi* - Psi|
    double match_derivative = 0.0;  // seam: |Psi*_y - Psi_y|
    double ode_identity = 0.0;    // |i sigma Phi - Phi' - Lambda| at axis samples
};

/// The mirror image of the piece above a free edge. `surface()` lives in the source chart
/// of the input surface; it covers the mirror band adjacent to the edge.
struct ReflectedPatch {
    SurfacePtr source;
    BoundaryEdge edge;
    double sigma = 1.0;
    NormalizationMap map;
    std::array<HolomorphicModel, 3> phi;       // completions of the normalized coordinates
    std::array<HolomorphicModel, 3> lambda;    // Schwarz-extended fields
    std::array<HolomorphicModel, 3> phi_star;  // ODE solutions
    double mirror_height = 0.0;                // in the edge chart
    ReflectionResiduals residuals;
    SurfacePtr patch;                          // source-chart surface on the mirror band

    const SurfacePtr& surface() const { return patch; }
};

/// Ungated front half of the pipeline: normalization, completions and raw Lambda fields.
struct ReflectionFields {
    SurfacePtr oriented;          // edge on y = 0, piece above
    SteklovReport steklov;
    NormalizationMap map;
    std::array<HolomorphicModel, 3> phi;
    std::array<HolomorphicModel, 3> lambda;  // before Schwarz extension
    std::vector<double> axis;     // 4N + 1 points over one period of X
    double schwarz = 0.0;
};
ReflectionFields reflection_fields(const SurfacePtr& surface, const BoundaryEdge& edge,
                                   const ReflectionOptions& options = {});

/// Full pipeline; each failure is a StageError naming its stage
/// (steklov, normalize, cauchy, schwarz, ode, match).
ReflectedPatch reflect_patch(const SurfacePtr& surface, const BoundaryEdge& edge,
                             const ReflectionOptions& options = {});

}  // namespace fbr
