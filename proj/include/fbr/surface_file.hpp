#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "fbr/catalog.hpp"
#include "fbr/trig_polynomial.hpp"

namespace fbr {

/// Cauchy traces of the three coordinates on the axis y = 0 plus the strip height.
struct SurfaceSpec {
    double period = 0.0;
    double height = 0.0;
    std::array<CauchyData, 3> components;
};

/// Text format:
///   period=<L>
///   height=<a>
///   component=1
///   g:
///   <TrigPolynomial record>
///   f:
///   <TrigPolynomial record>
///   component=2 ...
/// Errors name the offending line.
SurfaceSpec parse_surface_spec(const std::string& text);
void write_surface_spec(std::ostream& out, const SurfaceSpec& spec);

/// Samples Psi and Psi_y on y = 0 (M points per period) and Fourier-analyzes them.
SurfaceSpec surface_spec_from_traces(const AnalyticSurface& surface, int samples = 65);

/// Assembles the surface from the traces and checks it. Conformality residuals above
/// `conformal_tol` (relative to |Psi_x|^2) are rejected with the measured value.
std::shared_ptr<const SeriesSurface> build_surface(const SurfaceSpec& spec, const std::string& name,
                                                   double conformal_tol = 1e-8);

SurfacePtr load_surface(const std::string& path);

}  // namespace fbr
