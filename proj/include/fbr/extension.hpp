#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fbr/errors.hpp"
#include "fbr/plane_model.hpp"
#include "fbr/reflection.hpp"

namespace fbr {

/// One reflection step. Odd steps reflect across the lower line of the original strip,
/// even steps across the upper one; both stay fixed lines of the original chart.
struct ExtensionStep {
    int index = 0;                  // 1-based
    std::string line;               // label of the line of reflection
    double band_lo = 0.0, band_hi = 0.0;    // band owned by this step
    double strip_lo = 0.0, strip_hi = 0.0;  // bounds after the step
    ReflectedPatch patch;
    PunctureSet punctures;          // zeros of this step's H', in the original chart
    double seam_residual = 0.0;     // C1 mismatch at the seam, relative to max(1, |Psi|)
};

/// Piecewise map: the original strip plus the owned band of every step.
class ExtendedSurface final : public AnalyticSurface {
public:
    struct Piece {
        std::string label;
        double y_lo, y_hi;
        SurfacePtr surface;
    };

    ExtendedSurface(SurfacePtr base, std::vector<ExtensionStep> steps, double exclusion_radius = kDefaultExclusionRadius);

    SurfacePoint evaluate(double x, double y) const override;
    StripDomain domain() const override { return domain_; }
    std::vector<BoundaryEdge> edges() const override { return edges_; }
    std::string name() const override;

    int n() const { return static_cast<int>(steps_.size()); }
    const SurfacePtr& base() const { return base_; }
    const std::vector<ExtensionStep>& steps() const { return steps_; }
    /// Original piece first, then one piece per step in order.
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::vector<std::string> lineage() const;
    std::string lineage_string() const;  // labels joined by ','
    const PunctureSet& punctures() const { return punctures_; }
    /// The two lines of reflection (original edges) in the original chart.
    const BoundaryEdge& lower_line() const { return lower_; }
    const BoundaryEdge& upper_line() const { return upper_; }

private:
    SurfacePtr base_;
    std::vector<ExtensionStep> steps_;
    std::vector<Piece> pieces_;
    StripDomain domain_;
    std::vector<BoundaryEdge> edges_;
    PunctureSet punctures_;
    BoundaryEdge lower_, upper_;
};

using ExtensionPtr = std::shared_ptr<const ExtendedSurface>;

/// Raised when a step fails; carries the lineage that succeeded before it.
class ExtensionError : public StageError {
public:
    ExtensionError(const StageError& cause, std::vector<std::string> prefix)
        : StageError(cause.stage(), std::string(cause.what()) + " (after lineage '" + join(prefix) + "')"),
          prefix_(std::move(prefix)) {}
    const std::vector<std::string>& lineage_prefix() const { return prefix_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
        return s;
    }
    std::vector<std::string> prefix_;
};

struct ExtendOptions {
    ReflectionOptions reflection;
    int branch_nx = 16;  // branch-point search cells per step
    int branch_ny = 8;
    double exclusion_radius = kDefaultExclusionRadius;
    int seam_samples = 32;
};

/// Alternating reflections: lower line, upper line, lower line, ... `steps` >= 0.
ExtensionPtr extend(const SurfacePtr& surface, int steps, const ExtendOptions& options = {});

/// w = exp(-i s z) model of the extension, punctures carried along.
PlaneModel to_punctured_plane(const ExtensionPtr& ext);

struct CoverageRecord {
    int step = 0;
    std::string line;             // empty for the original piece
    double strip_lo = 0.0, strip_hi = 0.0;
    double band_area = 0.0;       // integral of |K| dA over the band this step added
    double cumulative = 0.0;
};
std::vector<CoverageRecord> coverage_monitor(const ExtendedSurface& ext, int nx = 64);

}  // namespace fbr
