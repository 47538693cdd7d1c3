#include "fbr/plane_model.hpp"

#include <cmath>
#include <numbers>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"

namespace fbr {

namespace {
constexpr cplx kI{0.0, 1.0};
}

PlaneModel::PlaneModel(SurfacePtr strip, PunctureSet punctures)
    : strip_(std::move(strip)), punctures_(std::move(punctures)) {
    if (!strip_) throw InputError("plane model needs a surface");
    const StripDomain d = strip_->domain();
    if (!d.periodic()) throw InputError("plane model needs a periodic strip, got '" + strip_->name() + "'");
    s_ = 2.0 * std::numbers::pi / d.period;
}

double PlaneModel::inner_radius() const { return std::exp(s_ * strip_->domain().y_lo); }
double PlaneModel::outer_radius() const { return std::exp(s_ * strip_->domain().y_hi); }
double PlaneModel::circle_radius(double y) const { return std::exp(s_ * y); }

cplx PlaneModel::to_plane(cplx z, double s) { return std::exp(-kI * s * z); }

cplx PlaneModel::to_strip(cplx w) const {
    if (w == cplx{}) throw EvaluationRangeError("w = 0 is not in the plane model");
    return kI * std::log(w) / s_;
}

std::vector<cplx> PlaneModel::plane_punctures() const {
    std::vector<cplx> out;
    for (const auto& p : punctures_.points) out.push_back(to_plane(p.z));
    return out;
}

SurfacePoint PlaneModel::evaluate(cplx w) const { return evaluate_branch(to_strip(w)); }

SurfacePoint PlaneModel::evaluate_branch(cplx z) const {
    const StripDomain d = strip_->domain();
    const double slack = 1e-12 * std::max(1.0, d.height());
    if (z.imag() < d.y_lo - slack || z.imag() > d.y_hi + slack)
        throw EvaluationRangeError("|w| = " + format_double(std::exp(s_ * z.imag())) + " is outside the annulus");
    if (punctures_.excludes(z, d.period)) throw EvaluationRangeError("w lies in a puncture exclusion disk");
    // z = i log(w) / s: G' = i / (s w), G'' = -i / (s w^2).
    const cplx w = to_plane(z);
    const HolomorphicJet g{z, kI / (s_ * w), -kI / (s_ * w * w)};
    return compose(strip_->evaluate(z.real(), z.imag()), g);
}

}  // namespace fbr
