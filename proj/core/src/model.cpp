#include "flks/model.hpp"

#include <limits>
#include <numbers>

namespace flks {

FluxModel FluxModel::arctan(double chi, double delta) {
    if (!(chi > 0.0)) throw std::invalid_argument("FluxModel: chi must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("FluxModel: delta must be > 0");
    return FluxModel{FluxKind::Arctan, chi, delta};
}

FluxModel FluxModel::stiff_sign(double chi) {
    if (!(chi > 0.0)) throw std::invalid_argument("FluxModel: chi must be > 0");
    return FluxModel{FluxKind::StiffSign, chi, 0.0};
}

double FluxModel::velocity(double X) const {
    if (!std::isfinite(X)) throw std::domain_error("FluxModel::velocity: non-finite argument");
    if (kind == FluxKind::Arctan) {
        return (2.0 * chi / std::numbers::pi) * std::atan(X / delta);
    }
    // Sign flux: +-chi, with velocity(0) = 0 (midpoint).
    if (X > 0.0) return chi;
    if (X < 0.0) return -chi;
    return 0.0;
}

double FluxModel::slope_at_zero() const {
    if (kind == FluxKind::StiffSign) return std::numeric_limits<double>::infinity();
    return 2.0 * chi / (std::numbers::pi * delta);
}

ProliferationModel::ProliferationModel(double growth_rate) : p(growth_rate) {
    if (!(p > 0.0)) throw std::invalid_argument("ProliferationModel: p must be > 0");
}

double ProliferationModel::rate(double rho) const {
    if (!(rho >= 0.0)) throw std::domain_error("ProliferationModel::rate: rho must be >= 0");
    if (rho <= rho_c()) return p;
    return 1.0 / rho - 1.0;
}

ModelParams::ModelParams(FluxModel f, ProliferationModel g, double diffusion)
    : flux(f), growth(g), d(diffusion) {
    if (!(d > 0.0)) throw std::invalid_argument("ModelParams: d must be > 0");
}

StabilityReport linear_stability_margin(const ModelParams& params) {
    StabilityReport report;
    const double critical = (1.0 + std::sqrt(params.d)) * (1.0 + std::sqrt(params.d));
    if (!params.flux.finite_slope()) {
        report.margin = -std::numeric_limits<double>::infinity();
        report.is_stable = false;
        return report;
    }
    report.margin = critical - params.flux.slope_at_zero();
    // Tolerate rounding in the slope so the threshold case reads as critical.
    report.is_critical = std::abs(report.margin) <= 1e-12 * critical;
    report.is_stable = report.margin > 0.0 && !report.is_critical;
    return report;
}

}  // namespace flks
