#pragma once

#include <cmath>
#include <stdexcept>

namespace flks {

/// Bounded chemotactic drift velocity as a function of the log-gradient
/// of the chemoattractant.
enum class FluxKind { Arctan, StiffSign };

struct FluxModel {
    FluxKind kind = FluxKind::Arctan;
    double chi = 1.0;    // modulation amplitude, > 0
    double delta = 1.0;  // stiffness scale, > 0 (unused for StiffSign)

    static FluxModel arctan(double chi, double delta);
    static FluxModel stiff_sign(double chi);

    /// Drift velocity U_delta(X). Odd, bounded by chi in absolute value.
    double velocity(double X) const;

    /// dU/dX at X = 0. For the arctan flux this is 2*chi/(pi*delta);
    /// the sign flux returns +infinity.
    double slope_at_zero() const;

    bool finite_slope() const { return kind == FluxKind::Arctan; }
};

/// Piecewise proliferation law: constant p below the threshold density
/// rho_c = 1/(1+p), then 1/rho - 1 above it (zero at rho = 1).
struct ProliferationModel {
    double p = 0.5;

    explicit ProliferationModel(double growth_rate = 0.5);

    double rho_c() const { return 1.0 / (1.0 + p); }
    double rate(double rho) const;
};

struct ModelParams {
    FluxModel flux;
    ProliferationModel growth;
    double d = 4.0;  // chemoattractant diffusion coefficient

    ModelParams(FluxModel f, ProliferationModel g, double diffusion);

    /// Growth-normalized modulation chi / sqrt(p).
    double chi_hat() const { return flux.chi / std::sqrt(growth.p); }
    /// Slope of the drift response at zero gradient (the phase-diagram
    /// abscissa 2*chi/(pi*delta) for the arctan flux).
    double stiffness() const { return flux.slope_at_zero(); }
};

struct StabilityReport {
    double margin = 0.0;  // (1+sqrt(d))^2 - U'(0)
    bool is_stable = false;
    bool is_critical = false;  // margin == 0 within tolerance
};

/// Linear stability of the uniform saturated state rho = 1. The sign
/// flux has infinite slope and is always unstable.
StabilityReport linear_stability_margin(const ModelParams& params);

// Growth-rate scaling between physical and hatted variables:
// x_hat = sqrt(p) * x, t_hat = p * t, c_hat = c / sqrt(p).
inline double to_hatted_x(double x, double p) { return std::sqrt(p) * x; }
inline double to_hatted_t(double t, double p) { return p * t; }
inline double to_hatted_speed(double c, double p) { return c / std::sqrt(p); }
inline double from_hatted_x(double x_hat, double p) { return x_hat / std::sqrt(p); }
inline double from_hatted_t(double t_hat, double p) { return t_hat / p; }
inline double from_hatted_speed(double c_hat, double p) { return c_hat * std::sqrt(p); }
// Decay rates carry inverse length units.
inline double to_hatted_decay(double lambda, double p) { return lambda / std::sqrt(p); }

}  // namespace flks
