#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace flks {

/// Parameters of the stiff-flux-limit traveling wave. All profile math is
/// done in hatted variables (xi_hat = sqrt(p) xi, chi_hat = chi / sqrt(p)).
struct StiffWaveParams {
    double chi_hat = 0.0;
    double p = 0.0;
    double d = 0.0;

    StiffWaveParams(double chi_hat_, double p_, double d_);

    double t() const;              // sqrt(p / (1 + p)), in (0, 1)
    double c_min() const;          // (2 - chi_hat) * sqrt(p), physical speed
    double lambda() const;         // sqrt(p), decay rate of the leading edge
};

/// Matching point plus the derived coefficients of the three-piece profile.
struct WaveCoefficients {
    double xi_c_hat = 0.0;
    double s = 0.0;  // exp(-xi_c_hat / t)
    double nu = 0.0;
    double eta_plus = 0.0;
    double eta_minus = 0.0;
    double mu_plus = 0.0;
    double mu_minus = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    // beta - t^2 in closed form. The direct subtraction underflows to
    // rounding noise at large xi_c_hat; every user of the difference must
    // take this field instead.
    double beta_minus_t2 = 0.0;
};

WaveCoefficients coefficients(const StiffWaveParams& params, double xi_c_hat);

/// Existence constraints. Both must be positive for a unimodal candidate:
/// f > 0 is alpha > 0 (rising back of the wave), g > 0 is gamma > 0
/// (positive density ahead of the matching point).
double constraint_f(const StiffWaveParams& params, double xi_c_hat);
double constraint_g(const StiffWaveParams& params, double xi_c_hat);

/// Upper bound of the growth rate for which g can stay positive at large
/// matching distance: (sqrt(5) - 1) / 2.
double p_upper_bound();

/// Predicate form of the same bound: 1 - t - t^2 > 0, i.e. t below the
/// golden-ratio conjugate.
bool large_xi_admissible(double t);

/// Closed-form consistency function F(xi_c) = 2 d sqrt(p) S'(0). A root in
/// xi_c_hat makes the chemoattractant peak sit exactly at xi = 0.
double F_value(const StiffWaveParams& params, double xi_c_hat);

/// Limit of F as xi_c_hat -> infinity; vanishes exactly at chi_hat = 2.
double F_asymptote(const StiffWaveParams& params);

struct XiCRoot {
    double xi_c_hat = 0.0;
    bool f_positive = false;
    bool g_positive = false;
    double alpha = 0.0;      // peak height of rho above 1
    int sign_changes = 0;    // sign changes of F found on the scan grid
};

/// Smallest root of F on [lo, hi]: 600-point scan for sign changes, then
/// bisection to an interval of 1e-10. Throws std::runtime_error when F does
/// not change sign in the bracket.
XiCRoot find_xi_c(const StiffWaveParams& params, double lo = 0.01, double hi = 60.0);

struct AnalyticProfile {
    StiffWaveParams params;
    WaveCoefficients coeffs;

    AnalyticProfile(const StiffWaveParams& p, const WaveCoefficients& c)
        : params(p), coeffs(c) {}

    /// rho at hatted coordinate xi_hat (piece chosen by region).
    double density(double xi_hat) const;
    /// d rho / d xi_hat. At the region boundaries 0 and xi_c_hat this
    /// returns the right-sided derivative.
    double derivative(double xi_hat) const;
    double second_derivative(double xi_hat) const;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;  // worst relative residual seen for this check
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    std::string summary() const;  // one line per check
};

/// Self-consistency checks of a constructed profile, each to 1e-8 relative:
/// interior ODE residuals per region, continuity at both region boundaries,
/// derivative continuity at the matching point, the derivative jump at the
/// origin, positivity of alpha and gamma, and S'(0) = 0 by quadrature.
ValidationReport validate_solution(const AnalyticProfile& profile);

}  // namespace flks
