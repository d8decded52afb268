#include "flks/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace flks {

StiffWaveParams::StiffWaveParams(double chi_hat_, double p_, double d_)
    : chi_hat(chi_hat_), p(p_), d(d_) {
    if (!(chi_hat > 0.0)) throw std::invalid_argument("StiffWaveParams: chi_hat must be > 0");
    if (!(p > 0.0)) throw std::invalid_argument("StiffWaveParams: p must be > 0");
    if (!(d > 0.0)) throw std::invalid_argument("StiffWaveParams: d must be > 0");
}

double StiffWaveParams::t() const { return std::sqrt(p / (1.0 + p)); }
double StiffWaveParams::c_min() const { return (2.0 - chi_hat) * std::sqrt(p); }
double StiffWaveParams::lambda() const { return std::sqrt(p); }

WaveCoefficients coefficients(const StiffWaveParams& params, double xi_c_hat) {
    if (!(xi_c_hat > 0.0)) throw std::invalid_argument("coefficients: xi_c_hat must be > 0");
    const double t = params.t();
    const double chi = params.chi_hat;
    const double disc = std::sqrt(chi * chi - 2.0 * chi + 1.0 / (t * t));

    WaveCoefficients c;
    c.xi_c_hat = xi_c_hat;
    c.s = std::exp(-xi_c_hat / t);
    c.nu = chi - 1.0 + disc;
    c.eta_plus = -1.0 + 1.0 / t;
    c.eta_minus = -1.0 - 1.0 / t;
    c.mu_plus = c.eta_plus - c.nu + 2.0 * chi;
    c.mu_minus = c.eta_minus - c.nu + 2.0 * chi;

    const double s = c.s;
    const double denom = c.mu_plus * s * s - c.mu_minus;
    c.alpha = (2.0 * chi * (1.0 - s * s) - 2.0 * t * std::pow(s, 1.0 - t)) / denom;
    c.beta = (2.0 * chi * std::pow(s, 1.0 + t) - t * t * c.mu_minus) / denom;
    c.beta_minus_t2 = (2.0 * chi * std::pow(s, 1.0 + t) - t * t * c.mu_plus * s * s) / denom;
    c.gamma = (-4.0 * chi * std::pow(s, 1.0 + t) +
               c.mu_plus * s * s * t * (1.0 + t - t * t) -
               c.mu_minus * t * (1.0 - t - t * t)) /
              (denom * t);
    return c;
}

double constraint_f(const StiffWaveParams& params, double xi_c_hat) {
    if (!(xi_c_hat > 0.0)) throw std::invalid_argument("constraint_f: xi_c_hat must be > 0");
    const double t = params.t();
    const double s = std::exp(-xi_c_hat / t);
    return params.chi_hat * (std::pow(s, t - 1.0) - std::pow(s, t + 1.0)) - t;
}

double constraint_g(const StiffWaveParams& params, double xi_c_hat) {
    const WaveCoefficients c = coefficients(params, xi_c_hat);
    const double t = params.t();
    const double s = c.s;
    return c.mu_plus * s * s * t * (1.0 + t - t * t) -
           c.mu_minus * t * (1.0 - t - t * t) -
           4.0 * params.chi_hat * std::pow(s, 1.0 + t);
}

double p_upper_bound() { return (std::sqrt(5.0) - 1.0) / 2.0; }

bool large_xi_admissible(double t) { return 1.0 - t - t * t > 0.0; }

namespace {

// (1 - exp(-delta * xi_c)) / delta with a series fallback at the removable
// singularity delta ~ 0.
double exp_ratio(double delta, double xi_c) {
    if (std::abs(delta) < 1e-8) return xi_c * (1.0 - 0.5 * delta * xi_c);
    return (1.0 - std::exp(-delta * xi_c)) / delta;
}

// F with the magnitude of its cancelling terms. At large xi_c the terms
// grow exponentially while their sum stays O(1), so the value is only
// trustworthy well above eps * scale.
struct FEval {
    double value = 0.0;
    double scale = 0.0;
};

FEval f_eval(const StiffWaveParams& params, double xi_c_hat) {
    const WaveCoefficients c = coefficients(params, xi_c_hat);
    const double t = params.t();
    const double q = 1.0 / std::sqrt(params.p * params.d);
    const double sqrt_pd = std::sqrt(params.p * params.d);
    const double damp = std::exp(-q * xi_c_hat);

    const double terms[] = {
        -c.alpha / (c.nu + q),
        -damp * (sqrt_pd + t * t - c.gamma / (1.0 + q)) / (1.0 + q),
        -damp * c.beta * exp_ratio(c.eta_plus - q, xi_c_hat),
        damp * c.beta_minus_t2 * exp_ratio(c.eta_minus - q, xi_c_hat),
    };
    FEval out;
    for (double v : terms) {
        out.value += v;
        out.scale += std::abs(v);
    }
    return out;
}

}  // namespace

double F_value(const StiffWaveParams& params, double xi_c_hat) {
    if (!(xi_c_hat > 0.0)) throw std::invalid_argument("F_value: xi_c_hat must be > 0");
    return f_eval(params, xi_c_hat).value;
}

double F_asymptote(const StiffWaveParams& params) {
    const double t = params.t();
    const double chi = params.chi_hat;
    const double disc = std::sqrt(chi * chi - 2.0 * chi + 1.0 / (t * t));
    const double nu = chi - 1.0 + disc;
    const double eta_minus = -1.0 - 1.0 / t;
    const double mu_minus = chi - disc - 1.0 / t;
    const double q = 1.0 / std::sqrt(params.p * params.d);
    return 2.0 * chi / mu_minus * (1.0 / (nu + q) - 1.0 / (q - eta_minus));
}

XiCRoot find_xi_c(const StiffWaveParams& params, double lo, double hi) {
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("find_xi_c: bad bracket");
    const int n_scan = 600;
    const double step = (hi - lo) / n_scan;

    // Scan over points where F is resolved above its cancellation noise;
    // deep in the bracket the closed form loses all significant digits and
    // would otherwise produce spurious crossings.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon();
    int sign_changes = 0;
    double a = 0.0, b = 0.0;
    bool have_prev = false;
    double prev_x = 0.0, prev_f = 0.0;
    for (int i = 0; i <= n_scan; ++i) {
        const double x = lo + step * i;
        const FEval f = f_eval(params, x);
        if (std::abs(f.value) <= noise * f.scale) continue;
        if (have_prev && (prev_f < 0.0) != (f.value < 0.0)) {
            if (sign_changes == 0) { a = prev_x; b = x; }
            ++sign_changes;
        }
        have_prev = true;
        prev_x = x;
        prev_f = f.value;
    }
    if (sign_changes == 0)
        throw std::runtime_error("find_xi_c: F does not change sign in the bracket");

    double fa = F_value(params, a);
    while (b - a > 1e-10) {
        const double mid = 0.5 * (a + b);
        const double fm = F_value(params, mid);
        if ((fa < 0.0) == (fm < 0.0)) { a = mid; fa = fm; }
        else b = mid;
    }

    XiCRoot root;
    root.xi_c_hat = 0.5 * (a + b);
    root.sign_changes = sign_changes;
    root.f_positive = constraint_f(params, root.xi_c_hat) > 0.0;
    root.g_positive = constraint_g(params, root.xi_c_hat) > 0.0;
    root.alpha = coefficients(params, root.xi_c_hat).alpha;
    return root;
}

double AnalyticProfile::density(double xi_hat) const {
    const auto& c = coeffs;
    const double t = params.t();
    if (xi_hat < 0.0) return 1.0 + c.alpha * std::exp(c.nu * xi_hat);
    const double u = xi_hat - c.xi_c_hat;
    if (xi_hat < c.xi_c_hat)
        return 1.0 - c.beta * std::exp(c.eta_plus * u) +
               c.beta_minus_t2 * std::exp(c.eta_minus * u);
    return (1.0 - t * t + c.gamma * u) * std::exp(-u);
}

double AnalyticProfile::derivative(double xi_hat) const {
    const auto& c = coeffs;
    const double t = params.t();
    if (xi_hat < 0.0) return c.alpha * c.nu * std::exp(c.nu * xi_hat);
    const double u = xi_hat - c.xi_c_hat;
    if (xi_hat < c.xi_c_hat)
        return -c.beta * c.eta_plus * std::exp(c.eta_plus * u) +
               c.beta_minus_t2 * c.eta_minus * std::exp(c.eta_minus * u);
    return (c.gamma - (1.0 - t * t) - c.gamma * u) * std::exp(-u);
}

double AnalyticProfile::second_derivative(double xi_hat) const {
    const auto& c = coeffs;
    const double t = params.t();
    if (xi_hat < 0.0) return c.alpha * c.nu * c.nu * std::exp(c.nu * xi_hat);
    const double u = xi_hat - c.xi_c_hat;
    if (xi_hat < c.xi_c_hat)
        return -c.beta * c.eta_plus * c.eta_plus * std::exp(c.eta_plus * u) +
               c.beta_minus_t2 * c.eta_minus * c.eta_minus * std::exp(c.eta_minus * u);
    return ((1.0 - t * t) - 2.0 * c.gamma + c.gamma * u) * std::exp(-u);
}

bool ValidationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& c : checks)
        out << (c.passed ? "pass" : "FAIL") << "  " << c.name
            << "  (residual " << c.residual << ")\n";
    return out.str();
}

namespace {

constexpr double kTol = 1e-8;

// Simpson rule for the wave-frame chemoattractant slope at the peak,
// rescaled by 2 d sqrt(p). Integrates the closed-form profile out to a
// cutoff and appends the analytic tail of the integrand.
double peak_slope_quadrature(const AnalyticProfile& profile) {
    const double q = 1.0 / std::sqrt(profile.params.p * profile.params.d);
    const auto integrand = [&](double xi) {
        return std::exp(-q * xi) * (profile.density(xi) - profile.density(-xi));
    };
    const auto simpson = [&](double a, double b, int n) {
        const double h = (b - a) / (2 * n);
        double acc = integrand(a) + integrand(b);
        for (int i = 1; i < 2 * n; ++i) acc += integrand(a + h * i) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    const double xi_c = profile.coeffs.xi_c_hat;
    const double cutoff = xi_c + 60.0;
    double value = simpson(0.0, xi_c, 20000) + simpson(xi_c, cutoff, 20000);

    // Beyond the cutoff: rho(xi) = (1 - t^2 + gamma u) e^{-u}, rho(-xi) =
    // 1 + alpha e^{-nu xi}; all three pieces integrate in closed form.
    const auto& c = profile.coeffs;
    const double t = profile.params.t();
    const double u0 = cutoff - xi_c;
    const double a1 = 1.0 + q;
    value += std::exp(-q * cutoff) *
             ((1.0 - t * t + c.gamma * u0) / a1 + c.gamma / (a1 * a1)) *
                 std::exp(-u0) -
             std::exp(-q * cutoff) / q -
             c.alpha * std::exp(-(q + c.nu) * cutoff) / (q + c.nu);
    return value;
}

}  // namespace

ValidationReport validate_solution(const AnalyticProfile& profile) {
    ValidationReport report;
    const auto& c = profile.coeffs;
    const double t = profile.params.t();
    const double chi = profile.params.chi_hat;
    const double p = profile.params.p;
    const double xi_c = c.xi_c_hat;

    const auto add = [&](const std::string& name, double residual) {
        report.checks.push_back({name, std::abs(residual) <= kTol, std::abs(residual)});
    };

    // Interior residuals of the three wave-frame balance laws, in hatted
    // variables with the minimum speed, at 100 points per region.
    double worst[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k < 100; ++k) {
        const double frac = (k + 0.5) / 100.0;
        {
            // Depth capped at 3 so rho - 1 stays above double epsilon; deeper
            // in the tail the 1 - rho term rounds away entirely.
            const double xi = -3.0 * frac;
            const double r = profile.density(xi), r1 = profile.derivative(xi),
                         r2 = profile.second_derivative(xi);
            const double terms[] = {p * r2, -2.0 * p * (chi - 1.0) * r1, 1.0 - r};
            double res = 0.0, scale = 1e-300;
            for (double v : terms) { res += v; scale += std::abs(v); }
            worst[0] = std::max(worst[0], std::abs(res) / scale);
        }
        {
            const double xi = xi_c * frac;
            const double r = profile.density(xi), r1 = profile.derivative(xi),
                         r2 = profile.second_derivative(xi);
            const double terms[] = {p * r2, 2.0 * p * r1, 1.0 - r};
            double res = 0.0, scale = 1e-300;
            for (double v : terms) { res += v; scale += std::abs(v); }
            worst[1] = std::max(worst[1], std::abs(res) / scale);
        }
        {
            const double xi = xi_c + 20.0 * frac;
            const double r = profile.density(xi), r1 = profile.derivative(xi),
                         r2 = profile.second_derivative(xi);
            const double terms[] = {r2, 2.0 * r1, r};
            double res = 0.0, scale = 1e-300;
            for (double v : terms) { res += v; scale += std::abs(v); }
            worst[2] = std::max(worst[2], std::abs(res) / scale);
        }
    }
    add("ODE residual, back region", worst[0]);
    add("ODE residual, middle region", worst[1]);
    add("ODE residual, front region", worst[2]);

    const double rho0_left = 1.0 + c.alpha;
    const double rho0_right = profile.density(0.0);
    add("continuity at origin", (rho0_left - rho0_right) / std::abs(rho0_left));

    const double rho_c = 1.0 - t * t;
    const double mid_at_xic = 1.0 - c.beta + c.beta_minus_t2;
    add("continuity at matching point", (mid_at_xic - rho_c) / rho_c);

    const double d_mid = -c.beta * c.eta_plus + c.beta_minus_t2 * c.eta_minus;
    const double d_front = c.gamma - (1.0 - t * t);
    add("derivative continuity at matching point",
        (d_mid - d_front) / std::max({std::abs(d_mid), std::abs(d_front), 1e-300}));

    const double d_back0 = c.alpha * c.nu;
    const double d_mid0 = profile.derivative(0.0);
    const double jump_expected = 2.0 * chi * rho0_right;
    add("derivative jump at origin", (d_back0 - d_mid0 - jump_expected) / jump_expected);

    report.checks.push_back({"peak height alpha positive", c.alpha > 0.0, -c.alpha});
    report.checks.push_back({"front coefficient gamma positive", c.gamma > 0.0, -c.gamma});

    const double quad = peak_slope_quadrature(profile);
    add("chemoattractant slope zero at peak", quad / std::max(std::abs(c.alpha), 1e-300));
    return report;
}

}  // namespace flks
