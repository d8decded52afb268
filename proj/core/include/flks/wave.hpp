#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "flks/grid.hpp"
#include "flks/model.hpp"

namespace flks {

class FrontNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Position of the rightmost downward crossing of `threshold`, located by
/// linear interpolation in log rho between the straddling cells.
double front_position(const SimState& state, const GridSpec& grid, double threshold = 1e-20);

struct SpeedFit {
    double c_star = 0.0;
    double residual_rms = 0.0;
    bool steady = false;
    int n_samples = 0;
};

/// Least-squares slope of x*(t) over [t_begin, t_end]. The fit is flagged
/// non-steady when the residual RMS exceeds 5% of |c* * window|.
SpeedFit front_speed(const FrontTrace& trace, double t_begin, double t_end);

/// Positive exponential decay rate -d(log rho)/dx at the cell containing
/// x_star (centered difference).
double decay_rate_at_front(const SimState& state, const GridSpec& grid, double x_star);

/// Dispersion relation c(lambda) = lambda + p/lambda - U[min(lambda, 1/sqrt(d))].
double dispersion_speed(double lambda, const ModelParams& params);

enum class MinSpeedBranch { AtSqrtP, AtKink, AtInteriorLambda };

struct MinSpeed {
    double c_min = 0.0;
    double lambda_argmin = 0.0;
    MinSpeedBranch branch = MinSpeedBranch::AtSqrtP;
};

/// Closed-form three-case minimum of c(lambda) for the arctan flux.
MinSpeed min_speed_arctan(const ModelParams& params);

/// Numerical minimum of c(lambda): log-spaced scan refined by golden
/// section to 1e-8 in lambda. Oracle for min_speed_arctan; works for any flux.
MinSpeed min_speed_numeric(const ModelParams& params);

enum class SolutionType {
    MonotoneTW,        // I
    NonmonotoneTW,     // II
    BackwardTW,        // III
    PeriodicWithFront, // IV
    LocalizedSpikes,   // V
};

std::string solution_type_label(SolutionType type);  // "I".."V"

struct WaveMetrics {
    double c_star = 0.0;
    double lambda_star = 0.0;
    double c_dispersion = 0.0;
    double c_min = 0.0;
    double rho_max = 0.0;
    int peak_count = 0;
    bool steady = false;
    double fit_residual_rms = 0.0;
};

struct ClassifyOptions {
    double fit_begin = 0.0;  // speed-fit window (physical time)
    double fit_end = 0.0;
    double translation_tol = 1e-3;   // L-inf mismatch, relative to rho_max
    double monotone_tol = 1e-3;      // local maxima above 1+tol break monotonicity
    double periodic_height = 0.05;   // bulk maxima above 1+this count as pattern
    int periodic_min_count = 3;
    double spike_height = 1.5;       // stationary maxima above this count as spikes
    int spike_min_count = 2;
    double stall_speed_hat = 0.02;   // |c_hat| below this counts as stalled
    double bulk_left_hat = 100.0;    // bulk window [this, x*_hat - margin]
    double bulk_margin_hat = 50.0;
};

struct ClassifiedRun {
    std::optional<SolutionType> type;  // empty: unclassified
    WaveMetrics metrics;
    std::string note;

    std::string label() const { return type ? solution_type_label(*type) : "unclassified"; }
};

/// Decision tree over the last two snapshots: translation-invariance for
/// the traveling types I-III, stationary bulk pattern for IV, stalled front
/// with high-amplitude stationary spikes for V.
ClassifiedRun classify(const Trajectory& trajectory, const ModelParams& params,
                       const GridSpec& grid, const ClassifyOptions& options);

}  // namespace flks
