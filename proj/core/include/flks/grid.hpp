#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace flks {

/// Uniform mesh on [0, L] with I cells. Cell i holds the average density
/// over [x_i, x_{i+1}] and is addressed by its left node x_i = i*dx.
struct GridSpec {
    double length = 0.0;
    int cells = 0;
    double dt = 0.0;

    GridSpec() = default;
    GridSpec(double L, int I, double time_step);

    double dx() const { return length / cells; }
    double node(int i) const { return i * dx(); }
};

struct SimState {
    std::vector<double> rho;
    std::vector<double> S;
    double time = 0.0;
    std::int64_t step = 0;
};

/// Time series of the front-tip position x*(t), rho(x*) = threshold.
struct FrontTrace {
    std::vector<std::pair<double, double>> samples;  // (t, x_star)
    double threshold = 1e-20;
};

struct SnapshotSchedule {
    std::vector<double> times;  // strictly increasing

    static SnapshotSchedule at(std::vector<double> ts);
};

struct Trajectory {
    std::vector<std::pair<double, SimState>> snapshots;
    FrontTrace front_trace;
    bool truncated = false;     // wall-clock budget hit before t_end
    std::string warning;
};

}  // namespace flks
