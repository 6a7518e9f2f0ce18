#pragma once

// Backward-Euler march from the L2-projected initial datum.

#include "nitsche_iga/assembly.hpp"

#include <functional>
#include <vector>

namespace niga {

struct TimeGrid {
    double T = 1.0;
    std::size_t N = 1;

    TimeGrid(double final_time, std::size_t steps);
    // Smallest N with T/N <= tau.
    static TimeGrid from_step(double final_time, double tau);

    double tau() const { return T / static_cast<double>(N); }
    double time(std::size_t n) const { return n == N ? T : static_cast<double>(n) * tau(); }
};

// Coefficients u^0 ... u^N; u(t) = u^{n+1} on (t_n, t_{n+1}].
struct SolutionTrajectory {
    TimeGrid grid;
    double epsilon = 0.0;
    std::vector<std::vector<double>> coefficients;

    // Index of the step whose constant value is used at time t.
    std::size_t step_at(double t) const;
};

// Solves M u0 = (u0, N_i).
std::vector<double> project_initial(const Discretization& disc, const std::function<double(const Vec2&)>& u0,
                                    const SolverOptions& options = {});

struct MarchOptions {
    SolverOptions solver;
    // Called after each step with (n, u^n); u^0 is reported with n = 0.
    std::function<void(std::size_t, const std::vector<double>&)> observer;
    bool keep_trajectory = true;
};

// (M + tau A(t_n)) u^n = M u^{n-1} + tau F(t_n), n = 1..N.
SolutionTrajectory march(const AssembledForms& forms, const TimeGrid& grid, std::vector<double> initial,
                         const MarchOptions& options = {});

}  // namespace niga
