#include "nitsche_iga/timestepping.hpp"

#include "nitsche_iga/error.hpp"

#include <cmath>
#include <optional>

namespace niga {

TimeGrid::TimeGrid(double final_time, std::size_t steps) : T(final_time), N(steps) {
    if (!(T > 0.0)) raise(ErrorCode::InvalidArgument, "final time must be positive");
    if (N < 1) raise(ErrorCode::InvalidArgument, "time grid needs at least one step");
}

TimeGrid TimeGrid::from_step(double final_time, double tau) {
    if (!(tau > 0.0)) raise(ErrorCode::InvalidArgument, "time step must be positive");
    const double ratio = final_time / tau;
    auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
    return TimeGrid(final_time, std::max<std::size_t>(steps, 1));
}

std::size_t SolutionTrajectory::step_at(double t) const {
    if (t <= 0.0) return 0;
    const auto n = static_cast<std::size_t>(std::ceil(t / grid.tau() - 1e-12));
    return std::min(std::max<std::size_t>(n, 1), grid.N);
}

std::vector<double> project_initial(const Discretization& disc, const std::function<double(const Vec2&)>& u0,
                                    const SolverOptions& options) {
    const SparseMatrix M = assemble_mass(disc);
    const std::vector<double> rhs = assemble_projection_rhs(disc, u0);
    return solve_sparse(M, rhs, options);
}

SolutionTrajectory march(const AssembledForms& forms, const TimeGrid& grid, std::vector<double> initial,
                         const MarchOptions& options) {
    const SparseMatrix& M = forms.mass();
    const std::size_t n = M.rows();
    if (initial.size() != n) raise(ErrorCode::InvalidArgument, "initial coefficient vector has wrong length");
    const double tau = grid.tau();

    SolutionTrajectory traj{grid, forms.epsilon(), {}};
    if (options.keep_trajectory) traj.coefficients.reserve(grid.N + 1);
    if (options.observer) options.observer(0, initial);
    if (options.keep_trajectory) traj.coefficients.push_back(initial);

    std::optional<SparseSolver> frozen_solver;
    std::vector<double> prev = std::move(initial);
    for (std::size_t step = 1; step <= grid.N; ++step) {
        const double t = grid.time(step);
        std::vector<double> rhs = M.multiply(prev);
        const std::vector<double> F = forms.load(t);
        for (std::size_t i = 0; i < n; ++i) rhs[i] += tau * F[i];

        std::vector<double> next;
        if (forms.frozen()) {
            if (!frozen_solver) {
                SparseMatrix system = M;
                system.add_scaled(forms.stiffness(t), tau);
                frozen_solver.emplace(system, options.solver);
            }
            next = frozen_solver->solve(rhs);
        } else {
            SparseMatrix system = M;
            system.add_scaled(forms.stiffness(t), tau);
            next = SparseSolver(system, options.solver).solve(rhs);
        }
        if (options.observer) options.observer(step, next);
        if (options.keep_trajectory) traj.coefficients.push_back(next);
        prev = std::move(next);
    }
    if (!options.keep_trajectory) traj.coefficients.push_back(std::move(prev));
    return traj;
}

}  // namespace niga
