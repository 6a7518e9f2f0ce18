#pragma once

// Error norms, convergence rates and spectral audits of the Nitsche form.

#include "nitsche_iga/assembly.hpp"
#include "nitsche_iga/timestepping.hpp"

#include <optional>
#include <span>
#include <vector>

namespace niga {

// Squared pieces of the V_h and V norms of (u_h - u), by quadrature.
struct NormParts {
    double l2 = 0.0;        // ||.||^2_{L2}
    double h1_semi = 0.0;   // |.|^2_{H1}
    double boundary = 0.0;  // sum_E h_E^{-1} ||.||^2_{L2(E)}
    double h2_broken = 0.0; // sum_K h_K^2 |.|^2_{H2(K)}, only when requested

    double h1() const { return l2 + h1_semi; }
    double vh() const { return l2 + h1_semi + boundary; }
    double v() const { return vh() + h2_broken; }
};

// Norm parts of the discrete function `coef`, minus the exact solution of
// `exact` at time t when given.
NormParts norm_parts(const Discretization& disc, std::span<const double> coef,
                     const ManufacturedCase* exact = nullptr, double t = 0.0, bool with_h2 = false);

double vh_norm(const Discretization& disc, std::span<const double> coef);
// Includes the broken H^2 term; diagnostics only.
double v_norm(const Discretization& disc, std::span<const double> coef);

// sum_E h_E^{-1} ||u_h - g(t)||^2_{L2(E)}
double boundary_defect(const Discretization& disc, std::span<const double> coef, const Problem& p, double t);

// Accumulates int_J ||u(t) - u_h(t)||^2 dt for the piecewise-constant
// extension, one step at a time (3-point Gauss in time per step).
class SpaceTimeError {
public:
    SpaceTimeError(const Discretization& disc, const ManufacturedCase& mc, const TimeGrid& grid);

    // u^n for step n >= 1 (step 0 is ignored).
    void add_step(std::size_t n, std::span<const double> coef);

    double l2_h1() const;  // (int_J ||e||^2_{H1})^{1/2}
    double l2_l2() const;  // (int_J ||e||^2_{L2})^{1/2}

private:
    const Discretization* disc_;
    const ManufacturedCase* mc_;
    TimeGrid grid_;
    double h1_sq_ = 0.0, l2_sq_ = 0.0;
};

double error_L2J_H1(const Discretization& disc, const SolutionTrajectory& traj, const ManufacturedCase& mc);
double error_L2J_L2(const Discretization& disc, const SolutionTrajectory& traj, const ManufacturedCase& mc);

inline constexpr std::size_t kMaxAuditDofs = 400;

struct CoercivityAudit {
    double alpha_hat = 0.0;
    bool pass = false;
};

// Smallest generalized eigenvalue of (sym(A), G_Vh). Dense; at most 400 DOF.
CoercivityAudit coercivity_audit(const Discretization& disc, const Problem& p, double eps, double t);

// Largest singular value of G^{-1/2} A G^{-1/2}.
double continuity_constant(const Discretization& disc, const Problem& p, double eps, double t);

struct LevelRecord {
    std::size_t level = 0;
    std::size_t spans = 0;
    double h = 0.0;
    double tau = 0.0;
    std::size_t steps = 0;
    std::size_t dof = 0;
    double epsilon = 0.0;
    double penalty_floor = 0.0;
    double err_l2h1 = 0.0;
    double err_l2l2 = 0.0;
    double err_bdry = 0.0;
    double assembly_seconds = 0.0;
    double solve_seconds = 0.0;
};

struct RateTable {
    std::vector<double> pairwise;  // log2-type rates between consecutive levels
    double slope = 0.0;            // least-squares slope of log err vs log h
};

// Throws InsufficientLevels with fewer than two levels.
RateTable rate_table(std::span<const double> h, std::span<const double> err);

}  // namespace niga
