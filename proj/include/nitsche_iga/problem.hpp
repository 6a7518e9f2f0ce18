#pragma once

// Continuous problem data: d_t u - div(mu grad u) + b . grad u + c u = f,
// u = g on the boundary, u(0) = u0.

#include "nitsche_iga/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace niga {

using ScalarField = std::function<double(const Vec2& x, double t)>;
using VectorField = std::function<Vec2(const Vec2& x, double t)>;
using MatrixField = std::function<Mat2(const Vec2& x, double t)>;

struct Problem {
    MatrixField mu;
    VectorField b;
    ScalarField c;
    ScalarField f;
    ScalarField g;
    std::function<double(const Vec2& x)> u0;
    double mu0 = 1.0;  // ellipticity bounds of mu
    double mu1 = 1.0;
    double c0 = 1.0;   // lower bound of c - div(b)/2
    double T = 1.0;

    // alpha = min{mu0, c0}
    double alpha() const { return std::min(mu0, c0); }
};

struct ManufacturedCase {
    std::string name;
    Problem problem;
    ScalarField u;
    VectorField grad_u;
    MatrixField hess_u;
    ScalarField dudt;
    bool stationary = false;  // u independent of t
};

// Scalings applied to a builtin case; the source term is recomputed so the
// exact solution stays exact.
struct CaseOptions {
    double mu_scale = 1.0;
    double c_scale = 1.0;
};

// name in {paper_sec8, zero, steady_reaction}; throws UnknownCase.
ManufacturedCase builtin_case(const std::string& name, const CaseOptions& options = {});
std::vector<std::string> builtin_case_names();

// Gamma_in(t) membership: b(x,t) . n < 0 (strict).
bool inflow_indicator(const Problem& p, const Vec2& x, const Vec2& n, double t);

struct AssumptionAudit {
    bool mu_symmetric = true;
    bool mu_bounds_ok = true;
    bool reaction_ok = true;
    double min_rayleigh = 0.0, max_rayleigh = 0.0;
    double min_reaction = 0.0;  // sampled min of c - div(b)/2 on the boundary
    std::vector<std::string> warnings;
    bool ok() const { return mu_symmetric && mu_bounds_ok && reaction_ok; }
};

// Sampling audit of the coefficient hypotheses on the physical domain F(square).
// Warns, never throws.
AssumptionAudit audit_coefficients(const Problem& p, const GeometryMap& geometry, int samples_per_dir = 9,
                                   int time_samples = 5, double tol = 1e-10);

// d_t u + L u - f at (x,t), with L applied by fourth-order central differences
// of the flux mu grad u and d_t u by central differences in time.
double consistency_residual(const ManufacturedCase& mc, const Vec2& x, double t, double step = 1e-3);

}  // namespace niga
