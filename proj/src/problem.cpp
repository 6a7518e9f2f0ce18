#include "nitsche_iga/problem.hpp"

#include "nitsche_iga/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace niga {

namespace {

constexpr double pi = std::numbers::pi;

// Source term for spatially constant mu: f = u_t - mu : hess u + b . grad u + c u.
ScalarField make_source(const ManufacturedCase& mc) {
    return [mu = mc.problem.mu, b = mc.problem.b, c = mc.problem.c, grad = mc.grad_u, hess = mc.hess_u,
            u = mc.u, dudt = mc.dudt](const Vec2& x, double t) {
        const Mat2 m = mu(x, t);
        const Mat2 H = hess(x, t);
        const double diffusion = (m.array() * H.array()).sum();
        return dudt(x, t) - diffusion + b(x, t).dot(grad(x, t)) + c(x, t) * u(x, t);
    };
}

ManufacturedCase transient_reference_case(const CaseOptions& opt) {
    ManufacturedCase mc;
    mc.name = "paper_sec8";
    const double s = opt.mu_scale, cs = opt.c_scale;
    mc.u = [](const Vec2& x, double t) {
        return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::exp((x[0] + x[1] - 1.0) * t);
    };
    mc.grad_u = [](const Vec2& x, double t) {
        const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
        const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
        const double E = std::exp((x[0] + x[1] - 1.0) * t);
        return Vec2((pi * cx * sy + t * sx * sy) * E, (pi * sx * cy + t * sx * sy) * E);
    };
    mc.hess_u = [](const Vec2& x, double t) {
        const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
        const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
        const double E = std::exp((x[0] + x[1] - 1.0) * t);
        const double S = sx * sy;
        Mat2 H;
        H(0, 0) = (-pi * pi * S + 2.0 * pi * t * cx * sy + t * t * S) * E;
        H(1, 1) = (-pi * pi * S + 2.0 * pi * t * sx * cy + t * t * S) * E;
        H(0, 1) = H(1, 0) = (pi * pi * cx * cy + pi * t * (cx * sy + sx * cy) + t * t * S) * E;
        return H;
    };
    mc.dudt = [u = mc.u](const Vec2& x, double t) { return (x[0] + x[1] - 1.0) * u(x, t); };

    Problem& p = mc.problem;
    p.mu = [s](const Vec2&, double) { return Mat2(s * Mat2::Identity()); };
    p.b = [](const Vec2&, double) { return Vec2(1.0, 1.0); };
    p.c = [cs](const Vec2&, double) { return cs; };
    p.g = [](const Vec2&, double) { return 0.0; };
    p.u0 = [](const Vec2& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
    p.mu0 = s;
    p.mu1 = s;
    p.c0 = cs;
    p.T = 4.0;
    p.f = make_source(mc);
    return mc;
}

ManufacturedCase zero_case(const CaseOptions& opt) {
    ManufacturedCase mc;
    mc.name = "zero";
    mc.stationary = true;
    const double s = opt.mu_scale, cs = opt.c_scale;
    mc.u = [](const Vec2&, double) { return 0.0; };
    mc.grad_u = [](const Vec2&, double) { return Vec2(0.0, 0.0); };
    mc.hess_u = [](const Vec2&, double) { return Mat2(Mat2::Zero()); };
    mc.dudt = [](const Vec2&, double) { return 0.0; };
    Problem& p = mc.problem;
    p.mu = [s](const Vec2&, double) { return Mat2(s * Mat2::Identity()); };
    p.b = [](const Vec2&, double) { return Vec2(1.0, 1.0); };
    p.c = [cs](const Vec2&, double) { return cs; };
    p.f = [](const Vec2&, double) { return 0.0; };
    p.g = [](const Vec2&, double) { return 0.0; };
    p.u0 = [](const Vec2&) { return 0.0; };
    p.mu0 = s;
    p.mu1 = s;
    p.c0 = cs;
    p.T = 1.0;
    return mc;
}

// Stationary biquadratic solution with anisotropic diffusion, constant
// advection and nonzero Dirichlet data.
ManufacturedCase steady_reaction_case(const CaseOptions& opt) {
    ManufacturedCase mc;
    mc.name = "steady_reaction";
    mc.stationary = true;
    const double s = opt.mu_scale, cs = opt.c_scale;
    auto px = [](double x) { return 1.0 + x - x * x; };
    auto qy = [](double y) { return 1.0 - y + 2.0 * y * y; };
    mc.u = [=](const Vec2& x, double) { return px(x[0]) * qy(x[1]); };
    mc.grad_u = [=](const Vec2& x, double) {
        return Vec2((1.0 - 2.0 * x[0]) * qy(x[1]), px(x[0]) * (-1.0 + 4.0 * x[1]));
    };
    mc.hess_u = [=](const Vec2& x, double) {
        Mat2 H;
        H(0, 0) = -2.0 * qy(x[1]);
        H(1, 1) = 4.0 * px(x[0]);
        H(0, 1) = H(1, 0) = (1.0 - 2.0 * x[0]) * (-1.0 + 4.0 * x[1]);
        return H;
    };
    mc.dudt = [](const Vec2&, double) { return 0.0; };

    Mat2 m;
    m << 2.0, 0.5, 0.5, 1.0;
    m *= s;
    Problem& p = mc.problem;
    p.mu = [m](const Vec2&, double) { return m; };
    p.b = [](const Vec2&, double) { return Vec2(1.0, 0.5); };
    p.c = [cs](const Vec2&, double) { return cs; };
    p.g = mc.u;
    p.u0 = [u = mc.u](const Vec2& x) { return u(x, 0.0); };
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    p.mu0 = es.eigenvalues()[0];
    p.mu1 = es.eigenvalues()[1];
    p.c0 = cs;
    p.T = 1.0;
    p.f = make_source(mc);
    return mc;
}

}  // namespace

std::vector<std::string> builtin_case_names() { return {"paper_sec8", "zero", "steady_reaction"}; }

ManufacturedCase builtin_case(const std::string& name, const CaseOptions& options) {
    if (!(options.mu_scale > 0.0) || !(options.c_scale > 0.0))
        raise(ErrorCode::InvalidArgument, "coefficient scalings must be positive");
    if (name == "paper_sec8") return transient_reference_case(options);
    if (name == "zero") return zero_case(options);
    if (name == "steady_reaction") return steady_reaction_case(options);
    raise(ErrorCode::UnknownCase, "no builtin case named '" + name + "'");
}

bool inflow_indicator(const Problem& p, const Vec2& x, const Vec2& n, double t) {
    return p.b(x, t).dot(n) < 0.0;
}

AssumptionAudit audit_coefficients(const Problem& p, const GeometryMap& geometry, int samples_per_dir,
                                   int time_samples, double tol) {
    AssumptionAudit audit;
    audit.min_rayleigh = std::numeric_limits<double>::infinity();
    audit.max_rayleigh = -std::numeric_limits<double>::infinity();
    audit.min_reaction = std::numeric_limits<double>::infinity();
    const int ns = std::max(samples_per_dir, 2);
    const int nt = std::max(time_samples, 1);
    const double fd = 1e-5;
    for (int it = 0; it < nt; ++it) {
        const double t = nt == 1 ? 0.0 : p.T * it / (nt - 1);
        for (int j = 0; j < ns; ++j) {
            for (int i = 0; i < ns; ++i) {
                const Vec2 xh(static_cast<double>(i) / (ns - 1), static_cast<double>(j) / (ns - 1));
                const Vec2 x = geometry.eval(xh).x;
                const Mat2 m = p.mu(x, t);
                if (std::abs(m(0, 1) - m(1, 0)) > tol * std::max(1.0, m.norm())) audit.mu_symmetric = false;
                Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (m + m.transpose()));
                audit.min_rayleigh = std::min(audit.min_rayleigh, es.eigenvalues()[0]);
                audit.max_rayleigh = std::max(audit.max_rayleigh, es.eigenvalues()[1]);
                const bool boundary = i == 0 || j == 0 || i == ns - 1 || j == ns - 1;
                if (boundary) {
                    const double divb = (p.b(x + Vec2(fd, 0), t)[0] - p.b(x - Vec2(fd, 0), t)[0] +
                                         p.b(x + Vec2(0, fd), t)[1] - p.b(x - Vec2(0, fd), t)[1]) /
                                        (2.0 * fd);
                    audit.min_reaction = std::min(audit.min_reaction, p.c(x, t) - 0.5 * divb);
                }
            }
        }
    }
    const double scale = std::max(1.0, p.mu1);
    if (audit.min_rayleigh < p.mu0 - tol * scale || audit.max_rayleigh > p.mu1 + tol * scale) {
        audit.mu_bounds_ok = false;
        std::ostringstream os;
        os << "sampled eigenvalues of mu in [" << audit.min_rayleigh << ", " << audit.max_rayleigh
           << "] exceed declared bounds [" << p.mu0 << ", " << p.mu1 << "]";
        audit.warnings.push_back(os.str());
    }
    if (!audit.mu_symmetric) audit.warnings.push_back("mu is not symmetric at some sample points");
    if (audit.min_reaction < p.c0 - 1e-6) {
        audit.reaction_ok = false;
        std::ostringstream os;
        os << "sampled min of c - div(b)/2 on the boundary is " << audit.min_reaction << " < c0 = " << p.c0;
        audit.warnings.push_back(os.str());
    }
    return audit;
}

double consistency_residual(const ManufacturedCase& mc, const Vec2& x, double t, double h) {
    const Problem& p = mc.problem;
    auto flux = [&](const Vec2& y) { return Vec2(p.mu(y, t) * mc.grad_u(y, t)); };
    auto d4 = [h](auto&& fn) { return (-fn(2.0 * h) + 8.0 * fn(h) - 8.0 * fn(-h) + fn(-2.0 * h)) / (12.0 * h); };
    const double div = d4([&](double s) { return flux(x + Vec2(s, 0.0))[0]; }) +
                       d4([&](double s) { return flux(x + Vec2(0.0, s))[1]; });
    const double ut = d4([&](double s) { return mc.u(x, t + s); });
    return ut - div + p.b(x, t).dot(mc.grad_u(x, t)) + p.c(x, t) * mc.u(x, t) - p.f(x, t);
}

}  // namespace niga
