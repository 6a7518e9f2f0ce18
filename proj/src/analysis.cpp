#include "nitsche_iga/analysis.hpp"

#include "nitsche_iga/error.hpp"
#include "nitsche_iga/quadrature.hpp"

#include <cmath>

namespace niga {

NormParts norm_parts(const Discretization& disc, std::span<const double> coef, const ManufacturedCase* exact,
                     double t, bool with_h2) {
    if (coef.size() != disc.dimension()) raise(ErrorCode::InvalidArgument, "coefficient vector has wrong length");
    NormParts out;
    for (const QuadData& q : disc.element_data()) {
        const std::size_t n = q.num_local();
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            double v = 0.0;
            Vec2 dv = Vec2::Zero();
            for (std::size_t a = 0; a < n; ++a) {
                v += coef[q.dofs[a]] * q.N[k * n + a];
                dv += coef[q.dofs[a]] * q.dN[k * n + a];
            }
            if (exact) {
                v -= exact->u(q.x[k], t);
                dv -= exact->grad_u(q.x[k], t);
            }
            out.l2 += q.w[k] * v * v;
            out.h1_semi += q.w[k] * dv.squaredNorm();
        }
    }
    const auto& edges = disc.mesh().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const QuadData& q = disc.edge_data()[e];
        const std::size_t n = q.num_local();
        double acc = 0.0;
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            double v = 0.0;
            for (std::size_t a = 0; a < n; ++a) v += coef[q.dofs[a]] * q.N[k * n + a];
            if (exact) v -= exact->u(q.x[k], t);
            acc += q.w[k] * v * v;
        }
        out.boundary += acc / edges[e].h_E;
    }
    if (with_h2) {
        const int qo = disc.quadrature_order();
        for (const MeshElement& el : disc.mesh().elements()) {
            const QuadratureRule ru = gauss_rule(qo, el.lower[0], el.upper[0]);
            const QuadratureRule rv = gauss_rule(qo, el.lower[1], el.upper[1]);
            double acc = 0.0;
            for (int b = 0; b < qo; ++b)
                for (int a = 0; a < qo; ++a) {
                    const auto pb = disc.eval_physical(el.index, Vec2(ru.points[a], rv.points[b]), true);
                    Mat2 H = Mat2::Zero();
                    for (std::size_t i = 0; i < pb.dofs.size(); ++i) H += coef[pb.dofs[i]] * pb.d2N[i];
                    if (exact) H -= exact->hess_u(pb.x, t);
                    acc += ru.weights[a] * rv.weights[b] * std::abs(pb.det) * H.squaredNorm();
                }
            out.h2_broken += el.h_K * el.h_K * acc;
        }
    }
    return out;
}

double vh_norm(const Discretization& disc, std::span<const double> coef) {
    return std::sqrt(norm_parts(disc, coef).vh());
}

double v_norm(const Discretization& disc, std::span<const double> coef) {
    return std::sqrt(norm_parts(disc, coef, nullptr, 0.0, true).v());
}

double boundary_defect(const Discretization& disc, std::span<const double> coef, const Problem& p, double t) {
    const auto& edges = disc.mesh().edges();
    double out = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const QuadData& q = disc.edge_data()[e];
        const std::size_t n = q.num_local();
        double acc = 0.0;
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            double v = -p.g(q.x[k], t);
            for (std::size_t a = 0; a < n; ++a) v += coef[q.dofs[a]] * q.N[k * n + a];
            acc += q.w[k] * v * v;
        }
        out += acc / edges[e].h_E;
    }
    return out;
}

// ---------------------------------------------------------------------------

SpaceTimeError::SpaceTimeError(const Discretization& disc, const ManufacturedCase& mc, const TimeGrid& grid)
    : disc_(&disc), mc_(&mc), grid_(grid) {}

void SpaceTimeError::add_step(std::size_t n, std::span<const double> coef) {
    if (n == 0) return;
    if (coef.size() != disc_->dimension()) raise(ErrorCode::InvalidArgument, "coefficient vector has wrong length");
    const QuadratureRule rt = gauss_rule(3, grid_.time(n - 1), grid_.time(n));
    for (const QuadData& q : disc_->element_data()) {
        const std::size_t nl = q.num_local();
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            double v = 0.0;
            Vec2 dv = Vec2::Zero();
            for (std::size_t a = 0; a < nl; ++a) {
                v += coef[q.dofs[a]] * q.N[k * nl + a];
                dv += coef[q.dofs[a]] * q.dN[k * nl + a];
            }
            for (int j = 0; j < 3; ++j) {
                const double t = rt.points[j];
                const double e = mc_->u(q.x[k], t) - v;
                const double e2 = e * e;
                const double g2 = (mc_->grad_u(q.x[k], t) - dv).squaredNorm();
                l2_sq_ += rt.weights[j] * q.w[k] * e2;
                h1_sq_ += rt.weights[j] * q.w[k] * (e2 + g2);
            }
        }
    }
}

double SpaceTimeError::l2_h1() const { return std::sqrt(h1_sq_); }
double SpaceTimeError::l2_l2() const { return std::sqrt(l2_sq_); }

namespace {

SpaceTimeError accumulate(const Discretization& disc, const SolutionTrajectory& traj, const ManufacturedCase& mc) {
    if (traj.coefficients.size() != traj.grid.N + 1)
        raise(ErrorCode::InvalidArgument, "trajectory does not hold every time step");
    SpaceTimeError acc(disc, mc, traj.grid);
    for (std::size_t n = 1; n <= traj.grid.N; ++n) acc.add_step(n, traj.coefficients[n]);
    return acc;
}

}  // namespace

double error_L2J_H1(const Discretization& disc, const SolutionTrajectory& traj, const ManufacturedCase& mc) {
    return accumulate(disc, traj, mc).l2_h1();
}

double error_L2J_L2(const Discretization& disc, const SolutionTrajectory& traj, const ManufacturedCase& mc) {
    return accumulate(disc, traj, mc).l2_l2();
}

// ---------------------------------------------------------------------------

CoercivityAudit coercivity_audit(const Discretization& disc, const Problem& p, double eps, double t) {
    if (disc.dimension() > kMaxAuditDofs)
        raise(ErrorCode::InvalidArgument, "coercivity audit is dense and limited to " +
                                              std::to_string(kMaxAuditDofs) + " DOF");
    const Eigen::MatrixXd A = assemble_stiffness(disc, p, eps, t).to_dense();
    const Eigen::MatrixXd G = assemble_vh_gram(disc).to_dense();
    const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
    const GeneralizedEigenpairs eig = generalized_symmetric_eig(S, G);
    CoercivityAudit out;
    out.alpha_hat = eig.values[0];
    out.pass = out.alpha_hat > 0.0;
    return out;
}

double continuity_constant(const Discretization& disc, const Problem& p, double eps, double t) {
    if (disc.dimension() > kMaxAuditDofs)
        raise(ErrorCode::InvalidArgument, "continuity audit is dense and limited to " +
                                              std::to_string(kMaxAuditDofs) + " DOF");
    const Eigen::MatrixXd A = assemble_stiffness(disc, p, eps, t).to_dense();
    const Eigen::MatrixXd G = assemble_vh_gram(disc).to_dense();
    return max_scaled_singular_value(A, G);
}

RateTable rate_table(std::span<const double> h, std::span<const double> err) {
    if (h.size() != err.size()) raise(ErrorCode::InvalidArgument, "h and error sequences differ in length");
    if (h.size() < 2) raise(ErrorCode::InsufficientLevels, "rate fit needs at least two levels");
    RateTable out;
    for (std::size_t i = 1; i < h.size(); ++i)
        out.pairwise.push_back(std::log(err[i - 1] / err[i]) / std::log(h[i - 1] / h[i]));
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto m = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

}  // namespace niga
