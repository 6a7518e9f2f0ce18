#include "nitsche_iga/assembly.hpp"

#include "nitsche_iga/error.hpp"
#include "nitsche_iga/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace niga {

// ---------------------------------------------------------------------------
// Discretization

Discretization::Discretization(std::shared_ptr<const GeometryMap> geometry, TensorSpace space,
                               DiscretizationOptions options)
    : geometry_(std::move(geometry)),
      space_(std::move(space)),
      mesh_(geometry_, space_),
      q_(options.quadrature_order > 0
             ? options.quadrature_order
             : std::max(space_.direction(0).degree(), space_.direction(1).degree()) + 2),
      threads_(std::max(options.threads, 1)) {
    gauss_rule(q_);  // validates the order

    elements_.resize(mesh_.elements().size());
    parallel_for(elements_.size(), [&](std::size_t e) { elements_[e] = build_element_data(mesh_.elements()[e]); });
    edges_.resize(mesh_.edges().size());
    parallel_for(edges_.size(), [&](std::size_t i) { edges_[i] = build_edge_data(mesh_.edges()[i]); });

    std::vector<std::vector<std::size_t>> rows(space_.dimension());
    for (const QuadData& el : elements_)
        for (std::size_t i : el.dofs) rows[i].insert(rows[i].end(), el.dofs.begin(), el.dofs.end());
    pattern_ = SparseMatrix::from_pattern(space_.dimension(), std::move(rows));

    element_slots_.resize(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        const auto& dofs = elements_[e].dofs;
        auto& slots = element_slots_[e];
        slots.resize(dofs.size() * dofs.size());
        for (std::size_t a = 0; a < dofs.size(); ++a)
            for (std::size_t b = 0; b < dofs.size(); ++b)
                slots[a * dofs.size() + b] = static_cast<std::size_t>(pattern_.find(dofs[a], dofs[b]));
    }
}

Discretization::PhysicalBasis Discretization::eval_physical(std::size_t e, const Vec2& xhat, bool hessians) const {
    const MeshElement& el = mesh_.elements().at(e);
    const GeometryPoint g = geometry_->eval(xhat, hessians, el.center());
    const TensorBasisEval b = space_.eval_on_element(e, xhat, hessians ? 2 : 1);
    const Mat2 Jinv = g.jac.inverse();
    const Mat2 JinvT = Jinv.transpose();
    PhysicalBasis out;
    out.dofs = b.indices;
    out.x = g.x;
    out.det = g.det;
    out.N = b.value;
    out.dN.resize(b.indices.size());
    for (std::size_t a = 0; a < b.indices.size(); ++a) out.dN[a] = JinvT * b.grad[a];
    if (hessians) {
        out.d2N.resize(b.indices.size());
        for (std::size_t a = 0; a < b.indices.size(); ++a) {
            const Mat2 corrected = b.hess[a] - out.dN[a][0] * g.hess[0] - out.dN[a][1] * g.hess[1];
            out.d2N[a] = JinvT * corrected * Jinv;
        }
    }
    return out;
}

QuadData Discretization::build_element_data(const MeshElement& el) const {
    QuadData d;
    d.dofs = space_.element_functions(el.index);
    const QuadratureRule ru = gauss_rule(q_, el.lower[0], el.upper[0]);
    const QuadratureRule rv = gauss_rule(q_, el.lower[1], el.upper[1]);
    const std::size_t nloc = d.dofs.size();
    for (int b = 0; b < q_; ++b) {
        for (int a = 0; a < q_; ++a) {
            const Vec2 xhat(ru.points[a], rv.points[b]);
            const PhysicalBasis pb = eval_physical(el.index, xhat);
            d.xhat.push_back(xhat);
            d.x.push_back(pb.x);
            d.w.push_back(ru.weights[a] * rv.weights[b] * std::abs(pb.det));
            d.N.insert(d.N.end(), pb.N.begin(), pb.N.end());
            d.dN.insert(d.dN.end(), pb.dN.begin(), pb.dN.end());
        }
    }
    (void)nloc;
    return d;
}

QuadData Discretization::build_edge_data(const BoundaryEdge& edge) const {
    QuadData d;
    d.dofs = space_.element_functions(edge.owner);
    const QuadratureRule r = gauss_rule(q_);
    const double len = edge.s1 - edge.s0;
    const Vec2 center = mesh_.elements()[edge.owner].center();
    for (int a = 0; a < q_; ++a) {
        const Vec2 xhat = mesh_.edge_point(edge, r.points[a]);
        const GeometryPoint g = geometry_->eval(xhat, false, center);
        const auto [n, measure] = PhysicalMesh::normal_and_measure(edge.side, g);
        const PhysicalBasis pb = eval_physical(edge.owner, xhat);
        d.xhat.push_back(xhat);
        d.x.push_back(g.x);
        d.w.push_back(r.weights[a] * len * measure);
        d.normal.push_back(n);
        d.N.insert(d.N.end(), pb.N.begin(), pb.N.end());
        d.dN.insert(d.dN.end(), pb.dN.begin(), pb.dN.end());
    }
    return d;
}

// ---------------------------------------------------------------------------

namespace {

using LocalKernel = std::function<void(std::size_t index, const QuadData& q, std::vector<double>& local)>;

// Local matrices are computed concurrently and scattered serially in element
// order, then edge order, so results do not depend on the thread count.
SparseMatrix assemble_matrix(const Discretization& disc, const LocalKernel& element_kernel,
                             const LocalKernel& edge_kernel) {
    SparseMatrix A = disc.pattern();
    auto& values = A.values();
    auto run = [&](const std::vector<QuadData>& data, const LocalKernel& kernel, bool edges) {
        if (!kernel) return;
        constexpr std::size_t block = 2048;
        std::vector<std::vector<double>> locals;
        for (std::size_t start = 0; start < data.size(); start += block) {
            const std::size_t count = std::min(block, data.size() - start);
            locals.assign(count, {});
            disc.parallel_for(count, [&](std::size_t i) {
                const QuadData& q = data[start + i];
                locals[i].assign(q.num_local() * q.num_local(), 0.0);
                kernel(start + i, q, locals[i]);
            });
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t idx = start + i;
                const std::size_t owner = edges ? disc.mesh().edges()[idx].owner : idx;
                const auto& slots = disc.element_slots(owner);
                for (std::size_t s = 0; s < slots.size(); ++s) values[slots[s]] += locals[i][s];
            }
        }
    };
    run(disc.element_data(), element_kernel, false);
    run(disc.edge_data(), edge_kernel, true);
    return A;
}

using VectorKernel = std::function<void(std::size_t index, const QuadData& q, std::vector<double>& local)>;

std::vector<double> assemble_vector(const Discretization& disc, const VectorKernel& element_kernel,
                                    const VectorKernel& edge_kernel) {
    std::vector<double> F(disc.dimension(), 0.0);
    auto run = [&](const std::vector<QuadData>& data, const VectorKernel& kernel) {
        if (!kernel) return;
        std::vector<std::vector<double>> locals(data.size());
        disc.parallel_for(data.size(), [&](std::size_t i) {
            locals[i].assign(data[i].num_local(), 0.0);
            kernel(i, data[i], locals[i]);
        });
        for (std::size_t i = 0; i < data.size(); ++i)
            for (std::size_t a = 0; a < data[i].num_local(); ++a) F[data[i].dofs[a]] += locals[i][a];
    };
    run(disc.element_data(), element_kernel);
    run(disc.edge_data(), edge_kernel);
    return F;
}

void mass_kernel(const QuadData& q, std::vector<double>& local, double scale = 1.0) {
    const std::size_t n = q.num_local();
    for (std::size_t p = 0; p < q.num_points(); ++p) {
        const double* N = &q.N[p * n];
        const double w = q.w[p] * scale;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) local[a * n + b] += w * N[a] * N[b];
    }
}

}  // namespace

std::vector<std::vector<std::uint8_t>> inflow_flags(const Discretization& disc, const Problem& p, double t) {
    const auto& edges = disc.edge_data();
    std::vector<std::vector<std::uint8_t>> flags(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        flags[e].resize(edges[e].num_points());
        for (std::size_t k = 0; k < edges[e].num_points(); ++k)
            flags[e][k] = inflow_indicator(p, edges[e].x[k], edges[e].normal[k], t) ? 1 : 0;
    }
    return flags;
}

SparseMatrix assemble_mass(const Discretization& disc) {
    return assemble_matrix(
        disc, [](std::size_t, const QuadData& q, std::vector<double>& local) { mass_kernel(q, local); }, nullptr);
}

SparseMatrix assemble_penalty(const Discretization& disc) {
    const auto& edges = disc.mesh().edges();
    return assemble_matrix(disc, nullptr, [&](std::size_t i, const QuadData& q, std::vector<double>& local) {
        mass_kernel(q, local, 1.0 / edges[i].h_E);
    });
}

SparseMatrix assemble_laplacian(const Discretization& disc) {
    return assemble_matrix(
        disc,
        [](std::size_t, const QuadData& q, std::vector<double>& local) {
            const std::size_t n = q.num_local();
            for (std::size_t p = 0; p < q.num_points(); ++p) {
                const Vec2* dN = &q.dN[p * n];
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) local[a * n + b] += q.w[p] * dN[a].dot(dN[b]);
            }
        },
        nullptr);
}

SparseMatrix assemble_vh_gram(const Discretization& disc) {
    SparseMatrix G = assemble_mass(disc);
    G.add_scaled(assemble_laplacian(disc), 1.0);
    G.add_scaled(assemble_penalty(disc), 1.0);
    return G;
}

SparseMatrix assemble_stiffness(const Discretization& disc, const Problem& p, double eps, double t) {
    if (!(eps >= 0.0)) raise(ErrorCode::InvalidArgument, "penalty parameter must be nonnegative");
    const auto flags = inflow_flags(disc, p, t);
    const auto& edges = disc.mesh().edges();
    auto volume = [&](std::size_t, const QuadData& q, std::vector<double>& local) {
        const std::size_t n = q.num_local();
        std::vector<Vec2> mu_grad(n);
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            const Mat2 mu = p.mu(q.x[k], t);
            const Vec2 b = p.b(q.x[k], t);
            const double c = p.c(q.x[k], t);
            const double* N = &q.N[k * n];
            const Vec2* dN = &q.dN[k * n];
            for (std::size_t j = 0; j < n; ++j) mu_grad[j] = mu * dN[j];
            const double w = q.w[k];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    local[i * n + j] += w * (mu_grad[j].dot(dN[i]) + b.dot(dN[j]) * N[i] + c * N[j] * N[i]);
                }
            }
        }
    };
    auto boundary = [&](std::size_t e, const QuadData& q, std::vector<double>& local) {
        const std::size_t n = q.num_local();
        const double pen = eps / edges[e].h_E;
        std::vector<double> flux(n);
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            const Mat2 mu = p.mu(q.x[k], t);
            const Vec2& nrm = q.normal[k];
            const double bn = p.b(q.x[k], t).dot(nrm);
            const double inflow = flags[e][k] ? bn : 0.0;
            const double* N = &q.N[k * n];
            const Vec2* dN = &q.dN[k * n];
            for (std::size_t j = 0; j < n; ++j) flux[j] = nrm.dot(mu * dN[j]);
            const double w = q.w[k];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    local[i * n + j] +=
                        w * (-flux[j] * N[i] - flux[i] * N[j] - inflow * N[j] * N[i] + pen * N[j] * N[i]);
                }
            }
        }
    };
    return assemble_matrix(disc, volume, boundary);
}

std::vector<double> assemble_load(const Discretization& disc, const Problem& p, double eps, double t) {
    if (!(eps >= 0.0)) raise(ErrorCode::InvalidArgument, "penalty parameter must be nonnegative");
    const auto flags = inflow_flags(disc, p, t);
    const auto& edges = disc.mesh().edges();
    auto volume = [&](std::size_t, const QuadData& q, std::vector<double>& local) {
        const std::size_t n = q.num_local();
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            const double fw = p.f(q.x[k], t) * q.w[k];
            const double* N = &q.N[k * n];
            for (std::size_t i = 0; i < n; ++i) local[i] += fw * N[i];
        }
    };
    auto boundary = [&](std::size_t e, const QuadData& q, std::vector<double>& local) {
        const std::size_t n = q.num_local();
        const double pen = eps / edges[e].h_E;
        for (std::size_t k = 0; k < q.num_points(); ++k) {
            const double g = p.g(q.x[k], t);
            if (g == 0.0) continue;
            const Mat2 mu = p.mu(q.x[k], t);
            const Vec2& nrm = q.normal[k];
            const double bn = p.b(q.x[k], t).dot(nrm);
            const double inflow = flags[e][k] ? bn : 0.0;
            const double* N = &q.N[k * n];
            const Vec2* dN = &q.dN[k * n];
            const double w = q.w[k];
            for (std::size_t i = 0; i < n; ++i) {
                const double flux = nrm.dot(mu * dN[i]);
                local[i] += w * g * (-flux - inflow * N[i] + pen * N[i]);
            }
        }
    };
    return assemble_vector(disc, volume, boundary);
}

std::vector<double> assemble_projection_rhs(const Discretization& disc,
                                            const std::function<double(const Vec2&)>& fn) {
    return assemble_vector(
        disc,
        [&](std::size_t, const QuadData& q, std::vector<double>& local) {
            const std::size_t n = q.num_local();
            for (std::size_t k = 0; k < q.num_points(); ++k) {
                const double fw = fn(q.x[k]) * q.w[k];
                for (std::size_t i = 0; i < n; ++i) local[i] += fw * q.N[k * n + i];
            }
        },
        nullptr);
}

// ---------------------------------------------------------------------------

TraceConstants trace_constants(const Discretization& disc) {
    TraceConstants out;
    const auto& edges = disc.mesh().edges();
    const auto& edata = disc.edge_data();
    const auto& vdata = disc.element_data();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const QuadData& eq = edata[e];
        const QuadData& kq = vdata[edges[e].owner];
        const auto n = static_cast<Eigen::Index>(kq.num_local());
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n), Mk = S, Bf = S, Bm = S;
        for (std::size_t k = 0; k < kq.num_points(); ++k)
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) {
                    S(a, b) += kq.w[k] * kq.dN[k * n + a].dot(kq.dN[k * n + b]);
                    Mk(a, b) += kq.w[k] * kq.N[k * n + a] * kq.N[k * n + b];
                }
        for (std::size_t k = 0; k < eq.num_points(); ++k)
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) {
                    Bf(a, b) += eq.w[k] * eq.normal[k].dot(eq.dN[k * n + a]) * eq.normal[k].dot(eq.dN[k * n + b]);
                    Bm(a, b) += eq.w[k] * eq.N[k * n + a] * eq.N[k * n + b];
                }
        Bf *= edges[e].h_E;
        Bm *= edges[e].h_E;

        // Both forms vanish on constants; restrict to the orthogonal complement of the constant vector.
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
        const Eigen::MatrixXd Q = qr.householderQ();
        const Eigen::MatrixXd Z = Q.rightCols(n - 1);
        GeneralizedEigenpairs flux;
        try {
            flux = generalized_symmetric_eig(Z.transpose() * Bf * Z, Z.transpose() * S * Z);
        } catch (const Error& err) {
            if (err.code() == ErrorCode::NotSPD)
                raise(ErrorCode::SingularGram, "seminorm Gram of element " + std::to_string(edges[e].owner) +
                                                   " is singular on non-constant functions");
            throw;
        }
        const GeneralizedEigenpairs l2 = generalized_symmetric_eig(Bm, Mk);
        const double cf = flux.values[flux.values.size() - 1];
        if (cf > out.flux) {
            out.flux = cf;
            out.worst_edge = e;
        }
        out.l2 = std::max(out.l2, l2.values[l2.values.size() - 1]);
    }
    return out;
}

PenaltyFloor penalty_floor(const Discretization& disc, const Problem& p, double alpha) {
    if (!(alpha > 0.0)) raise(ErrorCode::InvalidArgument, "alpha must be positive");
    PenaltyFloor out;
    out.alpha = alpha;
    out.trace = trace_constants(disc);
    out.floor = 2.0 / alpha * out.trace.flux * p.mu1 * p.mu1;
    return out;
}

PenaltyFloor penalty_floor(const Discretization& disc, const Problem& p) {
    return penalty_floor(disc, p, p.alpha());
}

// ---------------------------------------------------------------------------

AssembledForms::AssembledForms(const Discretization& disc, const Problem& p, double eps, bool freeze_operator)
    : disc_(&disc), problem_(&p), eps_(eps), freeze_(freeze_operator), mass_(assemble_mass(disc)) {}

SparseMatrix AssembledForms::stiffness(double t) const {
    if (!freeze_) return assemble_stiffness(*disc_, *problem_, eps_, t);
    if (!frozen_operator_) frozen_operator_ = assemble_stiffness(*disc_, *problem_, eps_, t);
    return *frozen_operator_;
}

std::vector<double> AssembledForms::load(double t) const { return assemble_load(*disc_, *problem_, eps_, t); }

}  // namespace niga
