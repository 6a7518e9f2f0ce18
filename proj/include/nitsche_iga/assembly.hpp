#pragma once

// Element and boundary-edge assembly of the mass matrix, the Nitsche
// operator A(t) and the load F(t). Matrix rows are test functions, columns
// trial functions: A_ij = a(t; N_j, N_i).

#include "nitsche_iga/geometry.hpp"
#include "nitsche_iga/linalg.hpp"
#include "nitsche_iga/problem.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace niga {

struct DiscretizationOptions {
    int quadrature_order = 0;  // points per direction; 0 selects k+2
    int threads = 1;
};

// Basis data at the quadrature points of one element or boundary edge.
// Values are stored point-major: N[p * nloc + a].
struct QuadData {
    std::vector<std::size_t> dofs;  // local -> global
    std::vector<Vec2> xhat;
    std::vector<Vec2> x;
    std::vector<double> w;          // includes |det J| or the line element
    std::vector<double> N;
    std::vector<Vec2> dN;           // physical gradients
    std::vector<Vec2> normal;       // edges only
    std::size_t num_points() const { return x.size(); }
    std::size_t num_local() const { return dofs.size(); }
};

class Discretization {
public:
    Discretization(std::shared_ptr<const GeometryMap> geometry, TensorSpace space,
                   DiscretizationOptions options = {});

    const TensorSpace& space() const { return space_; }
    const PhysicalMesh& mesh() const { return mesh_; }
    const GeometryMap& geometry() const { return *geometry_; }
    std::shared_ptr<const GeometryMap> geometry_ptr() const { return geometry_; }
    std::size_t dimension() const { return space_.dimension(); }
    int quadrature_order() const { return q_; }
    int threads() const { return threads_; }

    const std::vector<QuadData>& element_data() const { return elements_; }
    const std::vector<QuadData>& edge_data() const { return edges_; }

    // Zero-valued matrix whose pattern couples functions sharing an element.
    const SparseMatrix& pattern() const { return pattern_; }
    // CSR slots of local (a,b) pairs: slots[a * nloc + b].
    const std::vector<std::size_t>& element_slots(std::size_t e) const { return element_slots_[e]; }

    // Physical values, gradients and (optionally) Hessians of the functions
    // supported on element e at parametric point xhat.
    struct PhysicalBasis {
        std::vector<std::size_t> dofs;
        Vec2 x;
        double det;
        std::vector<double> N;
        std::vector<Vec2> dN;
        std::vector<Mat2> d2N;
    };
    PhysicalBasis eval_physical(std::size_t e, const Vec2& xhat, bool hessians = false) const;

    // Runs fn(i) for i in [0, n) on the configured number of threads.
    template <class Fn>
    void parallel_for(std::size_t n, Fn&& fn) const;

private:
    QuadData build_element_data(const MeshElement& el) const;
    QuadData build_edge_data(const BoundaryEdge& edge) const;

    std::shared_ptr<const GeometryMap> geometry_;
    TensorSpace space_;
    PhysicalMesh mesh_;
    int q_;
    int threads_;
    std::vector<QuadData> elements_;
    std::vector<QuadData> edges_;
    SparseMatrix pattern_;
    std::vector<std::vector<std::size_t>> element_slots_;
};

// Inflow flags (b . n < 0) per edge quadrature point at time t, edge-major.
std::vector<std::vector<std::uint8_t>> inflow_flags(const Discretization& disc, const Problem& p, double t);

SparseMatrix assemble_mass(const Discretization& disc);

// Full Nitsche operator: volume, flux, symmetrization, inflow and penalty terms.
SparseMatrix assemble_stiffness(const Discretization& disc, const Problem& p, double eps, double t);

// Boundary mass weighted by 1/h_E (the penalty matrix for eps = 1).
SparseMatrix assemble_penalty(const Discretization& disc);

// H^1 seminorm Gram matrix.
SparseMatrix assemble_laplacian(const Discretization& disc);

// Gram matrix of the V_h norm: mass + H^1 seminorm + weighted boundary mass.
SparseMatrix assemble_vh_gram(const Discretization& disc);

std::vector<double> assemble_load(const Discretization& disc, const Problem& p, double eps, double t);

// Load with an arbitrary volume source (used for L2 projections).
std::vector<double> assemble_projection_rhs(const Discretization& disc,
                                            const std::function<double(const Vec2&)>& fn);

struct TraceConstants {
    double flux = 0.0;  // sharp C* in ||n . grad v||_E^2 <= C* h_E^{-1} |v|^2_{H1(K_E)}
    double l2 = 0.0;    // sharp C* in ||v||_E^2 <= C* h_E^{-1} ||v||^2_{L2(K_E)}
    std::size_t worst_edge = 0;
};

// Per-edge generalized eigenvalue problems on the owner element's local
// basis, maximized over edges. Throws SingularGram if the seminorm Gram is
// singular on the complement of the constants.
TraceConstants trace_constants(const Discretization& disc);

struct PenaltyFloor {
    double floor = 0.0;  // 2 alpha^{-1} C* mu1^2
    double alpha = 0.0;
    TraceConstants trace;
};

PenaltyFloor penalty_floor(const Discretization& disc, const Problem& p, double alpha);
PenaltyFloor penalty_floor(const Discretization& disc, const Problem& p);  // alpha = min{mu0, c0}

// Mass matrix plus time-dependent operator and load at fixed eps.
class AssembledForms {
public:
    AssembledForms(const Discretization& disc, const Problem& p, double eps, bool freeze_operator = false);

    const Discretization& discretization() const { return *disc_; }
    const Problem& problem() const { return *problem_; }
    double epsilon() const { return eps_; }
    bool frozen() const { return freeze_; }
    const SparseMatrix& mass() const { return mass_; }

    SparseMatrix stiffness(double t) const;
    std::vector<double> load(double t) const;

private:
    const Discretization* disc_;
    const Problem* problem_;
    double eps_;
    bool freeze_;
    SparseMatrix mass_;
    mutable std::optional<SparseMatrix> frozen_operator_;
};

}  // namespace niga

#include "nitsche_iga/detail/parallel.hpp"
