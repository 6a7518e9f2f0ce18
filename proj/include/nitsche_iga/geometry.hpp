#pragma once

// Tensor-product spline spaces, the (rational) geometry map from the
// parametric square onto the physical domain, and the physical mesh.

#include "nitsche_iga/splines.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace niga {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Nonzero tensor-product functions at one point, with parametric derivatives.
struct TensorBasisEval {
    std::vector<std::size_t> indices;
    std::vector<double> value;
    std::vector<Vec2> grad;
    std::vector<Mat2> hess;  // filled when second derivatives are requested
};

class TensorSpace {
public:
    TensorSpace(KnotVector u, KnotVector v);

    const KnotVector& direction(int j) const { return j == 0 ? u_ : v_; }
    std::size_t dimension(int j) const { return direction(j).dimension(); }
    std::size_t dimension() const { return n1_ * n2_; }

    // Global index, direction 1 fastest.
    std::size_t index(std::size_t i1, std::size_t i2) const { return i1 + n1_ * i2; }
    std::pair<std::size_t, std::size_t> multi_index(std::size_t g) const { return {g % n1_, g / n1_}; }

    std::size_t num_elements() const { return u_.num_spans() * v_.num_spans(); }
    std::size_t element_index(std::size_t s1, std::size_t s2) const { return s1 + u_.num_spans() * s2; }
    std::pair<std::size_t, std::size_t> element_spans(std::size_t e) const {
        return {e % u_.num_spans(), e / u_.num_spans()};
    }
    std::size_t functions_per_element() const {
        return static_cast<std::size_t>((u_.degree() + 1) * (v_.degree() + 1));
    }

    // Global indices of the functions supported on element e, in the local
    // order a1 + (k1+1) a2.
    std::vector<std::size_t> element_functions(std::size_t e) const;

    // Evaluates the functions supported on element e at xhat (one-sided
    // limits from inside e at element boundaries).
    TensorBasisEval eval_on_element(std::size_t e, const Vec2& xhat, int max_deriv) const;

    // Evaluates at xhat using the half-open span rule.
    TensorBasisEval eval(const Vec2& xhat, int max_deriv) const;

private:
    TensorBasisEval combine(const BasisEvaluation& bu, const BasisEvaluation& bv, int max_deriv) const;

    KnotVector u_, v_;
    std::size_t n1_, n2_;
};

struct GeometryPoint {
    Vec2 x;
    Mat2 jac;   // jac(m, j) = d F_m / d xhat_j
    double det;
    std::array<Mat2, 2> hess;  // parametric Hessian of each component, on request
};

class GeometryMap {
public:
    GeometryMap(TensorSpace space, std::vector<Vec2> points, std::vector<double> weights,
                double jac_floor = 1e-12);

    // Plain-text format (see data/geometries):
    //   knots_u = k; xi_1 ... xi_r
    //   knots_v = k; xi_1 ... xi_r
    //   points
    //   x y w          (one row per control point, direction 1 fastest)
    static GeometryMap parse(std::string_view text);
    static GeometryMap load(const std::string& path);
    // "square", "quarter_annulus", or a path to a geometry file.
    static GeometryMap from_name(const std::string& name_or_path);
    static std::optional<std::string> builtin_text(std::string_view name);

    const TensorSpace& space() const { return space_; }
    const std::vector<Vec2>& control_points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double jac_floor() const { return jac_floor_; }

    // Evaluates F at xhat. `inside` selects the geometry span used at
    // breakpoints (defaults to the half-open rule at xhat itself).
    GeometryPoint eval(const Vec2& xhat, bool second_derivs = false,
                       const std::optional<Vec2>& inside = std::nullopt) const;

    // Rational basis functions w_i B_i / W with parametric derivatives.
    TensorBasisEval nurbs_basis(const Vec2& xhat, int max_deriv,
                                const std::optional<Vec2>& inside = std::nullopt) const;

    // Distinct breakpoints of the geometry in each direction.
    const std::vector<double>& breakpoints(int j) const { return space_.direction(j).mesh().breakpoints; }

private:
    TensorSpace space_;
    std::vector<Vec2> points_;
    std::vector<double> weights_;
    double jac_floor_;
};

enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };  // xhat1=0, xhat1=1, xhat2=0, xhat2=1

const char* to_string(Side side);

struct MeshElement {
    std::size_t index;
    std::size_t span1, span2;
    Vec2 lower, upper;  // parametric box Q
    double h_Q;         // diam(Q)
    double grad_norm;   // sampled sup of the spectral norm of grad F over Q
    double h_K;         // grad_norm * h_Q
    Vec2 center() const { return 0.5 * (lower + upper); }
};

struct BoundaryEdge {
    std::size_t index;
    Side side;
    std::size_t owner;  // element K_E
    double s0, s1;      // parametric range along the side
    double h_E;         // arc length of F(edge)
};

class PhysicalMesh {
public:
    // One element per nonzero knot-span box of `space`; every breakpoint of
    // the geometry must also be a breakpoint of `space`.
    PhysicalMesh(std::shared_ptr<const GeometryMap> geometry, const TensorSpace& space);

    const GeometryMap& geometry() const { return *geometry_; }
    const std::vector<MeshElement>& elements() const { return elements_; }
    const std::vector<BoundaryEdge>& edges() const { return edges_; }

    double h() const { return h_; }                    // max h_K
    double h_param() const { return h_param_; }        // max parametric span width
    double mesh_constant() const { return c_mesh_; }   // max h_{K_E} / h_E

    // Parametric point at local edge parameter s in [0,1].
    Vec2 edge_point(const BoundaryEdge& edge, double s) const;
    // Parametric outward unit normal of a side.
    static Vec2 parametric_normal(Side side);
    // Unit outward normal at F(edge point).
    Vec2 outward_normal(const BoundaryEdge& edge, double s) const;
    // Physical unit outward normal and the line element |dF/ds| at a
    // parametric point on the side, given the geometry evaluation there.
    static std::pair<Vec2, double> normal_and_measure(Side side, const GeometryPoint& g);

private:
    std::shared_ptr<const GeometryMap> geometry_;
    std::vector<MeshElement> elements_;
    std::vector<BoundaryEdge> edges_;
    double h_ = 0.0, h_param_ = 0.0, c_mesh_ = 0.0;
};

}  // namespace niga
