#include "nitsche_iga/geometry.hpp"

#include "nitsche_iga/error.hpp"
#include "nitsche_iga/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace niga {

// ---------------------------------------------------------------------------
// TensorSpace

TensorSpace::TensorSpace(KnotVector u, KnotVector v)
    : u_(std::move(u)), v_(std::move(v)), n1_(u_.dimension()), n2_(v_.dimension()) {}

std::vector<std::size_t> TensorSpace::element_functions(std::size_t e) const {
    const auto [s1, s2] = element_spans(e);
    const std::size_t f1 = u_.first_function_on_span(s1);
    const std::size_t f2 = v_.first_function_on_span(s2);
    std::vector<std::size_t> out;
    out.reserve(functions_per_element());
    for (int a2 = 0; a2 <= v_.degree(); ++a2)
        for (int a1 = 0; a1 <= u_.degree(); ++a1) out.push_back(index(f1 + a1, f2 + a2));
    return out;
}

TensorBasisEval TensorSpace::combine(const BasisEvaluation& bu, const BasisEvaluation& bv,
                                     int max_deriv) const {
    const int p1 = u_.degree(), p2 = v_.degree();
    auto deriv = [](const BasisEvaluation& b, int d, int a) {
        return d < static_cast<int>(b.derivs.size()) ? b.derivs[d][a] : 0.0;
    };
    TensorBasisEval out;
    const std::size_t n = static_cast<std::size_t>((p1 + 1) * (p2 + 1));
    out.indices.reserve(n);
    out.value.reserve(n);
    if (max_deriv >= 1) out.grad.reserve(n);
    if (max_deriv >= 2) out.hess.reserve(n);
    for (int a2 = 0; a2 <= p2; ++a2) {
        for (int a1 = 0; a1 <= p1; ++a1) {
            out.indices.push_back(index(bu.first + a1, bv.first + a2));
            const double U = deriv(bu, 0, a1), V = deriv(bv, 0, a2);
            out.value.push_back(U * V);
            if (max_deriv >= 1) {
                const double dU = deriv(bu, 1, a1), dV = deriv(bv, 1, a2);
                out.grad.emplace_back(dU * V, U * dV);
                if (max_deriv >= 2) {
                    Mat2 h;
                    h << deriv(bu, 2, a1) * V, dU * dV, dU * dV, U * deriv(bv, 2, a2);
                    out.hess.push_back(h);
                }
            }
        }
    }
    return out;
}

TensorBasisEval TensorSpace::eval_on_element(std::size_t e, const Vec2& xhat, int max_deriv) const {
    const auto [s1, s2] = element_spans(e);
    const auto bu = u_.eval_on_span(s1, std::clamp(xhat[0], 0.0, 1.0), std::min(max_deriv, u_.degree()));
    const auto bv = v_.eval_on_span(s2, std::clamp(xhat[1], 0.0, 1.0), std::min(max_deriv, v_.degree()));
    return combine(bu, bv, max_deriv);
}

TensorBasisEval TensorSpace::eval(const Vec2& xhat, int max_deriv) const {
    const auto bu = u_.eval(xhat[0], std::min(max_deriv, u_.degree()));
    const auto bv = v_.eval(xhat[1], std::min(max_deriv, v_.degree()));
    return combine(bu, bv, max_deriv);
}

// ---------------------------------------------------------------------------
// GeometryMap

GeometryMap::GeometryMap(TensorSpace space, std::vector<Vec2> points, std::vector<double> weights,
                         double jac_floor)
    : space_(std::move(space)), points_(std::move(points)), weights_(std::move(weights)),
      jac_floor_(jac_floor) {
    if (points_.size() != space_.dimension() || weights_.size() != space_.dimension())
        raise(ErrorCode::InvalidArgument,
              "geometry needs " + std::to_string(space_.dimension()) + " control points, got " +
                  std::to_string(points_.size()));
    for (double w : weights_)
        if (!(w > 0.0)) raise(ErrorCode::InvalidArgument, "geometry weights must be positive");
}

namespace {

constexpr const char* kSquareText = R"(# identity map of the unit square
knots_u = 1; 0 0 1 1
knots_v = 1; 0 0 1 1
points
0 0 1
1 0 1
0 1 1
1 1 1
)";

constexpr const char* kQuarterAnnulusText = R"(# quarter annulus 1 <= r <= 2, first quadrant
# direction 1 is radial (linear), direction 2 angular (rational quadratic)
knots_u = 1; 0 0 1 1
knots_v = 2; 0 0 0 1 1 1
points
1 0 1
2 0 1
1 1 0.70710678118654757
2 2 0.70710678118654757
0 1 1
0 2 1
)";

std::string strip_comment(std::string line) {
    if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

}  // namespace

std::optional<std::string> GeometryMap::builtin_text(std::string_view name) {
    if (name == "square") return std::string(kSquareText);
    if (name == "quarter_annulus") return std::string(kQuarterAnnulusText);
    return std::nullopt;
}

GeometryMap GeometryMap::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<KnotVector> ku, kv;
    double jac_floor = 1e-12;
    std::vector<Vec2> points;
    std::vector<double> weights;
    bool in_points = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_comment(line);
        if (line.empty()) continue;
        if (in_points) {
            std::istringstream row(line);
            double x, y, w;
            if (!(row >> x >> y >> w))
                raise(ErrorCode::ConfigError,
                      "geometry line " + std::to_string(lineno) + ": expected \"x y w\"");
            points.emplace_back(x, y);
            weights.push_back(w);
            continue;
        }
        if (line == "points") {
            in_points = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::ConfigError, "geometry line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip_comment(line.substr(0, eq));
        const std::string value = strip_comment(line.substr(eq + 1));
        if (key == "knots_u")
            ku = KnotVector::parse(value);
        else if (key == "knots_v")
            kv = KnotVector::parse(value);
        else if (key == "jac_floor")
            jac_floor = std::stod(value);
        else
            raise(ErrorCode::ConfigError, "unknown geometry key '" + key + "'");
    }
    if (!ku) raise(ErrorCode::ConfigError, "geometry is missing knots_u");
    if (!kv) raise(ErrorCode::ConfigError, "geometry is missing knots_v");
    return GeometryMap(TensorSpace(std::move(*ku), std::move(*kv)), std::move(points), std::move(weights),
                       jac_floor);
}

GeometryMap GeometryMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open geometry file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

GeometryMap GeometryMap::from_name(const std::string& name_or_path) {
    if (auto text = builtin_text(name_or_path)) return parse(*text);
    return load(name_or_path);
}

TensorBasisEval GeometryMap::nurbs_basis(const Vec2& xhat, int max_deriv,
                                         const std::optional<Vec2>& inside) const {
    const Vec2 ref = inside.value_or(xhat);
    const std::size_t s1 = space_.direction(0).find_span(std::clamp(ref[0], 0.0, 1.0));
    const std::size_t s2 = space_.direction(1).find_span(std::clamp(ref[1], 0.0, 1.0));
    TensorBasisEval b = space_.eval_on_element(space_.element_index(s1, s2), xhat, max_deriv);

    double W = 0.0;
    Vec2 dW = Vec2::Zero();
    Mat2 d2W = Mat2::Zero();
    for (std::size_t a = 0; a < b.indices.size(); ++a) {
        const double w = weights_[b.indices[a]];
        b.value[a] *= w;
        W += b.value[a];
        if (max_deriv >= 1) {
            b.grad[a] *= w;
            dW += b.grad[a];
        }
        if (max_deriv >= 2) {
            b.hess[a] *= w;
            d2W += b.hess[a];
        }
    }
    for (std::size_t a = 0; a < b.indices.size(); ++a) {
        const double N = b.value[a] / W;
        b.value[a] = N;
        if (max_deriv >= 1) {
            const Vec2 dN = (b.grad[a] - N * dW) / W;
            if (max_deriv >= 2)
                b.hess[a] = (b.hess[a] - dN * dW.transpose() - dW * dN.transpose() - N * d2W) / W;
            b.grad[a] = dN;
        }
    }
    return b;
}

GeometryPoint GeometryMap::eval(const Vec2& xhat, bool second_derivs,
                                const std::optional<Vec2>& inside) const {
    if (!(xhat[0] >= 0.0 && xhat[0] <= 1.0 && xhat[1] >= 0.0 && xhat[1] <= 1.0))
        raise(ErrorCode::OutOfDomain, "parametric point outside [0,1]^2");
    const TensorBasisEval b = nurbs_basis(xhat, second_derivs ? 2 : 1, inside);
    GeometryPoint g;
    g.x.setZero();
    g.jac.setZero();
    g.hess = {Mat2::Zero(), Mat2::Zero()};
    for (std::size_t a = 0; a < b.indices.size(); ++a) {
        const Vec2& P = points_[b.indices[a]];
        g.x += P * b.value[a];
        g.jac += P * b.grad[a].transpose();
        if (second_derivs) {
            g.hess[0] += P[0] * b.hess[a];
            g.hess[1] += P[1] * b.hess[a];
        }
    }
    g.det = g.jac.determinant();
    if (!(std::abs(g.det) >= jac_floor_)) {
        std::ostringstream os;
        os << "|det J| = " << std::abs(g.det) << " below floor " << jac_floor_ << " at (" << xhat[0]
           << ", " << xhat[1] << ")";
        raise(ErrorCode::DegenerateJacobian, os.str());
    }
    return g;
}

// ---------------------------------------------------------------------------
// PhysicalMesh

const char* to_string(Side side) {
    switch (side) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Bottom: return "bottom";
        case Side::Top: return "top";
    }
    return "?";
}

namespace {

double spectral_norm(const Mat2& J) {
    const Mat2 JtJ = J.transpose() * J;
    const double tr = JtJ.trace(), det = JtJ.determinant();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return std::sqrt(0.5 * tr + disc);
}

void check_breakpoints_nested(const std::vector<double>& geom, const std::vector<double>& sol, int dir) {
    for (double z : geom) {
        const bool found = std::any_of(sol.begin(), sol.end(), [z](double s) { return std::abs(s - z) < 1e-14; });
        if (!found)
            raise(ErrorCode::IncompatibleGeometry,
                  "geometry breakpoint " + std::to_string(z) + " in direction " + std::to_string(dir + 1) +
                      " is not a breakpoint of the solution space");
    }
}

}  // namespace

Vec2 PhysicalMesh::parametric_normal(Side side) {
    switch (side) {
        case Side::Left: return {-1.0, 0.0};
        case Side::Right: return {1.0, 0.0};
        case Side::Bottom: return {0.0, -1.0};
        case Side::Top: return {0.0, 1.0};
    }
    return {0.0, 0.0};
}

std::pair<Vec2, double> PhysicalMesh::normal_and_measure(Side side, const GeometryPoint& g) {
    const int along = (side == Side::Left || side == Side::Right) ? 1 : 0;
    const Vec2 t = g.jac.col(along);
    const double len = t.norm();
    Vec2 n(t[1] / len, -t[0] / len);
    const Vec2 reference = g.jac.inverse().transpose() * parametric_normal(side);
    if (n.dot(reference) < 0.0) n = -n;
    return {n, len};
}

PhysicalMesh::PhysicalMesh(std::shared_ptr<const GeometryMap> geometry, const TensorSpace& space)
    : geometry_(std::move(geometry)) {
    for (int j = 0; j < 2; ++j)
        check_breakpoints_nested(geometry_->breakpoints(j), space.direction(j).mesh().breakpoints, j);

    const auto& bp1 = space.direction(0).mesh().breakpoints;
    const auto& bp2 = space.direction(1).mesh().breakpoints;
    const std::size_t n1 = space.direction(0).num_spans(), n2 = space.direction(1).num_spans();
    const int q = std::max(space.direction(0).degree(), space.direction(1).degree()) + 2;
    const QuadratureRule rule = gauss_rule(q);

    elements_.reserve(n1 * n2);
    for (std::size_t s2 = 0; s2 < n2; ++s2) {
        for (std::size_t s1 = 0; s1 < n1; ++s1) {
            MeshElement el;
            el.index = space.element_index(s1, s2);
            el.span1 = s1;
            el.span2 = s2;
            el.lower = Vec2(bp1[s1], bp2[s2]);
            el.upper = Vec2(bp1[s1 + 1], bp2[s2 + 1]);
            const Vec2 size = el.upper - el.lower;
            el.h_Q = size.norm();
            h_param_ = std::max({h_param_, size[0], size[1]});
            const Vec2 c = el.center();
            double gmax = 0.0;
            for (int b = 0; b < q; ++b)
                for (int a = 0; a < q; ++a) {
                    const Vec2 xh = el.lower + Vec2(rule.points[a] * size[0], rule.points[b] * size[1]);
                    gmax = std::max(gmax, spectral_norm(geometry_->eval(xh, false, c).jac));
                }
            for (int corner = 0; corner < 4; ++corner) {
                const Vec2 xh((corner & 1) ? el.upper[0] : el.lower[0], (corner & 2) ? el.upper[1] : el.lower[1]);
                gmax = std::max(gmax, spectral_norm(geometry_->eval(xh, false, c).jac));
            }
            el.grad_norm = gmax;
            el.h_K = gmax * el.h_Q;
            h_ = std::max(h_, el.h_K);
            elements_.push_back(el);
        }
    }

    auto add_edge = [&](Side side, std::size_t owner, double s0, double s1) {
        BoundaryEdge e{edges_.size(), side, owner, s0, s1, 0.0};
        const QuadratureRule r5 = gauss_rule(5);
        const Vec2 c = elements_[owner].center();
        double len = 0.0;
        for (int a = 0; a < 5; ++a) {
            const GeometryPoint g = geometry_->eval(edge_point(e, r5.points[a]), false, c);
            len += r5.weights[a] * (s1 - s0) * normal_and_measure(side, g).second;
        }
        e.h_E = len;
        edges_.push_back(e);
    };
    for (std::size_t s2 = 0; s2 < n2; ++s2) add_edge(Side::Left, space.element_index(0, s2), bp2[s2], bp2[s2 + 1]);
    for (std::size_t s2 = 0; s2 < n2; ++s2)
        add_edge(Side::Right, space.element_index(n1 - 1, s2), bp2[s2], bp2[s2 + 1]);
    for (std::size_t s1 = 0; s1 < n1; ++s1) add_edge(Side::Bottom, space.element_index(s1, 0), bp1[s1], bp1[s1 + 1]);
    for (std::size_t s1 = 0; s1 < n1; ++s1)
        add_edge(Side::Top, space.element_index(s1, n2 - 1), bp1[s1], bp1[s1 + 1]);

    for (const BoundaryEdge& e : edges_) c_mesh_ = std::max(c_mesh_, elements_[e.owner].h_K / e.h_E);
}

Vec2 PhysicalMesh::edge_point(const BoundaryEdge& edge, double s) const {
    const double t = edge.s0 + s * (edge.s1 - edge.s0);
    switch (edge.side) {
        case Side::Left: return {0.0, t};
        case Side::Right: return {1.0, t};
        case Side::Bottom: return {t, 0.0};
        case Side::Top: return {t, 1.0};
    }
    return {0.0, 0.0};
}

Vec2 PhysicalMesh::outward_normal(const BoundaryEdge& edge, double s) const {
    const GeometryPoint g = geometry_->eval(edge_point(edge, s), false, elements_[edge.owner].center());
    return normal_and_measure(edge.side, g).first;
}

}  // namespace niga
