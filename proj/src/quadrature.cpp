#include "nitsche_iga/quadrature.hpp"

#include "nitsche_iga/error.hpp"

#include <cmath>
#include <numbers>

namespace niga {

QuadratureRule gauss_rule(int q) {
    if (q < 1 || q > kMaxQuadratureOrder)
        raise(ErrorCode::UnsupportedOrder,
              "quadrature order " + std::to_string(q) + " outside [1, 16]");
    QuadratureRule rule;
    rule.points.resize(q);
    rule.weights.resize(q);
    // Newton iteration on P_q from the Chebyshev-like initial guess; roots are
    // symmetric so only half are computed.
    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= q; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            const double p = q == 1 ? x : p1;
            const double pm1 = q == 1 ? 1.0 : p0;
            dp = q * (x * p - pm1) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-17) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int n = 2; n <= q; ++n) {
            const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
            p0 = p1;
            p1 = p2;
        }
        const double pm1 = q == 1 ? 1.0 : p0;
        const double p = q == 1 ? x : p1;
        dp = q * (x * p - pm1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; x is the descending root
        rule.points[i] = 0.5 * (1.0 - x);
        rule.points[q - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[q - 1 - i] = 0.5 * w;
    }
    if (q % 2 == 1) rule.points[q / 2] = 0.5;
    return rule;
}

QuadratureRule gauss_rule(int q, double a, double b) {
    QuadratureRule rule = gauss_rule(q);
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        rule.points[i] = a + (b - a) * rule.points[i];
        rule.weights[i] *= (b - a);
    }
    return rule;
}

std::vector<PhysicalQuadPoint> element_rule(const PhysicalMesh& mesh, const MeshElement& element, int q) {
    const QuadratureRule ru = gauss_rule(q, element.lower[0], element.upper[0]);
    const QuadratureRule rv = gauss_rule(q, element.lower[1], element.upper[1]);
    const Vec2 center = element.center();
    std::vector<PhysicalQuadPoint> out;
    out.reserve(static_cast<std::size_t>(q * q));
    for (int b = 0; b < q; ++b) {
        for (int a = 0; a < q; ++a) {
            const Vec2 xhat(ru.points[a], rv.points[b]);
            const GeometryPoint g = mesh.geometry().eval(xhat, false, center);
            out.push_back({xhat, g.x, ru.weights[a] * rv.weights[b] * std::abs(g.det)});
        }
    }
    return out;
}

std::vector<PhysicalQuadPoint> edge_rule(const PhysicalMesh& mesh, const BoundaryEdge& edge, int q) {
    const QuadratureRule r = gauss_rule(q);
    const Vec2 center = mesh.elements()[edge.owner].center();
    std::vector<PhysicalQuadPoint> out;
    out.reserve(static_cast<std::size_t>(q));
    const double len = edge.s1 - edge.s0;
    for (int a = 0; a < q; ++a) {
        const Vec2 xhat = mesh.edge_point(edge, r.points[a]);
        const GeometryPoint g = mesh.geometry().eval(xhat, false, center);
        const auto [normal, measure] = PhysicalMesh::normal_and_measure(edge.side, g);
        (void)normal;
        out.push_back({xhat, g.x, r.weights[a] * len * measure});
    }
    return out;
}

}  // namespace niga
