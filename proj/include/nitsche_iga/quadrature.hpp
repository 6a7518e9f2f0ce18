#pragma once

#include "nitsche_iga/geometry.hpp"

#include <vector>

namespace niga {

inline constexpr int kMaxQuadratureOrder = 16;

// Gauss-Legendre rule on [0,1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
    int order() const { return static_cast<int>(points.size()); }
};

// q-point Gauss-Legendre rule mapped to [0,1], 1 <= q <= 16.
QuadratureRule gauss_rule(int q);

// q-point rule on [a,b].
QuadratureRule gauss_rule(int q, double a, double b);

struct PhysicalQuadPoint {
    Vec2 xhat;      // parametric location
    Vec2 x;         // physical location
    double weight;  // reference weight times |det J|
};

// Tensor q x q rule on element `element` pulled through F.
std::vector<PhysicalQuadPoint> element_rule(const PhysicalMesh& mesh, const MeshElement& element, int q);

// q-point rule along a boundary edge; weights are scaled by the line element.
std::vector<PhysicalQuadPoint> edge_rule(const PhysicalMesh& mesh, const BoundaryEdge& edge, int q);

}  // namespace niga
