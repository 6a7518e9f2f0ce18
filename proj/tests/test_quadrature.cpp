#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <numbers>

using namespace niga;

TEST_CASE("Gauss rules integrate polynomials of degree 2q-1 exactly") {
    for (int q = 1; q <= kMaxQuadratureOrder; ++q) {
        const QuadratureRule r = gauss_rule(q);
        REQUIRE(r.order() == q);
        for (int m = 0; m <= 2 * q - 1; ++m) {
            double s = 0.0;
            for (int i = 0; i < q; ++i) s += r.weights[i] * std::pow(r.points[i], m);
            CHECK_MESSAGE(std::abs(s - 1.0 / (m + 1)) <= 1e-14, "q=" << q << " m=" << m);
        }
        if (q <= 4) {
            double s = 0.0;
            for (int i = 0; i < q; ++i) s += r.weights[i] * std::pow(r.points[i], 2 * q);
            CHECK(std::abs(s - 1.0 / (2 * q + 1)) > 1e-10);
        }
    }
}

TEST_CASE("Gauss nodes agree with the Golub-Welsch oracle") {
    for (int q : {1, 2, 5, 9, 16}) {
        const QuadratureRule r = gauss_rule(q);
        const auto [x, w] = oracle::gauss_legendre(q);
        for (int i = 0; i < q; ++i) {
            CHECK(r.points[i] == doctest::Approx(x[i]).epsilon(1e-13));
            CHECK(r.weights[i] == doctest::Approx(w[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("unsupported orders are rejected") {
    CHECK_THROWS_AS(gauss_rule(0), Error);
    CHECK_THROWS_AS(gauss_rule(17), Error);
    const QuadratureRule r = gauss_rule(3, 2.0, 5.0);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += r.weights[i] * r.points[i] * r.points[i];
    CHECK(s == doctest::Approx((125.0 - 8.0) / 3.0));
}

TEST_CASE("element rules integrate the area of the quarter annulus") {
    auto geo = std::make_shared<const GeometryMap>(GeometryMap::from_name("quarter_annulus"));
    for (std::size_t n : {1u, 2u, 5u}) {
        TensorSpace s(KnotVector::uniform(2, n), KnotVector::uniform(2, n));
        PhysicalMesh mesh(geo, s);
        double area = 0.0, moment = 0.0;
        for (const MeshElement& el : mesh.elements())
            for (const PhysicalQuadPoint& p : element_rule(mesh, el, 12)) {
                area += p.weight;
                moment += p.weight * p.x.squaredNorm();
            }
        CHECK(area == doctest::Approx(3.0 * std::numbers::pi / 4.0).epsilon(1e-12));
        // int r^2 dA = (pi/2) (2^4 - 1) / 4
        CHECK(moment == doctest::Approx(std::numbers::pi * 15.0 / 8.0).epsilon(1e-10));
    }
}

TEST_CASE("edge rules integrate the boundary length") {
    auto geo = std::make_shared<const GeometryMap>(GeometryMap::from_name("quarter_annulus"));
    TensorSpace s(KnotVector::uniform(1, 3), KnotVector::uniform(1, 3));
    PhysicalMesh mesh(geo, s);
    double perimeter = 0.0;
    for (const BoundaryEdge& e : mesh.edges())
        for (const PhysicalQuadPoint& p : edge_rule(mesh, e, 10)) perimeter += p.weight;
    CHECK(perimeter == doctest::Approx(1.5 * std::numbers::pi + 2.0).epsilon(1e-12));
}
