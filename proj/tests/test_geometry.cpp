#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <numbers>

using namespace niga;

TEST_CASE("tensor space indexing, direction 1 fastest") {
    TensorSpace s(KnotVector::uniform(2, 3), KnotVector::uniform(1, 2));
    CHECK(s.dimension(0) == 5);
    CHECK(s.dimension(1) == 3);
    CHECK(s.dimension() == 15);
    CHECK(s.index(2, 1) == 7);
    CHECK(s.multi_index(7) == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(s.num_elements() == 6);
    CHECK(s.element_index(1, 1) == 4);
    const auto fns = s.element_functions(s.element_index(1, 1));
    REQUIRE(fns.size() == 6);
    CHECK(fns[0] == s.index(1, 1));
    CHECK(fns[1] == s.index(2, 1));
    CHECK(fns[3] == s.index(1, 2));
}

TEST_CASE("tensor evaluation is the product of the univariate factors") {
    const KnotVector u = KnotVector::uniform(2, 3), v = KnotVector::uniform(3, 2);
    TensorSpace s(u, v);
    const Vec2 xh(0.37, 0.81);
    const auto b = s.eval(xh, 2);
    double sum = 0.0;
    for (std::size_t a = 0; a < b.indices.size(); ++a) {
        const auto [i1, i2] = s.multi_index(b.indices[a]);
        const double bu = oracle::bspline(u.knots(), 2, i1, xh[0]), bv = oracle::bspline(v.knots(), 3, i2, xh[1]);
        CHECK(b.value[a] == doctest::Approx(bu * bv).epsilon(1e-14));
        CHECK(b.grad[a][0] == doctest::Approx(oracle::bspline(u.knots(), 2, i1, xh[0], 1) * bv).epsilon(1e-12));
        CHECK(b.hess[a](0, 1) ==
              doctest::Approx(oracle::bspline(u.knots(), 2, i1, xh[0], 1) * oracle::bspline(v.knots(), 3, i2, xh[1], 1))
                  .epsilon(1e-12));
        sum += b.value[a];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("square geometry is the identity map") {
    const GeometryMap g = GeometryMap::from_name("square");
    for (double x : {0.0, 0.3, 1.0})
        for (double y : {0.0, 0.55, 1.0}) {
            const GeometryPoint p = g.eval(Vec2(x, y), true);
            CHECK(p.x[0] == doctest::Approx(x));
            CHECK(p.x[1] == doctest::Approx(y));
            CHECK(p.det == doctest::Approx(1.0));
            CHECK(p.hess[0].norm() == doctest::Approx(0.0));
        }
}

TEST_CASE("quarter annulus maps exactly onto circular arcs") {
    const GeometryMap g = GeometryMap::from_name("quarter_annulus");
    for (int i = 0; i <= 20; ++i)
        for (double r : {0.0, 0.5, 1.0}) {
            const GeometryPoint p = g.eval(Vec2(r, i / 20.0), true);
            CHECK(p.x.norm() == doctest::Approx(1.0 + r).epsilon(1e-14));
            CHECK(p.det > 0.0);
        }
}

TEST_CASE("geometry derivatives agree with finite differences") {
    const GeometryMap g = GeometryMap::from_name("quarter_annulus");
    const Vec2 xh(0.3, 0.6);
    const double h = 1e-6;
    const GeometryPoint p = g.eval(xh, true);
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = h;
        const GeometryPoint pp = g.eval(xh + e, true), pm = g.eval(xh - e, true);
        for (int m = 0; m < 2; ++m) {
            CHECK(p.jac(m, j) == doctest::Approx((pp.x[m] - pm.x[m]) / (2 * h)).epsilon(1e-8));
            for (int l = 0; l < 2; ++l)
                CHECK(p.hess[m](l, j) == doctest::Approx((pp.jac(m, l) - pm.jac(m, l)) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("geometry file on disk matches the builtin") {
    const GeometryMap a = GeometryMap::load(testing::data_path("geometries/quarter_annulus.geo"));
    const GeometryMap b = GeometryMap::from_name("quarter_annulus");
    CHECK((a.eval(Vec2(0.2, 0.7)).x - b.eval(Vec2(0.2, 0.7)).x).norm() == 0.0);
}

TEST_CASE("malformed geometry input is rejected") {
    CHECK_THROWS_AS(GeometryMap::parse("knots_u = 1; 0 0 1 1\npoints\n0 0 1\n"), Error);
    CHECK_THROWS_AS(GeometryMap::from_name("no_such_geometry_file.geo"), Error);
    // control net whose Jacobian vanishes along y = 1/2
    const GeometryMap folded = GeometryMap::parse(
        "knots_u = 1; 0 0 1 1\nknots_v = 1; 0 0 1 1\npoints\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n");
    try {
        folded.eval(Vec2(0.3, 0.5));
        FAIL("expected a degenerate Jacobian");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateJacobian);
    }
}

TEST_CASE("physical mesh quantities on the square") {
    auto geo = std::make_shared<const GeometryMap>(GeometryMap::from_name("square"));
    TensorSpace s(KnotVector::uniform(2, 4), KnotVector::uniform(2, 4));
    PhysicalMesh mesh(geo, s);
    CHECK(mesh.elements().size() == 16);
    CHECK(mesh.edges().size() == 16);
    CHECK(mesh.h() == doctest::Approx(std::sqrt(2.0) / 4));
    CHECK(mesh.h_param() == doctest::Approx(0.25));
    CHECK(mesh.mesh_constant() == doctest::Approx(std::sqrt(2.0)));
    for (const BoundaryEdge& e : mesh.edges()) {
        CHECK(e.h_E == doctest::Approx(0.25));
        const Vec2 n = mesh.outward_normal(e, 0.5);
        CHECK((n - PhysicalMesh::parametric_normal(e.side)).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("annulus normals are radial and edge lengths are arc lengths") {
    auto geo = std::make_shared<const GeometryMap>(GeometryMap::from_name("quarter_annulus"));
    TensorSpace s(KnotVector::uniform(2, 4), KnotVector::uniform(2, 4));
    PhysicalMesh mesh(geo, s);
    double inner = 0.0, outer = 0.0;
    for (const BoundaryEdge& e : mesh.edges()) {
        const Vec2 x = geo->eval(mesh.edge_point(e, 0.3)).x;
        const Vec2 n = mesh.outward_normal(e, 0.3);
        if (e.side == Side::Left) {
            inner += e.h_E;
            CHECK((n + x.normalized()).norm() == doctest::Approx(0.0).epsilon(1e-12));
        } else if (e.side == Side::Right) {
            outer += e.h_E;
            CHECK((n - x.normalized()).norm() == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    CHECK(inner == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
    CHECK(outer == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("non-nested solution mesh is rejected") {
    auto geo = std::make_shared<const GeometryMap>(
        GeometryMap::load(testing::data_path("geometries/square_graded.geo")));
    TensorSpace odd(KnotVector::uniform(1, 3), KnotVector::uniform(1, 3));
    try {
        PhysicalMesh mesh(geo, odd);
        FAIL("expected IncompatibleGeometry");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompatibleGeometry);
    }
    TensorSpace even(KnotVector::uniform(1, 4), KnotVector::uniform(1, 4));
    PhysicalMesh mesh(geo, even);
    CHECK(mesh.elements().size() == 16);
}
