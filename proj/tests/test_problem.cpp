#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <numbers>

using namespace niga;

namespace {
constexpr double pi = std::numbers::pi;

// Closed form of the source of the transient reference case.
double reference_source(double x, double y, double t) {
    const double sx = std::sin(pi * x), sy = std::sin(pi * y), cx = std::cos(pi * x), cy = std::cos(pi * y);
    return ((x + y + 2 * t - 2 * t * t + 2 * pi * pi) * sx * sy + (pi - 2 * pi * t) * cx * sy +
            (pi - 2 * pi * t) * sx * cy) *
           std::exp((x + y - 1) * t);
}
}  // namespace

TEST_CASE("builtin transient case reproduces the closed-form source") {
    const ManufacturedCase mc = builtin_case("paper_sec8");
    double worst = 0.0;
    for (double t : {0.0, 0.7, 2.0, 4.0})
        for (int i = 0; i <= 10; ++i)
            for (int j = 0; j <= 10; ++j) {
                const Vec2 x(i / 10.0, j / 10.0);
                const double ref = reference_source(x[0], x[1], t);
                worst = std::max(worst, std::abs(mc.problem.f(x, t) - ref) / std::max(1.0, std::abs(ref)));
            }
    CHECK(worst <= 1e-13);
    CHECK(mc.problem.T == 4.0);
    CHECK(mc.problem.u0(Vec2(0.5, 0.5)) == doctest::Approx(1.0));
    CHECK(mc.u(Vec2(0.5, 0.5), 0.0) == doctest::Approx(1.0));
    CHECK(mc.problem.g(Vec2(0.0, 0.3), 1.0) == 0.0);
}

TEST_CASE("every builtin case is consistent with its exact solution") {
    for (const std::string& name : builtin_case_names())
        for (double s : {1.0, 2.0}) {
            const ManufacturedCase mc = builtin_case(name, CaseOptions{s, s});
            double worst = 0.0;
            for (double t : {0.0, 0.5, 1.0})
                for (int i = 1; i < 8; ++i)
                    for (int j = 1; j < 8; ++j)
                        worst = std::max(worst, std::abs(consistency_residual(mc, Vec2(i / 8.0, j / 8.0), t)));
            CHECK_MESSAGE(worst < 1e-8, name);
        }
}

TEST_CASE("unknown case names are rejected") {
    try {
        builtin_case("nonexistent");
        FAIL("expected UnknownCase");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownCase);
        CHECK(is_config_error(e.code()));
    }
}

TEST_CASE("inflow indicator is strict") {
    const Problem p = builtin_case("paper_sec8").problem;
    const Vec2 x(0.0, 0.5);
    CHECK(inflow_indicator(p, x, Vec2(-1, 0), 0.0));
    CHECK_FALSE(inflow_indicator(p, x, Vec2(1, 0), 0.0));
    // b = (1,1) is tangent to a boundary with normal (1,-1)/sqrt 2
    CHECK_FALSE(inflow_indicator(p, x, Vec2(1, -1).normalized(), 0.0));
}

TEST_CASE("coefficient audit passes for the builtin cases") {
    const GeometryMap square = GeometryMap::from_name("square");
    for (const std::string& name : builtin_case_names()) {
        const AssumptionAudit a = audit_coefficients(builtin_case(name).problem, square);
        CHECK_MESSAGE(a.ok(), name);
        CHECK(a.warnings.empty());
    }
    const AssumptionAudit a = audit_coefficients(builtin_case("steady_reaction").problem, square);
    CHECK(a.min_rayleigh >= builtin_case("steady_reaction").problem.mu0 - 1e-12);
}

TEST_CASE("coefficient audit warns without throwing") {
    Problem p = builtin_case("paper_sec8").problem;
    p.mu = [](const Vec2&, double) {
        Mat2 m;
        m << 1.0, 0.3, 0.0, 1.0;
        return m;
    };
    p.c = [](const Vec2&, double) { return -1.0; };
    AssumptionAudit a;
    CHECK_NOTHROW(a = audit_coefficients(p, GeometryMap::from_name("square")));
    CHECK_FALSE(a.mu_symmetric);
    CHECK_FALSE(a.reaction_ok);
    CHECK_FALSE(a.warnings.empty());
}

TEST_CASE("scaling options propagate into the bounds") {
    const Problem p = builtin_case("paper_sec8", CaseOptions{2.0, 3.0}).problem;
    CHECK(p.mu0 == 2.0);
    CHECK(p.mu1 == 2.0);
    CHECK(p.c0 == 3.0);
    CHECK(p.alpha() == 2.0);
    CHECK(p.mu(Vec2(0.2, 0.2), 0.0)(0, 0) == 2.0);
}
