#pragma once

// Univariate B-spline machinery on k-open knot vectors over [0,1].

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace niga {

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 4;

// Distinct breakpoints of a knot vector together with their multiplicities.
struct BreakpointMesh1D {
    std::vector<double> breakpoints;  // zeta_0 < ... < zeta_N
    std::vector<int> multiplicities;
    std::vector<double> widths;  // h_n = zeta_n - zeta_{n-1}, n = 1..N

    std::size_t num_spans() const { return widths.size(); }
};

// Values (and derivatives) of the k+1 basis functions that may be nonzero at
// a point. derivs[d][a] is the d-th derivative of basis function first + a.
struct BasisEvaluation {
    std::size_t span = 0;   // index of the breakpoint span, 0-based
    std::size_t first = 0;  // global index of the first nonzero function
    std::vector<std::vector<double>> derivs;

    const std::vector<double>& values() const { return derivs[0]; }
};

class KnotVector {
public:
    // Validates that knots form a k-open, nondecreasing sequence from 0 to 1
    // with every multiplicity at most k+1. Throws niga::Error.
    KnotVector(std::vector<double> knots, int degree);

    // k-open knots with `spans` equal spans and every interior breakpoint of
    // multiplicity `interior_multiplicity` (1 gives C^{k-1}).
    static KnotVector uniform(int degree, std::size_t spans, int interior_multiplicity = 1);

    // Parses "k; xi_1 xi_2 ... xi_r".
    static KnotVector parse(std::string_view text);

    int degree() const { return degree_; }
    const std::vector<double>& knots() const { return knots_; }
    const BreakpointMesh1D& mesh() const { return mesh_; }

    // Number of basis functions, r - k - 1.
    std::size_t dimension() const { return knots_.size() - static_cast<std::size_t>(degree_) - 1; }

    std::size_t num_spans() const { return mesh_.num_spans(); }

    // Local quasi-uniformity constant: max ratio of adjacent span widths.
    double theta() const { return theta_; }
    bool theta_warning() const { return theta_ > 10.0; }

    // Number of continuous derivatives at interior breakpoint n, 1 <= n <= N-1.
    int continuity_at(std::size_t n) const;

    // Knot index s with knots[s] <= x < knots[s+1] (x = 1 maps to the last
    // nonzero knot interval).
    std::size_t find_knot_span(double x) const;

    // Breakpoint span (0-based) containing x, using the same half-open rule.
    std::size_t find_span(double x) const;

    // Cox-de Boor evaluation of the k+1 nonzero functions and their first
    // max_deriv derivatives.
    BasisEvaluation eval(double x, int max_deriv = 1) const;

    // Evaluation restricted to span `span` at x (x is clamped to that span's
    // closure, used for one-sided limits at breakpoints).
    BasisEvaluation eval_on_span(std::size_t span, double x, int max_deriv = 1) const;

    // Global indices of the functions supported on a breakpoint span.
    std::size_t first_function_on_span(std::size_t span) const;

    // Greville abscissae, one per basis function.
    std::vector<double> greville() const;

    std::string to_string() const;

private:
    std::vector<double> knots_;
    int degree_;
    BreakpointMesh1D mesh_;
    std::vector<std::size_t> span_knot_index_;  // last knot index of zeta_{n}
    double theta_ = 1.0;
};

}  // namespace niga
