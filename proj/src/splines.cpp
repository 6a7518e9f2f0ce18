#include "nitsche_iga/splines.hpp"

#include "nitsche_iga/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace niga {

namespace {

// 0/0 (and x/0) is replaced by zero in the recursion.
inline double safe_inverse(double d) { return d == 0.0 ? 0.0 : 1.0 / d; }

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < kMinDegree || degree_ > kMaxDegree)
        raise(ErrorCode::UnsupportedDegree,
              "degree " + std::to_string(degree_) + " outside [1, 4]");
    if (knots_.empty())
        raise(ErrorCode::NotOpen, "empty knot vector");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] >= knots_[i - 1]))
            raise(ErrorCode::NotNondecreasing,
                  "knot " + std::to_string(i) + " decreases");
    }
    if (knots_.front() != 0.0 || knots_.back() != 1.0)
        raise(ErrorCode::NotOpen, "knot vector must start at 0 and end at 1");

    for (std::size_t i = 0; i < knots_.size();) {
        std::size_t j = i;
        while (j < knots_.size() && knots_[j] == knots_[i]) ++j;
        mesh_.breakpoints.push_back(knots_[i]);
        mesh_.multiplicities.push_back(static_cast<int>(j - i));
        i = j;
    }
    const int k1 = degree_ + 1;
    if (mesh_.breakpoints.size() < 2 || mesh_.multiplicities.front() != k1 ||
        mesh_.multiplicities.back() != k1)
        raise(ErrorCode::NotOpen, "end knots must repeat exactly k+1 = " +
                                      std::to_string(k1) + " times");
    for (std::size_t n = 1; n + 1 < mesh_.multiplicities.size(); ++n) {
        if (mesh_.multiplicities[n] > k1)
            raise(ErrorCode::ExcessMultiplicity,
                  "interior breakpoint " + std::to_string(n) + " has multiplicity " +
                      std::to_string(mesh_.multiplicities[n]));
    }

    std::size_t pos = 0;
    for (std::size_t n = 0; n + 1 < mesh_.breakpoints.size(); ++n) {
        pos += static_cast<std::size_t>(mesh_.multiplicities[n]);
        span_knot_index_.push_back(pos - 1);
        mesh_.widths.push_back(mesh_.breakpoints[n + 1] - mesh_.breakpoints[n]);
    }

    theta_ = 1.0;
    for (std::size_t n = 0; n + 1 < mesh_.widths.size(); ++n) {
        const double r = mesh_.widths[n] / mesh_.widths[n + 1];
        theta_ = std::max({theta_, r, 1.0 / r});
    }
}

KnotVector KnotVector::uniform(int degree, std::size_t spans, int interior_multiplicity) {
    if (spans == 0) raise(ErrorCode::InvalidArgument, "uniform knots need at least one span");
    std::vector<double> knots(static_cast<std::size_t>(degree + 1), 0.0);
    for (std::size_t n = 1; n < spans; ++n) {
        const double z = static_cast<double>(n) / static_cast<double>(spans);
        for (int m = 0; m < interior_multiplicity; ++m) knots.push_back(z);
    }
    knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 1.0);
    return KnotVector(std::move(knots), degree);
}

KnotVector KnotVector::parse(std::string_view text) {
    const auto semi = text.find(';');
    if (semi == std::string_view::npos)
        raise(ErrorCode::ConfigError, "knot vector must read \"k; xi_1 ... xi_r\"");
    std::istringstream head{std::string(text.substr(0, semi))};
    int degree = 0;
    if (!(head >> degree))
        raise(ErrorCode::ConfigError, "cannot read degree in knot vector");
    std::istringstream body{std::string(text.substr(semi + 1))};
    std::vector<double> knots;
    std::string token;
    while (body >> token) {
        try {
            std::size_t used = 0;
            knots.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            raise(ErrorCode::ConfigError, "bad knot value '" + token + "'");
        }
    }
    return KnotVector(std::move(knots), degree);
}

int KnotVector::continuity_at(std::size_t n) const {
    const std::size_t N = mesh_.breakpoints.size() - 1;
    if (n < 1 || n + 1 > N)
        raise(ErrorCode::IndexOutOfRange,
              "interior breakpoint index " + std::to_string(n) + " not in [1, " +
                  std::to_string(N == 0 ? 0 : N - 1) + "]");
    return degree_ - mesh_.multiplicities[n];
}

std::size_t KnotVector::find_span(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        raise(ErrorCode::OutOfDomain, "evaluation point " + std::to_string(x) + " outside [0,1]");
    const auto& bp = mesh_.breakpoints;
    if (x >= 1.0) return num_spans() - 1;
    // first breakpoint strictly greater than x, minus one
    const auto it = std::upper_bound(bp.begin(), bp.end(), x);
    return static_cast<std::size_t>(it - bp.begin()) - 1;
}

std::size_t KnotVector::find_knot_span(double x) const {
    return span_knot_index_[find_span(x)];
}

std::size_t KnotVector::first_function_on_span(std::size_t span) const {
    return span_knot_index_.at(span) - static_cast<std::size_t>(degree_);
}

BasisEvaluation KnotVector::eval(double x, int max_deriv) const {
    return eval_on_span(find_span(x), x, max_deriv);
}

BasisEvaluation KnotVector::eval_on_span(std::size_t span, double x, int max_deriv) const {
    if (!(x >= 0.0 && x <= 1.0))
        raise(ErrorCode::OutOfDomain, "evaluation point " + std::to_string(x) + " outside [0,1]");
    if (span >= num_spans())
        raise(ErrorCode::IndexOutOfRange, "span " + std::to_string(span));
    if (max_deriv < 0 || max_deriv > degree_)
        raise(ErrorCode::InvalidArgument, "max_deriv must lie in [0, k]");

    const int p = degree_;
    const std::size_t s = span_knot_index_[span];
    const auto& U = knots_;

    // Triangular table of basis values (upper) and knot differences (lower),
    // followed by the derivative recurrence on the same table.
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[s + 1 - j];
        right[j] = U[s + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] * safe_inverse(ndu[j][r]);
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    BasisEvaluation out;
    out.span = span;
    out.first = s - static_cast<std::size_t>(p);
    out.derivs.assign(max_deriv + 1, std::vector<double>(p + 1, 0.0));
    for (int j = 0; j <= p; ++j) out.derivs[0][j] = ndu[j][p];

    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int d = 1; d <= max_deriv; ++d) {
            double acc = 0.0;
            const int rk = r - d, pk = p - d;
            if (r >= d) {
                a[s2][0] = a[s1][0] * safe_inverse(ndu[pk + 1][rk]);
                acc = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? d - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) * safe_inverse(ndu[pk + 1][rk + j]);
                acc += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][d] = -a[s1][d - 1] * safe_inverse(ndu[pk + 1][r]);
                acc += a[s2][d] * ndu[r][pk];
            }
            out.derivs[d][r] = acc;
            std::swap(s1, s2);
        }
    }
    int factor = p;
    for (int d = 1; d <= max_deriv; ++d) {
        for (double& v : out.derivs[d]) v *= factor;
        factor *= (p - d);
    }
    return out;
}

std::vector<double> KnotVector::greville() const {
    std::vector<double> g(dimension(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (int j = 1; j <= degree_; ++j) acc += knots_[i + j];
        g[i] = acc / degree_;
    }
    return g;
}

std::string KnotVector::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << degree_ << ";";
    for (double v : knots_) os << ' ' << v;
    return os.str();
}

}  // namespace niga
