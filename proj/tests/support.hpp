#pragma once

#include "nitsche_iga/error.hpp"
#include "nitsche_iga/harness.hpp"
#include "nitsche_iga/quadrature.hpp"
#include "oracles.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace testing {

inline std::string data_path(const std::string& rel) { return std::string(NIGA_DATA_DIR) + "/" + rel; }

// Knot vectors listed in data/knots/shipped.txt.
inline std::vector<niga::KnotVector> shipped_knot_vectors() {
    std::ifstream in(data_path("knots/shipped.txt"));
    std::vector<niga::KnotVector> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(niga::KnotVector::parse(line));
    }
    return out;
}

inline std::unique_ptr<niga::Discretization> make_disc(const std::string& geometry, int degree, std::size_t spans,
                                                      int quadrature = 0, int threads = 1) {
    auto geo = std::make_shared<const niga::GeometryMap>(niga::GeometryMap::from_name(geometry));
    niga::TensorSpace space(niga::KnotVector::uniform(degree, spans), niga::KnotVector::uniform(degree, spans));
    return std::make_unique<niga::Discretization>(geo, std::move(space),
                                                  niga::DiscretizationOptions{quadrature, threads});
}

inline oracle::Coefficients coefficients_of(const niga::Problem& p) {
    oracle::Coefficients co;
    co.mu = [p](double x, double y, double t) {
        const niga::Mat2 m = p.mu(niga::Vec2(x, y), t);
        return std::array<double, 4>{m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
    };
    co.b = [p](double x, double y, double t) {
        const niga::Vec2 v = p.b(niga::Vec2(x, y), t);
        return std::array<double, 2>{v[0], v[1]};
    };
    co.c = [p](double x, double y, double t) { return p.c(niga::Vec2(x, y), t); };
    co.f = [p](double x, double y, double t) { return p.f(niga::Vec2(x, y), t); };
    co.g = [p](double x, double y, double t) { return p.g(niga::Vec2(x, y), t); };
    return co;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const oracle::Dense& b) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    return m;
}

inline oracle::Dense to_oracle(const Eigen::MatrixXd& a) {
    oracle::Dense d = oracle::zeros(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
    return d;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testing
