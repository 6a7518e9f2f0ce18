#include "nitsche_iga/nitsche_iga.h"

#include "nitsche_iga/error.hpp"
#include "nitsche_iga/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

struct niga_knots {
    niga::KnotVector kv;
};

struct niga_config {
    niga::RunConfig cfg;
};

struct niga_discretization {
    niga::LevelSetup setup;
};

struct niga_matrix {
    niga::SparseMatrix m;
};

struct niga_report {
    niga::StudyResult result;
};

namespace {

thread_local std::string g_last_error;

niga_status status_of(niga::ErrorCode code) {
    using niga::ErrorCode;
    switch (code) {
        case ErrorCode::NotNondecreasing: return NIGA_ERR_NOT_NONDECREASING;
        case ErrorCode::NotOpen: return NIGA_ERR_NOT_OPEN;
        case ErrorCode::ExcessMultiplicity: return NIGA_ERR_EXCESS_MULTIPLICITY;
        case ErrorCode::UnsupportedDegree: return NIGA_ERR_UNSUPPORTED_DEGREE;
        case ErrorCode::OutOfDomain: return NIGA_ERR_OUT_OF_DOMAIN;
        case ErrorCode::IndexOutOfRange: return NIGA_ERR_INDEX_OUT_OF_RANGE;
        case ErrorCode::UnsupportedOrder: return NIGA_ERR_UNSUPPORTED_ORDER;
        case ErrorCode::DegenerateJacobian: return NIGA_ERR_DEGENERATE_JACOBIAN;
        case ErrorCode::IncompatibleGeometry: return NIGA_ERR_INCOMPATIBLE_GEOMETRY;
        case ErrorCode::UnknownCase: return NIGA_ERR_UNKNOWN_CASE;
        case ErrorCode::SingularGram: return NIGA_ERR_SINGULAR_GRAM;
        case ErrorCode::SingularMatrix: return NIGA_ERR_SINGULAR_MATRIX;
        case ErrorCode::ConvergenceFailure: return NIGA_ERR_CONVERGENCE_FAILURE;
        case ErrorCode::NotSPD: return NIGA_ERR_NOT_SPD;
        case ErrorCode::InsufficientLevels: return NIGA_ERR_INSUFFICIENT_LEVELS;
        case ErrorCode::ConfigError: return NIGA_ERR_CONFIG;
        case ErrorCode::IoError: return NIGA_ERR_IO;
        case ErrorCode::InvalidArgument: return NIGA_ERR_INVALID_ARGUMENT;
    }
    return NIGA_ERR_INTERNAL;
}

niga_status fail(niga_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class Fn>
niga_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return NIGA_OK;
    } catch (const niga::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(NIGA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NIGA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NIGA_ERR_INTERNAL, "unknown exception");
    }
}

#define NIGA_REQUIRE(cond, what) \
    if (!(cond)) return fail(NIGA_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* niga_status_string(niga_status status) {
    switch (status) {
        case NIGA_OK: return "ok";
        case NIGA_ERR_NOT_NONDECREASING: return "NotNondecreasing";
        case NIGA_ERR_NOT_OPEN: return "NotOpen";
        case NIGA_ERR_EXCESS_MULTIPLICITY: return "ExcessMultiplicity";
        case NIGA_ERR_UNSUPPORTED_DEGREE: return "UnsupportedDegree";
        case NIGA_ERR_OUT_OF_DOMAIN: return "OutOfDomain";
        case NIGA_ERR_INDEX_OUT_OF_RANGE: return "IndexOutOfRange";
        case NIGA_ERR_UNSUPPORTED_ORDER: return "UnsupportedOrder";
        case NIGA_ERR_DEGENERATE_JACOBIAN: return "DegenerateJacobian";
        case NIGA_ERR_INCOMPATIBLE_GEOMETRY: return "IncompatibleGeometry";
        case NIGA_ERR_UNKNOWN_CASE: return "UnknownCase";
        case NIGA_ERR_SINGULAR_GRAM: return "SingularGram";
        case NIGA_ERR_SINGULAR_MATRIX: return "SingularMatrix";
        case NIGA_ERR_CONVERGENCE_FAILURE: return "ConvergenceFailure";
        case NIGA_ERR_NOT_SPD: return "NotSPD";
        case NIGA_ERR_INSUFFICIENT_LEVELS: return "InsufficientLevels";
        case NIGA_ERR_CONFIG: return "ConfigError";
        case NIGA_ERR_IO: return "IoError";
        case NIGA_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case NIGA_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* niga_last_error(void) { return g_last_error.c_str(); }

int niga_exit_code(niga_status status) {
    switch (status) {
        case NIGA_OK: return 0;
        case NIGA_ERR_NOT_NONDECREASING:
        case NIGA_ERR_NOT_OPEN:
        case NIGA_ERR_EXCESS_MULTIPLICITY:
        case NIGA_ERR_UNSUPPORTED_DEGREE:
        case NIGA_ERR_UNSUPPORTED_ORDER:
        case NIGA_ERR_INCOMPATIBLE_GEOMETRY:
        case NIGA_ERR_UNKNOWN_CASE:
        case NIGA_ERR_INSUFFICIENT_LEVELS:
        case NIGA_ERR_CONFIG:
        case NIGA_ERR_IO:
        case NIGA_ERR_INVALID_ARGUMENT: return 2;
        default: return 3;
    }
}

const char* niga_version(void) { return "1.0.0"; }

niga_status niga_knots_create(const double* knots, size_t count, int degree, niga_knots** out) {
    NIGA_REQUIRE(out && (knots || count == 0), "null argument");
    return guarded([&] { *out = new niga_knots{niga::KnotVector(std::vector<double>(knots, knots + count), degree)}; });
}

niga_status niga_knots_uniform(int degree, size_t spans, int interior_multiplicity, niga_knots** out) {
    NIGA_REQUIRE(out, "null argument");
    return guarded([&] { *out = new niga_knots{niga::KnotVector::uniform(degree, spans, interior_multiplicity)}; });
}

niga_status niga_knots_parse(const char* text, niga_knots** out) {
    NIGA_REQUIRE(text && out, "null argument");
    return guarded([&] { *out = new niga_knots{niga::KnotVector::parse(text)}; });
}

void niga_knots_destroy(niga_knots* knots) { delete knots; }

size_t niga_knots_dimension(const niga_knots* knots) { return knots ? knots->kv.dimension() : 0; }

double niga_knots_theta(const niga_knots* knots) {
    return knots ? knots->kv.theta() : std::numeric_limits<double>::quiet_NaN();
}

niga_status niga_knots_eval(const niga_knots* knots, double x, int deriv, double* values, size_t* first) {
    NIGA_REQUIRE(knots && values, "null argument");
    NIGA_REQUIRE(deriv >= 0, "derivative order must be nonnegative");
    return guarded([&] {
        const niga::BasisEvaluation b = knots->kv.eval(x, deriv);
        std::copy(b.derivs[static_cast<std::size_t>(deriv)].begin(), b.derivs[static_cast<std::size_t>(deriv)].end(),
                  values);
        if (first) *first = b.first;
    });
}

niga_status niga_config_load(const char* path, niga_config** out) {
    NIGA_REQUIRE(path && out, "null argument");
    return guarded([&] { *out = new niga_config{niga::RunConfig::load(path)}; });
}

niga_status niga_config_parse(const char* text, niga_config** out) {
    NIGA_REQUIRE(text && out, "null argument");
    return guarded([&] { *out = new niga_config{niga::RunConfig::parse(text)}; });
}

niga_status niga_config_set(niga_config* config, const char* key, const char* value) {
    NIGA_REQUIRE(config && key && value, "null argument");
    return guarded([&] { config->cfg.set(key, value); });
}

niga_status niga_config_validate(const niga_config* config) {
    NIGA_REQUIRE(config, "null argument");
    return guarded([&] { config->cfg.validate(); });
}

void niga_config_destroy(niga_config* config) { delete config; }

niga_status niga_discretization_create(const niga_config* config, size_t spans, int threads,
                                       niga_discretization** out) {
    NIGA_REQUIRE(config && out, "null argument");
    NIGA_REQUIRE(spans >= 1, "spans must be positive");
    return guarded([&] {
        *out = new niga_discretization{niga::setup_level(config->cfg, spans, std::max(1, threads))};
    });
}

void niga_discretization_destroy(niga_discretization* disc) { delete disc; }

size_t niga_discretization_dof(const niga_discretization* disc) {
    return disc ? disc->setup.disc->dimension() : 0;
}

double niga_discretization_penalty_floor(const niga_discretization* disc) {
    return disc ? disc->setup.floor.floor : std::numeric_limits<double>::quiet_NaN();
}

double niga_discretization_trace_constant(const niga_discretization* disc) {
    return disc ? disc->setup.floor.trace.flux : std::numeric_limits<double>::quiet_NaN();
}

double niga_discretization_epsilon(const niga_discretization* disc) {
    return disc ? disc->setup.epsilon : std::numeric_limits<double>::quiet_NaN();
}

niga_status niga_assemble_mass(const niga_discretization* disc, niga_matrix** out) {
    NIGA_REQUIRE(disc && out, "null argument");
    return guarded([&] { *out = new niga_matrix{niga::assemble_mass(*disc->setup.disc)}; });
}

niga_status niga_assemble_stiffness(const niga_discretization* disc, double epsilon, double t, niga_matrix** out) {
    NIGA_REQUIRE(disc && out, "null argument");
    return guarded([&] {
        *out = new niga_matrix{niga::assemble_stiffness(*disc->setup.disc, disc->setup.mc.problem, epsilon, t)};
    });
}

void niga_matrix_destroy(niga_matrix* matrix) { delete matrix; }

size_t niga_matrix_rows(const niga_matrix* matrix) { return matrix ? matrix->m.rows() : 0; }

size_t niga_matrix_nnz(const niga_matrix* matrix) { return matrix ? matrix->m.nnz() : 0; }

niga_status niga_matrix_copy(const niga_matrix* matrix, size_t* row_ptr, size_t* cols, double* values) {
    NIGA_REQUIRE(matrix, "null argument");
    const auto& m = matrix->m;
    if (row_ptr) std::copy(m.row_ptr().begin(), m.row_ptr().end(), row_ptr);
    if (cols) std::copy(m.cols().begin(), m.cols().end(), cols);
    if (values) std::copy(m.values().begin(), m.values().end(), values);
    return NIGA_OK;
}

niga_status niga_assemble_load(const niga_discretization* disc, double epsilon, double t, double* out) {
    NIGA_REQUIRE(disc && out, "null argument");
    return guarded([&] {
        const auto f = niga::assemble_load(*disc->setup.disc, disc->setup.mc.problem, epsilon, t);
        std::copy(f.begin(), f.end(), out);
    });
}

niga_status niga_coercivity_audit(const niga_discretization* disc, double epsilon, double t, double* alpha_hat) {
    NIGA_REQUIRE(disc && alpha_hat, "null argument");
    return guarded([&] {
        *alpha_hat = niga::coercivity_audit(*disc->setup.disc, disc->setup.mc.problem, epsilon, t).alpha_hat;
    });
}

niga_status niga_run(const char* command, const niga_config* config, const char* out_dir, int threads,
                     niga_report** out) {
    NIGA_REQUIRE(command && config && out, "null argument");
    return guarded([&] {
        niga::RunConfig cfg = config->cfg;
        if (out_dir) cfg.out_dir = out_dir;
        if (threads > 0) cfg.threads = threads;
        *out = new niga_report{niga::run_command(command, cfg)};
    });
}

const char* niga_report_text(const niga_report* report) { return report ? report->result.summary.c_str() : ""; }

double niga_report_slope(const niga_report* report) {
    if (!report || !report->result.rates) return std::numeric_limits<double>::quiet_NaN();
    return report->result.rates->slope;
}

size_t niga_report_levels(const niga_report* report) { return report ? report->result.levels.size() : 0; }

niga_status niga_report_level(const niga_report* report, size_t index, double* h, double* err_l2h1,
                              double* err_l2l2, double* err_bdry) {
    NIGA_REQUIRE(report, "null argument");
    if (index >= report->result.levels.size()) return fail(NIGA_ERR_INDEX_OUT_OF_RANGE, "level index out of range");
    const auto& r = report->result.levels[index];
    if (h) *h = r.h;
    if (err_l2h1) *err_l2h1 = r.err_l2h1;
    if (err_l2l2) *err_l2l2 = r.err_l2l2;
    if (err_bdry) *err_bdry = r.err_bdry;
    return NIGA_OK;
}

void niga_report_destroy(niga_report* report) { delete report; }

}  // extern "C"
