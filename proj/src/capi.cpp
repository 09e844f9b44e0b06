#include "fracroot.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "sweep.hpp"

using namespace fracroot;

struct fr_system {
    SystemF f;
};

struct fr_result {
    int n = 0;
    SweepResult data{RootRegistry(0.0), {}};
};

namespace {

thread_local std::string t_last_error;

fr_status fail(fr_status code, const char* what) {
    t_last_error = what;
    return code;
}

fr_status translate(const std::exception& e) {
    t_last_error = e.what();
    if (dynamic_cast<const SyntaxError*>(&e)) return FR_ERR_SYNTAX;
    if (dynamic_cast<const ArityError*>(&e)) return FR_ERR_ARITY;
    if (dynamic_cast<const UnsupportedExpr*>(&e)) return FR_ERR_UNSUPPORTED;
    if (dynamic_cast<const UnsupportedExponent*>(&e)) return FR_ERR_UNSUPPORTED;
    if (dynamic_cast<const EmptyGridError*>(&e)) return FR_ERR_EMPTY_GRID;
    if (dynamic_cast<const PreconditionError*>(&e)) return FR_ERR_PRECONDITION;
    if (dynamic_cast<const DomainError*>(&e)) return FR_ERR_DOMAIN;
    if (dynamic_cast<const DivByZero*>(&e)) return FR_ERR_DOMAIN;
    if (dynamic_cast<const PoleError*>(&e)) return FR_ERR_DOMAIN;
    if (dynamic_cast<const Error*>(&e)) return FR_ERR_INTERNAL;
    return FR_ERR_INTERNAL;
}

SolverKind to_kind(fr_method m) {
    switch (m) {
        case FR_METHOD_NEWTON: return SolverKind::ClassicNewton;
        case FR_METHOD_FRAC_NEWTON_RAPHSON: return SolverKind::FracNewtonRaphson;
        case FR_METHOD_FRAC_NEWTON: return SolverKind::FracNewton;
        case FR_METHOD_QUASI: return SolverKind::FracQuasiNewton;
        case FR_METHOD_PSEUDO: return SolverKind::FracPseudoNewton;
        case FR_METHOD_CHORD: return SolverKind::ParallelChord;
    }
    throw PreconditionError("unknown method");
}

}  // namespace

extern "C" {

const char* fr_last_error(void) { return t_last_error.c_str(); }

void fr_config_default(fr_config* cfg) {
    if (!cfg) return;
    cfg->tol = 1e-4;
    cfg->max_iter = 100;
    cfg->delta = 0.5;
    cfg->div_bound = 1e15;
    cfg->eps_shift = 1e-3;
    cfg->chord_slope = std::nan("");
    cfg->deriv = FR_DERIV_RIEMANN_LIOUVILLE;
    cfg->n_trunc = 40;
    cfg->alpha_step = 1e-4;
    cfg->alpha_excl = 0.02;
    cfg->alpha = std::nan("");
    cfg->eps_dedup = 1e-2;
    cfg->jobs = 1;
    cfg->record_trace = 0;
}

fr_status fr_system_parse(const char* const* equations, int n, fr_system** out) {
    if (!equations || !out || n < 1) return fail(FR_ERR_BAD_HANDLE, "null argument");
    *out = nullptr;
    try {
        std::vector<std::string> sources;
        sources.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (!equations[i]) return fail(FR_ERR_BAD_HANDLE, "null equation string");
            sources.emplace_back(equations[i]);
        }
        auto* sys = new fr_system{parse_system(sources, n)};
        *out = sys;
        return FR_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

void fr_system_free(fr_system* sys) { delete sys; }

int fr_system_dim(const fr_system* sys) { return sys ? sys->f.n : 0; }

int fr_system_has_transcendental(const fr_system* sys) {
    if (!sys) return 0;
    for (const ExprPtr& c : sys->f.components)
        if (has_transcendental(*c)) return 1;
    return 0;
}

fr_status fr_system_eval(const fr_system* sys, const double* re, const double* im,
                         double* out_re, double* out_im) {
    if (!sys || !re || !out_re || !out_im) return fail(FR_ERR_BAD_HANDLE, "null argument");
    try {
        ComplexVec x(static_cast<std::size_t>(sys->f.n));
        for (int i = 0; i < sys->f.n; ++i)
            x[static_cast<std::size_t>(i)] = Complex(re[i], im ? im[i] : 0.0);
        const ComplexVec y = eval(sys->f, x);
        for (int i = 0; i < sys->f.n; ++i) {
            out_re[i] = y[static_cast<std::size_t>(i)].real();
            out_im[i] = y[static_cast<std::size_t>(i)].imag();
        }
        return FR_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

fr_status fr_sweep(const fr_system* sys, fr_method method, const fr_config* cfg,
                   const double* x0, fr_result** out) {
    if (!sys || !cfg || !x0 || !out) return fail(FR_ERR_BAD_HANDLE, "null argument");
    *out = nullptr;
    try {
        SolverConfig sc;
        sc.tol = cfg->tol;
        sc.max_iter = cfg->max_iter;
        sc.delta = cfg->delta;
        sc.div_bound = cfg->div_bound;
        sc.eps_shift = cfg->eps_shift;
        sc.chord_slope = cfg->chord_slope;
        sc.deriv_kind = cfg->deriv == FR_DERIV_CAPUTO ? DerivKind::Caputo
                                                      : DerivKind::RiemannLiouville;
        sc.n_trunc = cfg->n_trunc;

        const SolverKind kind = to_kind(method);
        AlphaGrid grid = std::isnan(cfg->alpha)
                             ? (uses_fractional_order(kind)
                                    ? AlphaGrid::uniform(cfg->alpha_step, cfg->alpha_excl)
                                    : AlphaGrid::single(1.0))
                             : AlphaGrid::single(cfg->alpha);

        ComplexVec start(static_cast<std::size_t>(sys->f.n));
        for (int i = 0; i < sys->f.n; ++i) start[static_cast<std::size_t>(i)] = Complex(x0[i], 0.0);

        auto res = std::make_unique<fr_result>();
        res->n = sys->f.n;
        res->data = sweep(sys->f, kind, grid, start, sc, cfg->eps_dedup,
                          cfg->jobs > 0 ? cfg->jobs : 1, cfg->record_trace != 0);
        *out = res.release();
        return FR_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

void fr_result_free(fr_result* res) { delete res; }

int fr_result_root_count(const fr_result* res) {
    return res ? static_cast<int>(res->data.registry.entries().size()) : 0;
}

fr_status fr_result_root(const fr_result* res, int index, double* alpha, double* root_re,
                         double* root_im, double* residual, int* iterations, double* last_step) {
    if (!res || index < 0 || index >= fr_result_root_count(res))
        return fail(FR_ERR_BAD_HANDLE, "root index out of range");
    const RootEntry& e = res->data.registry.entries()[static_cast<std::size_t>(index)];
    if (alpha) *alpha = e.alpha;
    if (residual) *residual = e.residual;
    if (iterations) *iterations = e.iterations;
    if (last_step) *last_step = e.last_step;
    for (int i = 0; i < res->n; ++i) {
        if (root_re) root_re[i] = e.root[static_cast<std::size_t>(i)].real();
        if (root_im) root_im[i] = e.root[static_cast<std::size_t>(i)].imag();
    }
    return FR_OK;
}

int fr_result_record_count(const fr_result* res) {
    return res ? static_cast<int>(res->data.records.size()) : 0;
}

fr_status fr_result_record(const fr_result* res, int index, double* alpha, fr_outcome* outcome,
                           int* iterations, double* final_re, double* final_im, double* residual,
                           double* last_step) {
    if (!res || index < 0 || index >= fr_result_record_count(res))
        return fail(FR_ERR_BAD_HANDLE, "record index out of range");
    const RunRecord& r = res->data.records[static_cast<std::size_t>(index)];
    if (alpha) *alpha = r.alpha;
    if (outcome) {
        switch (r.outcome) {
            case Outcome::Converged: *outcome = FR_OUTCOME_CONVERGED; break;
            case Outcome::Diverged: *outcome = FR_OUTCOME_DIVERGED; break;
            case Outcome::Exhausted: *outcome = FR_OUTCOME_EXHAUSTED; break;
        }
    }
    if (iterations) *iterations = r.iterations;
    if (residual) *residual = r.residual;
    if (last_step) *last_step = r.last_step;
    for (int i = 0; i < res->n; ++i) {
        if (final_re) final_re[i] = r.final_x[static_cast<std::size_t>(i)].real();
        if (final_im) final_im[i] = r.final_x[static_cast<std::size_t>(i)].imag();
    }
    return FR_OK;
}

int fr_result_trace_len(const fr_result* res, int record_index) {
    if (!res || record_index < 0 || record_index >= fr_result_record_count(res)) return 0;
    return static_cast<int>(
        res->data.records[static_cast<std::size_t>(record_index)].trace.size());
}

fr_status fr_result_trace_row(const fr_result* res, int record_index, int row, int* iteration,
                              double* alpha_eff, double* x_re, double* x_im, double* residual) {
    if (!res || record_index < 0 || record_index >= fr_result_record_count(res) || row < 0 ||
        row >= fr_result_trace_len(res, record_index))
        return fail(FR_ERR_BAD_HANDLE, "trace index out of range");
    const TraceRow& t =
        res->data.records[static_cast<std::size_t>(record_index)].trace[static_cast<std::size_t>(row)];
    if (iteration) *iteration = t.iteration;
    if (alpha_eff) *alpha_eff = t.alpha_eff;
    if (residual) *residual = t.residual;
    for (int i = 0; i < res->n; ++i) {
        if (x_re) x_re[i] = t.x[static_cast<std::size_t>(i)].real();
        if (x_im) x_im[i] = t.x[static_cast<std::size_t>(i)].imag();
    }
    return FR_OK;
}

}  // extern "C"
