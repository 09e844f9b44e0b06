#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "complexmath.hpp"
#include "expr.hpp"
#include "fracseries.hpp"
#include "linalg.hpp"

namespace fracroot {

enum class SolverKind {
    ClassicNewton,
    FracNewtonRaphson,  // fixed order, no switch
    FracNewton,         // order switches to 1 near a root / at the origin
    FracQuasiNewton,
    FracPseudoNewton,
    ParallelChord,
};

struct SolverConfig {
    double tol = 1e-4;
    int max_iter = 100;
    double delta = 0.5;        // alpha-switch threshold, TOL < delta < 1
    double div_bound = 1e15;   // M
    double eps_shift = 1e-3;   // pseudo-Newton diagonal shift
    // parallel-chord slope; NaN means "classic derivative at x0, per component"
    double chord_slope = std::numeric_limits<double>::quiet_NaN();
    DerivKind deriv_kind = DerivKind::RiemannLiouville;
    int n_trunc = 40;

    void validate() const;
};

enum class Outcome { Converged, Diverged, Exhausted };

struct TraceRow {
    int iteration;
    double alpha_eff;  // order used in the step that produced this iterate
    ComplexVec x;
    double residual;
};

struct RunRecord {
    double alpha = 0.0;
    Outcome outcome = Outcome::Exhausted;
    int iterations = 0;  // R_m
    ComplexVec final_x;
    double residual = 0.0;
    double last_step = 0.0;  // ||x_R - x_{R-1}||_2
    std::vector<TraceRow> trace;  // filled only when requested
};

/// Order switch of the fractional Newton method: keep alpha while the
/// residual is at least delta and x != 0, otherwise fall back to order 1.
double alpha_switch(double alpha, std::span<const Complex> x, double fx_norm, double delta);

/// Per-component switch: alpha when |xj| != 0, else 1. Comparisons are
/// exact; no epsilon thresholding.
double beta_switch(double alpha, Complex xj);

ComplexVec step_frac_newton(const SystemF& f, const ComplexVec& x, double alpha_eff,
                            const SolverConfig& cfg);

/// One quasi-Newton step. J0 and f0 belong to the run's starting point.
ComplexVec step_quasi(const SystemF& f, const ComplexVec& x, const ComplexVec& x0,
                      const ComplexMatrix& j0, const ComplexVec& f0, double alpha,
                      const SolverConfig& cfg);

/// One pseudo-Newton step: a diagonal scaling, never a linear solve.
ComplexVec step_pseudo(const SystemF& f, const ComplexVec& x, double alpha,
                       const SolverConfig& cfg);

/// One parallel-chord step with per-component slopes.
ComplexVec step_chord(const ComplexVec& x, const ComplexVec& fx, std::span<const Complex> slopes);

/// Run one alpha to convergence, divergence, or iteration exhaustion.
RunRecord run(const SystemF& f, SolverKind kind, double alpha, const ComplexVec& x0,
              const SolverConfig& cfg, bool record_trace = false);

bool uses_fractional_order(SolverKind kind);

}  // namespace fracroot
