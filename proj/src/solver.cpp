#include "solver.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace fracroot {

namespace {

bool all_finite(std::span<const Complex> v) {
    for (const Complex& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

bool admissible_order(double alpha) {
    return alpha > -2.0 && alpha < 2.0 && alpha != -1.0 && alpha != 0.0 && alpha != 1.0;
}

ComplexVec chord_slopes(const SystemF& f, const ComplexVec& x0, const SolverConfig& cfg) {
    ComplexVec m(static_cast<std::size_t>(f.n));
    if (std::isnan(cfg.chord_slope)) {
        const ComplexMatrix j0 = classic_jacobian(f, x0);
        for (int j = 0; j < f.n; ++j) m[static_cast<std::size_t>(j)] = j0(j, j);
        // a flat derivative at x0 fails this run, not the whole sweep
        for (const Complex& c : m)
            if (c == Complex(0.0, 0.0))
                throw SingularMatrixError("derivative at x0 gives a zero chord slope");
    } else {
        if (cfg.chord_slope == 0.0) throw PreconditionError("parallel chord slope must be nonzero");
        for (int j = 0; j < f.n; ++j)
            m[static_cast<std::size_t>(j)] = Complex(cfg.chord_slope, 0.0);
    }
    return m;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol > 0.0 && tol < 1.0)) throw PreconditionError("need 0 < tol < 1");
    if (!(delta > tol && delta < 1.0)) throw PreconditionError("need tol < delta < 1");
    if (max_iter <= 1) throw PreconditionError("need max_iter > 1");
    if (!(div_bound > std::max(1.0, 1.0 / tol)))
        throw PreconditionError("need div_bound > max(1, 1/tol)");
    if (!(eps_shift > 0.0 && eps_shift < 1.0)) throw PreconditionError("need 0 < eps_shift < 1");
    if (n_trunc < 1) throw PreconditionError("need n_trunc >= 1");
}

bool uses_fractional_order(SolverKind kind) {
    switch (kind) {
        case SolverKind::FracNewtonRaphson:
        case SolverKind::FracNewton:
        case SolverKind::FracQuasiNewton:
        case SolverKind::FracPseudoNewton: return true;
        default: return false;
    }
}

double alpha_switch(double alpha, std::span<const Complex> x, double fx_norm, double delta) {
    if (fx_norm >= delta && norm2(x) != 0.0) return alpha;
    return 1.0;
}

double beta_switch(double alpha, Complex xj) {
    return std::abs(xj) != 0.0 ? alpha : 1.0;
}

ComplexVec step_frac_newton(const SystemF& f, const ComplexVec& x, double alpha_eff,
                            const SolverConfig& cfg) {
    const ComplexMatrix j = frac_jacobian(f, alpha_eff, x, cfg.deriv_kind, cfg.n_trunc);
    const ComplexVec d = solve(j, eval(f, x));
    ComplexVec next = x;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= d[i];
    return next;
}

ComplexVec step_quasi(const SystemF& f, const ComplexVec& x, const ComplexVec& x0,
                      const ComplexMatrix& j0, const ComplexVec& f0, double alpha,
                      const SolverConfig& cfg) {
    (void)x0;
    const int n = f.n;
    ComplexMatrix q(n);
    for (int j = 0; j < n; ++j) {
        const Complex xj = x[static_cast<std::size_t>(j)];
        const double beta = beta_switch(alpha, xj);
        Complex t0, t1;
        if (beta == 1.0) {
            t0 = Complex(0.0, 0.0);  // classic derivative of a constant
            t1 = Complex(1.0, 0.0);
        } else {
            t0 = frac_term(Complex(1.0, 0.0), 0.0, beta, xj, cfg.deriv_kind);
            t1 = frac_term(Complex(1.0, 0.0), 1.0, beta, xj, cfg.deriv_kind);
        }
        for (int k = 0; k < n; ++k) {
            // constant part of g_k as a function of x_j, frozen at the
            // current iterate
            Complex c = f0[static_cast<std::size_t>(k)];
            for (int l = 0; l < n; ++l)
                if (l != j) c += j0(k, l) * x[static_cast<std::size_t>(l)];
            q(k, j) = c * t0 + j0(k, j) * t1;
        }
    }
    const ComplexVec d = solve(q, eval(f, x));
    ComplexVec next = x;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= d[i];
    return next;
}

ComplexVec step_pseudo(const SystemF& f, const ComplexVec& x, double alpha,
                       const SolverConfig& cfg) {
    // P is diagonal and applied directly; no solve, no inversion
    const ComplexVec fx = eval(f, x);
    ComplexVec next = x;
    for (std::size_t j = 0; j < next.size(); ++j) {
        const double beta = beta_switch(alpha, x[j]);
        Complex pj(cfg.eps_shift, 0.0);
        if (beta != 1.0) {
            // D^beta of the constant 1: x^-beta / Gamma(1-beta)
            pj += principal_pow(x[j], -beta) * inv_gamma_real(1.0 - beta);
        }
        // beta == 1 leaves only eps: the Gamma(0) pole convention gives 0
        next[j] -= pj * fx[j];
    }
    return next;
}

ComplexVec step_chord(const ComplexVec& x, const ComplexVec& fx,
                      std::span<const Complex> slopes) {
    ComplexVec next = x;
    for (std::size_t j = 0; j < next.size(); ++j) next[j] -= fx[j] / slopes[j];
    return next;
}

RunRecord run(const SystemF& f, SolverKind kind, double alpha, const ComplexVec& x0,
              const SolverConfig& cfg, bool record_trace) {
    cfg.validate();
    if (static_cast<int>(x0.size()) != f.n) throw PreconditionError("run: dimension mismatch");
    if (uses_fractional_order(kind)) {
        if (norm2(x0) == 0.0)
            throw PreconditionError("fractional methods need an initial condition x0 != 0");
        if (!admissible_order(alpha))
            throw PreconditionError("order must lie in (-2,2) excluding {-1,0,1}");
    }

    RunRecord rec;
    rec.alpha = alpha;

    // an iterate sitting exactly on a pole of f has no residual; treat it
    // as a failed (diverging) point rather than aborting the sweep
    auto residual_at = [&](const ComplexVec& p) -> double {
        try {
            return norm2(eval(f, p));
        } catch (const PreconditionError&) {
            throw;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    ComplexVec x = x0;
    double residual = residual_at(x);

    if (record_trace) rec.trace.push_back({0, alpha, x, residual});

    auto finish = [&](Outcome outcome, int iters, double last_step) {
        rec.outcome = outcome;
        rec.iterations = iters;
        rec.final_x = x;
        rec.residual = residual;
        rec.last_step = last_step;
        return rec;
    };

    if (residual <= cfg.tol) return finish(Outcome::Converged, 0, 0.0);
    if (residual >= cfg.div_bound) return finish(Outcome::Diverged, 0, 0.0);

    // per-run precomputation; a failure here is a failed first step
    std::optional<JacobianCache> classic;
    ComplexMatrix j0;
    ComplexVec f0;
    ComplexVec slopes;
    try {
        if (kind == SolverKind::ClassicNewton || kind == SolverKind::FracNewton)
            classic.emplace(f);
        if (kind == SolverKind::FracQuasiNewton) {
            j0 = classic_jacobian(f, x0);
            f0 = eval(f, x0);
        }
        if (kind == SolverKind::ParallelChord) slopes = chord_slopes(f, x0, cfg);
    } catch (const PreconditionError&) {
        throw;
    } catch (const Error&) {
        residual = std::numeric_limits<double>::infinity();
        return finish(Outcome::Diverged, 0, 0.0);
    }

    double last_step = 0.0;
    for (int i = 1; i <= cfg.max_iter; ++i) {
        double alpha_eff = alpha;
        ComplexVec next;
        try {
            switch (kind) {
                case SolverKind::ClassicNewton: {
                    alpha_eff = 1.0;
                    const ComplexVec d = solve(classic->eval_at(x), eval(f, x));
                    next = x;
                    for (std::size_t j = 0; j < next.size(); ++j) next[j] -= d[j];
                    break;
                }
                case SolverKind::FracNewtonRaphson:
                    next = step_frac_newton(f, x, alpha, cfg);
                    break;
                case SolverKind::FracNewton: {
                    alpha_eff = alpha_switch(alpha, x, residual, cfg.delta);
                    if (alpha_eff == 1.0) {
                        const ComplexVec d = solve(classic->eval_at(x), eval(f, x));
                        next = x;
                        for (std::size_t j = 0; j < next.size(); ++j) next[j] -= d[j];
                    } else {
                        next = step_frac_newton(f, x, alpha_eff, cfg);
                    }
                    break;
                }
                case SolverKind::FracQuasiNewton:
                    next = step_quasi(f, x, x0, j0, f0, alpha, cfg);
                    break;
                case SolverKind::FracPseudoNewton:
                    next = step_pseudo(f, x, alpha, cfg);
                    break;
                case SolverKind::ParallelChord:
                    alpha_eff = 1.0;
                    next = step_chord(x, eval(f, x), slopes);
                    break;
            }
        } catch (const PreconditionError&) {
            throw;
        } catch (const Error&) {
            // singular matrix/point, pole, overflow, unsupported expansion:
            // the run is classified, not the sweep aborted
            residual = std::numeric_limits<double>::infinity();
            return finish(Outcome::Diverged, i, last_step);
        }

        ComplexVec diff = next;
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= x[j];
        last_step = norm2(diff);
        x = std::move(next);

        if (!all_finite(x)) {
            residual = std::numeric_limits<double>::infinity();
            if (record_trace) rec.trace.push_back({i, alpha_eff, x, residual});
            return finish(Outcome::Diverged, i, last_step);
        }
        residual = residual_at(x);
        if (record_trace) rec.trace.push_back({i, alpha_eff, x, residual});

        if (std::isnan(residual)) {
            residual = std::numeric_limits<double>::infinity();
            return finish(Outcome::Diverged, i, last_step);
        }
        if (residual <= cfg.tol) return finish(Outcome::Converged, i, last_step);
        if (residual >= cfg.div_bound) return finish(Outcome::Diverged, i, last_step);
    }
    return finish(Outcome::Exhausted, cfg.max_iter, last_step);
}

}  // namespace fracroot
