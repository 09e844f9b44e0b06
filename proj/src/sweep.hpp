#pragma once

#include <vector>

#include "solver.hpp"

namespace fracroot {

/// Ordered admissible orders in (-2, 2), kept clear of {-1, 0, 1} by an
/// exclusion radius.
struct AlphaGrid {
    std::vector<double> values;

    /// Uniform partition -2+step, -2+2*step, ... of (-2, 2); the endpoints
    /// are never used. Points within r_excl of {-1, 0, 1} are removed.
    /// Throws EmptyGridError when nothing survives.
    static AlphaGrid uniform(double step, double r_excl);

    /// A single explicit order (no exclusion filtering; run() still checks
    /// admissibility for fractional methods).
    static AlphaGrid single(double alpha);
};

struct RootEntry {
    ComplexVec root;
    double residual = 0.0;
    int iterations = 0;
    double alpha = 0.0;
    double last_step = 0.0;
};

/// Deduplicated set of accepted roots: pairwise relative Euclidean distance
/// stays above eps_dedup, and a merged candidate replaces an entry only when
/// it converged in no more iterations.
class RootRegistry {
  public:
    explicit RootRegistry(double eps_dedup) : eps_(eps_dedup) {}

    void offer(const RunRecord& candidate);
    const std::vector<RootEntry>& entries() const { return entries_; }
    double eps_dedup() const { return eps_; }

  private:
    double eps_;
    std::vector<RootEntry> entries_;
};

struct SweepResult {
    RootRegistry registry;
    std::vector<RunRecord> records;  // one per grid value, in grid order
};

/// Run every grid order from the same x0 and fold the converged records into
/// the registry in ascending-alpha order. Per-run failures are recorded as
/// Diverged, never raised. jobs > 1 runs the alphas on a worker pool; the
/// fold stays deterministic regardless of worker count.
SweepResult sweep(const SystemF& f, SolverKind kind, const AlphaGrid& grid, const ComplexVec& x0,
                  const SolverConfig& cfg, double eps_dedup, int jobs = 1,
                  bool record_trace = false);

}  // namespace fracroot
