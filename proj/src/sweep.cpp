#include "sweep.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "errors.hpp"

namespace fracroot {

AlphaGrid AlphaGrid::uniform(double step, double r_excl) {
    if (!(step > 0.0 && step <= 1.0)) throw PreconditionError("need 0 < step <= 1");
    if (!(r_excl > 0.0 && r_excl < 1.0)) throw PreconditionError("need 0 < r_excl < 1");
    AlphaGrid g;
    for (int k = 1;; ++k) {
        const double v = -2.0 + k * step;
        if (v >= 2.0 - 1e-12) break;
        const double d = std::min({std::abs(v + 1.0), std::abs(v), std::abs(v - 1.0)});
        // small slack so 0.98 with r_excl = 0.02 survives rounding noise
        if (d >= r_excl - 1e-9) g.values.push_back(v);
    }
    if (g.values.empty()) throw EmptyGridError("no admissible grid points");
    return g;
}

AlphaGrid AlphaGrid::single(double alpha) {
    AlphaGrid g;
    g.values.push_back(alpha);
    return g;
}

void RootRegistry::offer(const RunRecord& candidate) {
    if (candidate.outcome != Outcome::Converged)
        throw PreconditionError("only converged records enter the registry");
    for (RootEntry& e : entries_) {
        ComplexVec diff = e.root;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= candidate.final_x[i];
        const double base = norm2(e.root);
        // relative distance; absolute when the stored root is the origin
        const double dist = base > 0.0 ? norm2(diff) / base : norm2(diff);
        if (dist <= eps_) {
            if (candidate.iterations <= e.iterations)
                e = RootEntry{candidate.final_x, candidate.residual, candidate.iterations,
                              candidate.alpha, candidate.last_step};
            return;
        }
    }
    entries_.push_back(RootEntry{candidate.final_x, candidate.residual, candidate.iterations,
                                 candidate.alpha, candidate.last_step});
}

SweepResult sweep(const SystemF& f, SolverKind kind, const AlphaGrid& grid, const ComplexVec& x0,
                  const SolverConfig& cfg, double eps_dedup, int jobs, bool record_trace) {
    if (grid.values.empty()) throw EmptyGridError("empty grid");
    cfg.validate();
    if (uses_fractional_order(kind) && norm2(x0) == 0.0)
        throw PreconditionError("fractional methods need an initial condition x0 != 0");

    std::vector<RunRecord> records(grid.values.size());
    const auto worker_count =
        std::max(1, std::min<int>(jobs, static_cast<int>(grid.values.size())));

    if (worker_count == 1) {
        for (std::size_t i = 0; i < grid.values.size(); ++i)
            records[i] = run(f, kind, grid.values[i], x0, cfg, record_trace);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= grid.values.size()) return;
                try {
                    records[i] = run(f, kind, grid.values[i], x0, cfg, record_trace);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int t = 0; t < worker_count; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // deterministic fold in ascending alpha, independent of completion order
    SweepResult result{RootRegistry(eps_dedup), std::move(records)};
    for (const RunRecord& rec : result.records)
        if (rec.outcome == Outcome::Converged) result.registry.offer(rec);
    return result;
}

}  // namespace fracroot
