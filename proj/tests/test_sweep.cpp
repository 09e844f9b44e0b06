#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "expr.hpp"
#include "sweep.hpp"

using namespace fracroot;

namespace {

RunRecord converged_at(double value, int iterations, double alpha = 0.5) {
    RunRecord r;
    r.alpha = alpha;
    r.outcome = Outcome::Converged;
    r.iterations = iterations;
    r.final_x = {{value, 0.0}};
    r.residual = 1e-9;
    return r;
}

}  // namespace

TEST_CASE("uniform grid drops the excluded integers") {
    const AlphaGrid g = AlphaGrid::uniform(0.5, 0.01);
    CHECK(g.values == std::vector<double>{-1.5, -0.5, 0.5, 1.5});
}

TEST_CASE("grid that loses every point is an error") {
    CHECK_THROWS_AS(AlphaGrid::uniform(1.0, 0.01), EmptyGridError);
}

TEST_CASE("quarter-step grid has the twelve admissible points") {
    const AlphaGrid g = AlphaGrid::uniform(0.25, 0.01);
    const std::vector<double> want{-1.75, -1.5, -1.25, -0.75, -0.5, -0.25,
                                   0.25, 0.5, 0.75, 1.25, 1.5, 1.75};
    REQUIRE(g.values.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(g.values[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("grid parameter validation") {
    CHECK_THROWS_AS(AlphaGrid::uniform(0.0, 0.01), PreconditionError);
    CHECK_THROWS_AS(AlphaGrid::uniform(1.5, 0.01), PreconditionError);
    CHECK_THROWS_AS(AlphaGrid::uniform(0.1, 0.0), PreconditionError);
    CHECK_THROWS_AS(AlphaGrid::uniform(0.1, 1.0), PreconditionError);
    // an exclusion radius larger than the step is fine (the defaults use one)
    CHECK_NOTHROW(AlphaGrid::uniform(0.01, 0.02));
}

TEST_CASE("fine default-style grid keeps points at the exclusion edge") {
    const AlphaGrid g = AlphaGrid::uniform(0.01, 0.02);
    // 0.98 sits exactly at distance r_excl and must survive rounding noise
    bool has_098 = false;
    for (double v : g.values)
        if (std::abs(v - 0.98) < 1e-9) has_098 = true;
    CHECK(has_098);
    for (double v : g.values) {
        CHECK(v > -2.0);
        CHECK(v < 2.0);
        CHECK(std::min({std::abs(v + 1.0), std::abs(v), std::abs(v - 1.0)}) >= 0.02 - 1e-9);
    }
}

TEST_CASE("offer: merge with fewer iterations replaces") {
    RootRegistry reg(0.01);
    reg.offer(converged_at(1.0000, 5));
    reg.offer(converged_at(1.005, 3));
    REQUIRE(reg.entries().size() == 1);
    CHECK(reg.entries()[0].root[0] == Complex(1.005, 0.0));
    CHECK(reg.entries()[0].iterations == 3);
}

TEST_CASE("offer: merge with more iterations keeps the holder") {
    RootRegistry reg(0.01);
    reg.offer(converged_at(1.0, 2));
    reg.offer(converged_at(1.005, 9));
    REQUIRE(reg.entries().size() == 1);
    CHECK(reg.entries()[0].root[0] == Complex(1.0, 0.0));
    CHECK(reg.entries()[0].iterations == 2);
}

TEST_CASE("offer: distant candidate appends") {
    RootRegistry reg(0.01);
    reg.offer(converged_at(1.0, 4));
    reg.offer(converged_at(2.0, 4));
    CHECK(reg.entries().size() == 2);
}

TEST_CASE("offer: zero-norm entry falls back to absolute distance") {
    RootRegistry reg(0.01);
    reg.offer(converged_at(0.0, 7));
    reg.offer(converged_at(0.005, 3));  // absolute distance 0.005 <= eps
    REQUIRE(reg.entries().size() == 1);
    CHECK(reg.entries()[0].iterations == 3);
    reg.offer(converged_at(0.5, 2));  // absolute distance 0.495 > eps
    CHECK(reg.entries().size() == 2);
}

TEST_CASE("offer rejects non-converged records") {
    RootRegistry reg(0.01);
    RunRecord r = converged_at(1.0, 3);
    r.outcome = Outcome::Diverged;
    CHECK_THROWS_AS(reg.offer(r), PreconditionError);
}

TEST_CASE("registry invariant holds under random root-cluster streams") {
    // candidates arrive the way sweeps produce them: tightly clustered
    // around well-separated roots, jitter far below the dedup threshold
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> iters(1, 40);
    std::uniform_real_distribution<double> jitter(-1e-4, 1e-4);
    const double centers[] = {-2.5, -1.0, 0.8, 1.0, 2.2};
    std::uniform_int_distribution<int> pick(0, 4);
    for (int round = 0; round < 20; ++round) {
        const double eps = 0.05;
        RootRegistry reg(eps);
        for (int i = 0; i < 300; ++i)
            reg.offer(converged_at(centers[pick(rng)] + jitter(rng), iters(rng)));
        const auto& e = reg.entries();
        CHECK(e.size() == 5);
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (i == j) continue;
                ComplexVec d = e[i].root;
                d[0] -= e[j].root[0];
                const double base = norm2(e[i].root);
                const double dist = base > 0 ? norm2(d) / base : norm2(d);
                CHECK(dist > eps);
            }
        }
    }
}

TEST_CASE("sweep on x^2-2 with one classic run") {
    const SystemF f = parse_system(std::vector<std::string>{"x^2 - 2"}, 1);
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 50;
    const SweepResult res =
        sweep(f, SolverKind::ClassicNewton, AlphaGrid::single(0.5), {{1.5, 0}}, cfg, 1e-2);
    REQUIRE(res.registry.entries().size() == 1);
    CHECK(std::abs(res.registry.entries()[0].root[0] - Complex(1.4142135623730950488, 0)) <
          1e-9);
    CHECK(res.records.size() == 1);
}

TEST_CASE("sweep records keep every run, converged or not") {
    const SystemF f = parse_system(std::vector<std::string>{"x^2 + 1"}, 1);
    SolverConfig cfg;
    cfg.max_iter = 30;
    const AlphaGrid g = AlphaGrid::uniform(0.25, 0.01);
    const SweepResult res = sweep(f, SolverKind::FracNewton, g, {{1.0, 0}}, cfg, 1e-2);
    CHECK(res.records.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i)
        CHECK(res.records[i].alpha == g.values[i]);
    for (const RootEntry& e : res.registry.entries())
        CHECK(norm2(eval(f, e.root)) <= cfg.tol);
}

TEST_CASE("sweep is deterministic across worker counts") {
    const SystemF f = parse_system(std::vector<std::string>{"x^3 - 2*x + 2"}, 1);
    SolverConfig cfg;
    cfg.max_iter = 60;
    const AlphaGrid g = AlphaGrid::uniform(0.05, 0.02);
    const SweepResult a = sweep(f, SolverKind::FracNewton, g, {{0.7, 0}}, cfg, 1e-2, 1);
    const SweepResult b = sweep(f, SolverKind::FracNewton, g, {{0.7, 0}}, cfg, 1e-2, 4);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].outcome == b.records[i].outcome);
        CHECK(a.records[i].iterations == b.records[i].iterations);
        if (!a.records[i].final_x.empty() && std::isfinite(a.records[i].final_x[0].real()))
            CHECK(a.records[i].final_x[0] == b.records[i].final_x[0]);
    }
    REQUIRE(a.registry.entries().size() == b.registry.entries().size());
    for (std::size_t i = 0; i < a.registry.entries().size(); ++i) {
        CHECK(a.registry.entries()[i].root[0] == b.registry.entries()[i].root[0]);
        CHECK(a.registry.entries()[i].alpha == b.registry.entries()[i].alpha);
    }
}

TEST_CASE("sweep honors the Caputo derivative kind") {
    const SystemF f = parse_system(std::vector<std::string>{"x^2 - 2"}, 1);
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 80;
    cfg.deriv_kind = DerivKind::Caputo;
    const SweepResult res =
        sweep(f, SolverKind::FracNewton, AlphaGrid::single(0.5), {{1.5, 0}}, cfg, 1e-2);
    REQUIRE(res.registry.entries().size() == 1);
    CHECK(std::abs(res.registry.entries()[0].root[0] - Complex(1.4142135623730950488, 0)) <
          1e-8);
    // the Caputo Jacobian drops the constant, so the first step differs
    // from the Riemann-Liouville one
    SolverConfig rl = cfg;
    rl.deriv_kind = DerivKind::RiemannLiouville;
    const RunRecord a = run(f, SolverKind::FracNewtonRaphson, 0.5, {{1.5, 0}}, cfg, true);
    const RunRecord b = run(f, SolverKind::FracNewtonRaphson, 0.5, {{1.5, 0}}, rl, true);
    REQUIRE(a.trace.size() > 1);
    REQUIRE(b.trace.size() > 1);
    CHECK(a.trace[1].x[0] != b.trace[1].x[0]);
}

TEST_CASE("sweep propagates precondition failures") {
    const SystemF f = parse_system(std::vector<std::string>{"x^2 - 2"}, 1);
    SolverConfig cfg;
    CHECK_THROWS_AS(
        sweep(f, SolverKind::FracNewton, AlphaGrid::uniform(0.5, 0.01), {{0.0, 0}}, cfg, 1e-2),
        PreconditionError);
}
