#include "linalg.hpp"

#include <cmath>
#include <utility>

#include "errors.hpp"

namespace fracroot {

namespace {
std::atomic<std::uint64_t> g_solve_calls{0};
}

std::uint64_t solve_call_count() { return g_solve_calls.load(); }

ComplexVec solve(const ComplexMatrix& a, ComplexVec b) {
    g_solve_calls.fetch_add(1, std::memory_order_relaxed);
    const int n = a.dim();
    if (static_cast<int>(b.size()) != n) throw PreconditionError("solve: dimension mismatch");
    ComplexMatrix m = a;

    // row scales for the singularity test
    std::vector<double> scale(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale[i] = std::max(scale[i], std::abs(m(i, j)));

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(m(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (!(best > 1e-14 * scale[piv]) || scale[piv] == 0.0)
            throw SingularMatrixError("singular matrix in LU solve");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(b[k], b[piv]);
            std::swap(scale[k], scale[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const Complex f = m(i, k) / m(k, k);
            if (f == Complex(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        Complex s = b[i];
        for (int j = i + 1; j < n; ++j) s -= m(i, j) * b[j];
        b[i] = s / m(i, i);
    }
    return b;
}

ComplexVec matvec(const ComplexMatrix& a, std::span<const Complex> x) {
    const int n = a.dim();
    ComplexVec y(n, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[i] += a(i, j) * x[j];
    return y;
}

double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex& c : v) s += std::norm(c);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

}  // namespace fracroot
