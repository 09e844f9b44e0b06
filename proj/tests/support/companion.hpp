#pragma once

// Test-only oracle: polynomial roots as companion-matrix eigenvalues,
// computed with a shifted complex QR iteration on the Hessenberg form.
// Independent of the library's solver path on purpose.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;

namespace detail {

// one shifted QR sweep on the leading m x m block via Givens rotations
inline void qr_sweep(std::vector<std::vector<Cx>>& h, int m, Cx shift) {
    const int n = static_cast<int>(h.size());
    std::vector<Cx> cs(static_cast<std::size_t>(m));
    std::vector<Cx> sn(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) h[k][k] -= shift;

    for (int k = 0; k < m - 1; ++k) {
        const Cx a = h[k][k];
        const Cx b = h[k + 1][k];
        const double r = std::hypot(std::abs(a), std::abs(b));
        if (r == 0.0) {
            cs[k] = 1.0;
            sn[k] = 0.0;
            continue;
        }
        const Cx c = std::conj(a) / r;
        const Cx s = std::conj(b) / r;
        cs[k] = c;
        sn[k] = s;
        for (int j = k; j < n; ++j) {
            const Cx t1 = h[k][j];
            const Cx t2 = h[k + 1][j];
            h[k][j] = c * t1 + s * t2;
            h[k + 1][j] = -std::conj(s) * t1 + std::conj(c) * t2;
        }
    }
    for (int k = 0; k < m - 1; ++k) {
        const Cx c = cs[k];
        const Cx s = sn[k];
        const int top = std::min(k + 2, m - 1);
        for (int i = 0; i <= top; ++i) {
            const Cx t1 = h[i][k];
            const Cx t2 = h[i][k + 1];
            h[i][k] = t1 * std::conj(c) + t2 * std::conj(s);
            h[i][k + 1] = -t1 * s + t2 * c;
        }
    }
    for (int k = 0; k < m; ++k) h[k][k] += shift;
}

}  // namespace detail

/// Eigenvalues of the companion matrix of p(z) = sum_k coeffs[k] z^k.
/// coeffs has degree+1 entries, highest degree last and nonzero.
inline std::vector<Cx> polynomial_roots(const std::vector<double>& coeffs) {
    int degree = static_cast<int>(coeffs.size()) - 1;
    while (degree > 0 && coeffs[static_cast<std::size_t>(degree)] == 0.0) --degree;
    if (degree < 1) throw std::invalid_argument("degree must be at least 1");

    const int n = degree;
    std::vector<std::vector<Cx>> h(static_cast<std::size_t>(n),
                                   std::vector<Cx>(static_cast<std::size_t>(n), Cx(0, 0)));
    const double lead = coeffs[static_cast<std::size_t>(n)];
    for (int i = 1; i < n; ++i) h[i][i - 1] = 1.0;
    for (int i = 0; i < n; ++i) h[i][n - 1] = -coeffs[static_cast<std::size_t>(i)] / lead;

    std::vector<Cx> roots;
    int m = n;
    int sweeps = 0;
    const int max_sweeps = 500 * n;
    while (m > 0) {
        if (m == 1) {
            roots.push_back(h[0][0]);
            m = 0;
            continue;
        }
        // deflate the trailing eigenvalue once its subdiagonal entry dies
        const double scale = std::abs(h[m - 2][m - 2]) + std::abs(h[m - 1][m - 1]);
        if (std::abs(h[m - 1][m - 2]) <= 1e-15 * (scale > 0.0 ? scale : 1.0)) {
            roots.push_back(h[m - 1][m - 1]);
            --m;
            continue;
        }
        // Wilkinson shift from the trailing 2 x 2 block
        const Cx a = h[m - 2][m - 2];
        const Cx b = h[m - 2][m - 1];
        const Cx c = h[m - 1][m - 2];
        const Cx d = h[m - 1][m - 1];
        const Cx tr = a + d;
        const Cx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
        const Cx l1 = 0.5 * (tr + disc);
        const Cx l2 = 0.5 * (tr - disc);
        detail::qr_sweep(h, m, std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2);
        if (++sweeps > max_sweeps) throw std::runtime_error("QR iteration failed to converge");
    }
    return roots;
}

}  // namespace oracle
