#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "complexmath.hpp"

namespace fracroot {

/// Dense square matrix of complex entries, row major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    int dim() const { return n_; }
    Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * n_ + j];
    }

  private:
    int n_ = 0;
    std::vector<Complex> a_;
};

/// Solve A y = b by LU with partial pivoting on the largest modulus.
/// Throws SingularMatrixError when a pivot falls below 1e-14 times the
/// modulus scale of its row.
ComplexVec solve(const ComplexMatrix& a, ComplexVec b);

ComplexVec matvec(const ComplexMatrix& a, std::span<const Complex> x);

/// Euclidean norm sqrt(sum |v_j|^2).
double norm2(std::span<const Complex> v);

/// Largest entry modulus (used as an infinity-style matrix norm in tests).
double max_abs(const ComplexMatrix& a);

/// Number of solve() calls made so far in this process. Lets tests assert
/// that a code path performs no linear solves.
std::uint64_t solve_call_count();

}  // namespace fracroot
