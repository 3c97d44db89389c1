#pragma once

// Test-only helpers: random TT instances and dense reference implementations.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "ttortho/dense.hpp"
#include "ttortho/tt.hpp"

namespace ttortho::test {

using Rng = std::mt19937_64;

TTVector random_tt(Rng& rng, std::span<const std::size_t> modes, std::span<const std::size_t> ranks);
/// Order d, mode size n, interior ranks drawn from 1..max_rank.
TTVector random_tt(Rng& rng, std::size_t d, std::size_t n, std::size_t max_rank);
DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// Densified inputs as the columns of a matrix.
DenseMatrix columns_of(std::span<const TTVector> set);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double rel_diff(std::span<const double> x, std::span<const double> y);
double max_abs(const DenseMatrix& a);
double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);

struct DenseQR {
  DenseMatrix q;  // n x m
  DenseMatrix r;  // m x m
};

DenseQR dense_cgs(const DenseMatrix& a);
DenseQR dense_mgs(const DenseMatrix& a);
DenseQR dense_cgs2(const DenseMatrix& a);
DenseQR dense_mgs2(const DenseMatrix& a);
/// Cholesky of A^T A, Q = A R^-1.
DenseQR dense_gram(const DenseMatrix& a);
/// Householder QR with r(i) = sign(w_i) sqrt(||w||^2 - sum_{j<i} w_j^2), sign(0) = +1,
/// u = (w with entries < i zeroed, minus r(i) e_i) / norm; q_i = H_1 .. H_i e_i.
DenseQR dense_householder(const DenseMatrix& a);

/// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi rotations, descending.
std::vector<double> jacobi_eigenvalues(const DenseMatrix& symmetric);

/// sum_k I x .. x T x .. x I in the mode-1-fastest ordering, T = tridiag(-1, 2, -1).
DenseMatrix kronecker_laplacian(std::size_t d, std::size_t n);

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

}  // namespace ttortho::test
