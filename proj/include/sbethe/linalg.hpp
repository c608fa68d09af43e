#pragma once

#include <vector>

#include "sbethe/complexx.hpp"

namespace sbethe {

/// Dense complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(mpfr_prec_t bits, int rows, int cols)
      : bits_(bits), rows_(rows), cols_(cols),
        d_(static_cast<size_t>(rows) * static_cast<size_t>(cols), Complex(bits)) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  mpfr_prec_t prec() const noexcept { return bits_; }

  Complex& at(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
  const Complex& at(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

 private:
  mpfr_prec_t bits_ = Real::kDefaultBits;
  int rows_ = 0, cols_ = 0;
  std::vector<Complex> d_;
};

/// LU decomposition with partial pivoting.  `singular` is set when a pivot
/// vanishes to working precision; the factorization is still returned.
struct LU {
  Matrix lu;
  std::vector<int> perm;
  int sign = 1;
  bool singular = false;
};

LU lu_decompose(const Matrix& a);
std::vector<Complex> lu_solve(const LU& f, const std::vector<Complex>& rhs);

struct DetResult {
  Complex value;       // may over/underflow meaning only for extreme sizes
  Real log10_abs;      // log10 |det|, accumulated pivot-wise
  Complex phase;       // det / |det| (zero matrix: 0)
  bool singular = false;
};

DetResult determinant(const Matrix& a);

struct MinEigResult {
  Real modulus;
  bool singular_flag = false;  // LU singular; modulus is an upper bound
  int iterations = 0;
};

/// Modulus of the eigenvalue closest to zero, by inverse power iteration with
/// an unshifted LU solve.  Deterministic given rng_seed.  Matrices here are
/// complex symmetric, so eigenvalues are generally complex; only the modulus
/// is reported.
MinEigResult min_abs_eigenvalue(const Matrix& a, int restarts = 3, int max_iter = 80,
                                unsigned long rng_seed = 7);

/// Eigenvalues of a real symmetric tridiagonal matrix by Sturm bisection,
/// ascending.  diag has n entries, off has n-1.
std::vector<Real> symtridiag_eigenvalues(const std::vector<Real>& diag,
                                         const std::vector<Real>& off);

}  // namespace sbethe
