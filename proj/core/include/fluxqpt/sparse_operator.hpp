#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fluxqpt {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

/// One (row, column, value) contribution. Duplicates are summed on assembly.
struct Triplet {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Hermitian operator on a 2^n dimensional spin space, stored row-compressed.
///
/// Column indices are sorted within each row and duplicates are merged, so the
/// diagonal of every row occupies a single slot. Instances are immutable once
/// built and may be shared freely between threads.
class SparseOperator {
 public:
  SparseOperator() = default;

  /// Assembles from unordered triplets. Throws Error(dimension) if `dim` is not
  /// a power of two, an index is out of range, or the result is not Hermitian
  /// within `hermitian_tol`.
  static SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                      double hermitian_tol = 1e-12);

  static SparseOperator identity(std::size_t dim);
  static SparseOperator zero(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> columns() const noexcept { return columns_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Entry lookup by binary search in the row; zero when absent.
  Complex at(std::size_t row, std::size_t col) const;

  /// Largest |H_rc - conj(H_cr)| over all stored entries.
  double hermiticity_error() const;

  /// Max absolute row sum, an upper bound on the spectral radius.
  double gershgorin_radius() const;

  /// True when every entry satisfies H[~r][~c] == H[r][c] with ~ the global
  /// bit flip, i.e. the operator commutes with the product of all sigma^x.
  bool commutes_with_global_flip(double tol = 1e-14) const;

  /// True if every stored value has zero imaginary part.
  bool is_real() const;

  DenseMatrix to_dense() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> columns_;
  std::vector<Complex> values_;
};

/// y = op * x. Throws Error(dimension) on size mismatch. Each row is summed in
/// storage order, so the result is independent of how rows are partitioned.
void apply(const SparseOperator& op, std::span<const Complex> x, std::span<Complex> y);
std::vector<Complex> apply(const SparseOperator& op, std::span<const Complex> x);

/// <x|op|x> (real part; the operator is Hermitian).
double expectation(const SparseOperator& op, std::span<const Complex> x);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> a);

/// True if `dim` is a nonzero power of two.
constexpr bool is_power_of_two(std::size_t dim) noexcept {
  return dim != 0 && (dim & (dim - 1)) == 0;
}

}  // namespace fluxqpt
