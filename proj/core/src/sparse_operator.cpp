#include "fluxqpt/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                             double hermitian_tol) {
  if (!is_power_of_two(dim)) {
    throw Error(ErrorCategory::dimension,
                "operator dimension " + std::to_string(dim) + " is not a power of two");
  }
  for (const auto& t : triplets) {
    if (t.row >= dim || t.col >= dim) {
      throw Error(ErrorCategory::dimension, "triplet index out of range for dimension " +
                                                std::to_string(dim));
    }
  }
  // Stable sort keeps the summation order of duplicates deterministic.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseOperator op;
  op.dim_ = dim;
  op.row_offsets_.assign(dim + 1, 0);
  op.columns_.reserve(triplets.size());
  op.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const std::size_t row = triplets[k].row;
    const std::size_t col = triplets[k].col;
    Complex sum{0.0, 0.0};
    while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col) {
      sum += triplets[k].value;
      ++k;
    }
    if (sum == Complex{0.0, 0.0}) continue;
    op.columns_.push_back(col);
    op.values_.push_back(sum);
    op.row_offsets_[row + 1] += 1;
  }
  for (std::size_t r = 0; r < dim; ++r) op.row_offsets_[r + 1] += op.row_offsets_[r];

  const double herm = op.hermiticity_error();
  if (herm > hermitian_tol) {
    throw Error(ErrorCategory::dimension,
                "operator is not Hermitian (max |H - H^dagger| = " + std::to_string(herm) + ")");
  }
  return op;
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  std::vector<Triplet> diag;
  diag.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) diag.push_back({i, i, 1.0});
  return from_triplets(dim, std::move(diag));
}

SparseOperator SparseOperator::zero(std::size_t dim) { return from_triplets(dim, {}); }

Complex SparseOperator::at(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) {
    throw Error(ErrorCategory::dimension, "operator index out of range");
  }
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return {0.0, 0.0};
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

double SparseOperator::hermiticity_error() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const Complex mirror = at(columns_[k], r);
      worst = std::max(worst, std::abs(values_[k] - std::conj(mirror)));
    }
  }
  return worst;
}

double SparseOperator::gershgorin_radius() const {
  double radius = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    double row_sum = 0.0;
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      row_sum += std::abs(values_[k]);
    }
    radius = std::max(radius, row_sum);
  }
  return radius;
}

bool SparseOperator::commutes_with_global_flip(double tol) const {
  if (dim_ < 2) return false;
  const std::size_t mask = dim_ - 1;
  const double scale = std::max(1.0, gershgorin_radius());
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      if (std::abs(at(r ^ mask, columns_[k] ^ mask) - values_[k]) > tol * scale) return false;
    }
  }
  return true;
}

bool SparseOperator::is_real() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Complex& v) { return v.imag() == 0.0; });
}

DenseMatrix SparseOperator::to_dense() const {
  DenseMatrix dense = DenseMatrix::Zero(static_cast<Eigen::Index>(dim_),
                                        static_cast<Eigen::Index>(dim_));
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(columns_[k])) = values_[k];
    }
  }
  return dense;
}

void apply(const SparseOperator& op, std::span<const Complex> x, std::span<Complex> y) {
  if (x.size() != op.dim() || y.size() != op.dim()) {
    throw Error(ErrorCategory::dimension,
                "matvec dimension mismatch: operator " + std::to_string(op.dim()) +
                    ", input " + std::to_string(x.size()) + ", output " +
                    std::to_string(y.size()));
  }
  const auto offsets = op.row_offsets();
  const auto cols = op.columns();
  const auto vals = op.values();
  for (std::size_t r = 0; r < op.dim(); ++r) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) acc += vals[k] * x[cols[k]];
    y[r] = acc;
  }
}

std::vector<Complex> apply(const SparseOperator& op, std::span<const Complex> x) {
  std::vector<Complex> y(op.dim());
  fluxqpt::apply(op, x, y);
  return y;
}

double expectation(const SparseOperator& op, std::span<const Complex> x) {
  const auto hx = fluxqpt::apply(op, x);
  return inner(x, hx).real();
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCategory::dimension, "inner product of vectors with different lengths");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const Complex> a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace fluxqpt
