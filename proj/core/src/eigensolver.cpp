#include "fluxqpt/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

std::string_view to_string(SolverMethod method) noexcept {
  switch (method) {
    case SolverMethod::automatic: return "automatic";
    case SolverMethod::dense: return "dense";
    case SolverMethod::lanczos: return "lanczos";
  }
  return "automatic";
}

SparseOperator restrict_to_sector(const SparseOperator& h, Parity parity) {
  if (parity == Parity::none) return h;
  const std::size_t half = h.dim() / 2;
  const std::size_t mask = h.dim() - 1;
  const double sign = static_cast<double>(static_cast<int>(parity));
  const auto offsets = h.row_offsets();
  const auto cols = h.columns();
  const auto vals = h.values();
  std::vector<Triplet> triplets;
  triplets.reserve(offsets[half]);
  for (std::size_t b = 0; b < half; ++b) {
    for (std::size_t k = offsets[b]; k < offsets[b + 1]; ++k) {
      const std::size_t c = cols[k];
      if (c < half) {
        triplets.push_back({b, c, vals[k]});
      } else {
        triplets.push_back({b, c ^ mask, sign * vals[k]});
      }
    }
  }
  return SparseOperator::from_triplets(half, std::move(triplets), 1e-10);
}

std::vector<Complex> embed_from_sector(std::span<const Complex> sector_vector, Parity parity) {
  if (parity == Parity::none) return {sector_vector.begin(), sector_vector.end()};
  const std::size_t half = sector_vector.size();
  const std::size_t mask = 2 * half - 1;
  const double sign = static_cast<double>(static_cast<int>(parity));
  const double scale = 1.0 / std::sqrt(2.0);
  std::vector<Complex> full(2 * half);
  for (std::size_t b = 0; b < half; ++b) {
    full[b] = scale * sector_vector[b];
    full[b ^ mask] = sign * scale * sector_vector[b];
  }
  return full;
}

std::vector<Complex> project_to_sector(std::span<const Complex> full_vector, Parity parity) {
  if (parity == Parity::none) return {full_vector.begin(), full_vector.end()};
  const std::size_t half = full_vector.size() / 2;
  const std::size_t mask = full_vector.size() - 1;
  const double sign = static_cast<double>(static_cast<int>(parity));
  const double scale = 1.0 / std::sqrt(2.0);
  std::vector<Complex> out(half);
  for (std::size_t b = 0; b < half; ++b) {
    out[b] = scale * (full_vector[b] + sign * full_vector[b ^ mask]);
  }
  return out;
}

namespace {

struct Eigenpair {
  double value = 0.0;
  std::vector<Complex> vector;  // sector coordinates
};

using Vector = std::vector<Complex>;

double residual_norm(const SparseOperator& a, std::span<const Complex> v, double value) {
  auto av = fluxqpt::apply(a, v);
  for (std::size_t i = 0; i < av.size(); ++i) av[i] -= value * v[i];
  return norm(av);
}

template <typename Scalar>
using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using DenseCols = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CsrMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, std::ptrdiff_t>;

template <typename Scalar>
CsrMatrix<Scalar> to_csr(const SparseOperator& op) {
  std::vector<Eigen::Triplet<Scalar, std::ptrdiff_t>> triplets;
  triplets.reserve(op.nonzeros());
  const auto offsets = op.row_offsets();
  const auto cols = op.columns();
  const auto vals = op.values();
  for (std::size_t r = 0; r + 1 < offsets.size(); ++r) {
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      Scalar v;
      if constexpr (std::is_same_v<Scalar, double>) {
        v = vals[k].real();
      } else {
        v = vals[k];
      }
      triplets.emplace_back(static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(cols[k]), v);
    }
  }
  const auto n = static_cast<std::ptrdiff_t>(op.dim());
  CsrMatrix<Scalar> m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

// Two passes of classical Gram-Schmidt against the first `count` columns of `q`.
template <typename Scalar>
void orthogonalize(DenseVec<Scalar>& x, const DenseCols<Scalar>& q, Eigen::Index count) {
  if (count == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const DenseVec<Scalar> c = q.leftCols(count).adjoint() * x;
    x.noalias() -= q.leftCols(count) * c;
  }
}

template <typename Scalar>
DenseVec<Scalar> random_vector(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseVec<Scalar> v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v(i) = gauss(rng);
    } else {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v(i) = Complex{re, im};
    }
  }
  return v;
}

/// Lowest eigenpair of `a` restricted to the orthogonal complement of the
/// columns of `locked`. Full reorthogonalization; explicit restart from the
/// current Ritz vector when the Krylov space reaches `krylov_dim` without
/// converging.
template <typename Scalar>
std::pair<double, DenseVec<Scalar>> lanczos_lowest(const CsrMatrix<Scalar>& a, double radius,
                                                   const DenseCols<Scalar>& locked,
                                                   const DenseVec<Scalar>* start,
                                                   const EigenOptions& options,
                                                   std::size_t& matvecs) {
  const Eigen::Index dim = a.rows();
  const auto n_locked = locked.cols();
  radius = std::max(radius, std::numeric_limits<double>::min());
  const double target = options.tolerance * radius;
  const auto krylov = std::max<Eigen::Index>(
      2, std::min(static_cast<Eigen::Index>(options.krylov_dim), dim - n_locked));

  DenseVec<Scalar> v0;
  if (start != nullptr) {
    v0 = *start;
    orthogonalize(v0, locked, n_locked);
  }
  if (v0.size() == 0 || v0.norm() < 1e-8) {
    v0 = random_vector<Scalar>(dim, options.seed + 7919 * static_cast<std::uint64_t>(n_locked));
    orthogonalize(v0, locked, n_locked);
  }

  double best_residual = std::numeric_limits<double>::infinity();
  DenseCols<Scalar> basis(dim, krylov);
  DenseVec<Scalar> w(dim);
  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    basis.col(0) = v0 / v0.norm();
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd ritz;

    for (Eigen::Index j = 0;; ++j) {
      w.noalias() = a * basis.col(j);
      ++matvecs;
      const double aj = std::real(basis.col(j).dot(w));
      alpha.push_back(aj);
      w -= aj * basis.col(j);
      if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
      orthogonalize(w, locked, n_locked);
      orthogonalize(w, basis, j + 1);
      const double bj = w.norm();

      const bool exhausted = bj < 1e-13 * radius;
      const bool full = j + 1 >= krylov;
      if (exhausted || full || j % 4 == 3) {
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
        for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        ritz = tri.eigenvectors().col(0);
        const double estimate = bj * std::abs(ritz(m - 1));
        if (exhausted || full || estimate < 0.1 * target) break;
      }
      beta.push_back(bj);
      basis.col(j + 1) = w / bj;
    }

    DenseVec<Scalar> x = basis.leftCols(ritz.size()) * ritz.cast<Scalar>();
    orthogonalize(x, locked, n_locked);
    x /= x.norm();
    DenseVec<Scalar> ax = a * x;
    const double theta = std::real(x.dot(ax));
    ++matvecs;
    const double residual = (ax - theta * x).norm();
    best_residual = std::min(best_residual, residual);
    if (residual < target) return {theta, std::move(x)};
    v0 = std::move(x);
  }
  throw Error(ErrorCategory::convergence,
              "Lanczos did not converge after " + std::to_string(options.max_restarts) +
                  " restarts; residual " + std::to_string(best_residual) + " vs target " +
                  std::to_string(target));
}

template <typename Scalar>
Vector to_complex(const DenseVec<Scalar>& v) {
  Vector out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = Complex(v(i));
  return out;
}

template <typename Scalar>
DenseVec<Scalar> from_complex(const Vector& v) {
  DenseVec<Scalar> out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      out(static_cast<Eigen::Index>(i)) = v[i].real();
    } else {
      out(static_cast<Eigen::Index>(i)) = v[i];
    }
  }
  return out;
}

/// Lowest `count` pairs by successive deflation.
template <typename Scalar>
void lanczos_pairs(const SparseOperator& op, std::vector<Eigenpair>& pairs, std::size_t count,
                   const Vector* warm, const EigenOptions& options, std::size_t& matvecs) {
  const auto a = to_csr<Scalar>(op);
  const double radius = op.gershgorin_radius();
  DenseCols<Scalar> locked(a.rows(), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    locked.col(static_cast<Eigen::Index>(c)) = from_complex<Scalar>(pairs[c].vector);
  }
  std::optional<DenseVec<Scalar>> start;
  if (pairs.empty() && warm != nullptr) start = from_complex<Scalar>(*warm);
  while (pairs.size() < count) {
    auto [value, vec] =
        lanczos_lowest<Scalar>(a, radius, locked, start ? &*start : nullptr, options, matvecs);
    start.reset();
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    locked.col(locked.cols() - 1) = vec;
    pairs.push_back({value, to_complex<Scalar>(vec)});
  }
}

/// Lowest `count` eigenpairs of one sector operator.
class SectorSolver {
 public:
  SectorSolver(SparseOperator op, Parity parity, bool dense, const EigenOptions& options)
      : op_(std::move(op)), parity_(parity), dense_(dense), options_(options) {}

  std::size_t dim() const { return op_.dim(); }
  Parity parity() const { return parity_; }
  std::size_t matvecs() const { return matvecs_; }
  const std::vector<Eigenpair>& pairs() const { return pairs_; }

  void ensure(std::size_t count, const Vector* warm) {
    count = std::min(count, op_.dim());
    if (pairs_.size() >= count) return;
    if (dense_) {
      solve_dense();
      return;
    }
    if (op_.is_real()) {
      lanczos_pairs<double>(op_, pairs_, count, warm, options_, matvecs_);
    } else {
      lanczos_pairs<Complex>(op_, pairs_, count, warm, options_, matvecs_);
    }
    std::stable_sort(pairs_.begin(), pairs_.end(),
                     [](const Eigenpair& a, const Eigenpair& b) { return a.value < b.value; });
  }

 private:
  void solve_dense() {
    const auto n = static_cast<Eigen::Index>(op_.dim());
    pairs_.clear();
    if (op_.is_real()) {
      const Eigen::MatrixXd real = op_.to_dense().real();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real);
      for (Eigen::Index i = 0; i < n; ++i) {
        Vector v(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = solver.eigenvectors()(r, i);
        pairs_.push_back({solver.eigenvalues()(i), std::move(v)});
      }
    } else {
      Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(op_.to_dense());
      for (Eigen::Index i = 0; i < n; ++i) {
        Vector v(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = solver.eigenvectors()(r, i);
        pairs_.push_back({solver.eigenvalues()(i), std::move(v)});
      }
    }
  }

  SparseOperator op_;
  Parity parity_;
  bool dense_;
  EigenOptions options_;
  std::vector<Eigenpair> pairs_;
  std::size_t matvecs_ = 0;
};

}  // namespace

EigenResult ground_state(const SparseOperator& h, std::size_t k, const EigenOptions& options) {
  if (k == 0 || k > h.dim()) {
    throw Error(ErrorCategory::dimension, "requested " + std::to_string(k) +
                                              " eigenpairs of a " + std::to_string(h.dim()) +
                                              "-dimensional operator");
  }
  const bool dense = options.method == SolverMethod::dense ||
                     (options.method == SolverMethod::automatic &&
                      h.dim() <= (std::size_t{1} << kDenseMaxSites));
  const bool symmetric =
      options.use_flip_symmetry && h.dim() >= 2 && h.commutes_with_global_flip();

  std::vector<Parity> sectors;
  if (!symmetric) {
    sectors = {Parity::none};
  } else if (options.parity && *options.parity != Parity::none) {
    sectors = {*options.parity};
  } else {
    sectors = {Parity::even, Parity::odd};
  }

  std::vector<SectorSolver> solvers;
  std::vector<Vector> warm;
  for (const auto parity : sectors) {
    solvers.emplace_back(restrict_to_sector(h, parity), parity, dense, options);
    warm.push_back(options.warm_start != nullptr
                       ? project_to_sector(options.warm_start->amplitudes(), parity)
                       : Vector{});
  }

  // Lowest level of every sector first, then k+1 in the ground sector (for the
  // sector gap) and k in the rest.
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    solvers[s].ensure(1, warm[s].empty() ? nullptr : &warm[s]);
  }
  std::size_t ground_sector = 0;
  for (std::size_t s = 1; s < solvers.size(); ++s) {
    if (solvers[s].pairs()[0].value < solvers[ground_sector].pairs()[0].value) ground_sector = s;
  }
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    solvers[s].ensure(s == ground_sector ? k + 1 : k, nullptr);
  }

  struct Level {
    double value;
    std::size_t sector;
    std::size_t index;
  };
  std::vector<Level> levels;
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    const auto& pairs = solvers[s].pairs();
    const std::size_t keep = std::min(pairs.size(), s == ground_sector ? k + 1 : k);
    for (std::size_t i = 0; i < keep; ++i) levels.push_back({pairs[i].value, s, i});
  }
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return a.value < b.value; });
  if (levels.size() < k) {
    throw Error(ErrorCategory::dimension, "sector restriction leaves fewer than k levels");
  }

  EigenResult result;
  result.method_used = dense ? SolverMethod::dense : SolverMethod::lanczos;
  const double inf = std::numeric_limits<double>::infinity();
  result.gap = levels.size() > 1 ? levels[1].value - levels[0].value : inf;
  const auto& ground_pairs = solvers[ground_sector].pairs();
  result.sector_gap = ground_pairs.size() > 1 ? ground_pairs[1].value - ground_pairs[0].value : inf;
  result.degenerate_flag = result.sector_gap < options.gap_tol;

  for (std::size_t i = 0; i < k; ++i) {
    const auto& level = levels[i];
    const auto& pair = solvers[level.sector].pairs()[level.index];
    auto full = embed_from_sector(pair.vector, solvers[level.sector].parity());
    auto state = fix_gauge(full);
    result.max_residual =
        std::max(result.max_residual, residual_norm(h, state.amplitudes(), pair.value));
    result.eigenvalues.push_back(pair.value);
    result.eigenvectors.push_back(std::move(state));
    result.parities.push_back(solvers[level.sector].parity());
  }
  for (const auto& solver : solvers) result.iterations += solver.matvecs();
  return result;
}

}  // namespace fluxqpt
