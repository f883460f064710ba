#pragma once

// Reference implementations built from Kronecker products of 2x2 Pauli
// matrices. They share no code with the library's bitwise constructions.

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix pauli(char axis) {
  Matrix m = Matrix::Zero(2, 2);
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Matrix::Identity(2, 2);
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Pauli on `site` of an n-site register. Site 0 is the least significant bit,
// so it is the rightmost factor of the Kronecker product.
inline Matrix site_op(std::size_t n, std::size_t site, char axis) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t k = n; k-- > 0;) out = kron(out, k == site ? pauli(axis) : pauli('1'));
  return out;
}

struct Coupling {
  std::size_t i;
  std::size_t j;
  double value;
};

inline Matrix ising(std::size_t n, const std::vector<double>& eps, const std::vector<double>& delta,
                    const std::vector<Coupling>& couplings) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix h = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    h -= eps[i] * site_op(n, i, 'z') + delta[i] * site_op(n, i, 'x');
  }
  for (const auto& c : couplings) h += c.value * site_op(n, c.i, 'z') * site_op(n, c.j, 'z');
  return h;
}

inline std::vector<Complex> random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(dim);
  double total = 0.0;
  for (auto& x : v) {
    x = Complex(g(rng), g(rng));
    total += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(total);
  return v;
}

inline Eigen::VectorXcd as_eigen(const std::vector<Complex>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// The six-term final state of the frustrated triangle, labels read site 0 first.
inline std::vector<Complex> six_term_state() {
  // basis index bits: 0 = up, 1 = down; site 0 is bit 0
  const auto index = [](const char* label) {
    std::size_t b = 0;
    for (std::size_t s = 0; s < 3; ++s) b |= std::size_t(label[s] == 'd') << s;
    return b;
  };
  std::vector<Complex> v(8, 0.0);
  const double a = 1.0 / std::sqrt(6.0);
  for (const char* l : {"ddu", "dud", "udd"}) v[index(l)] = a;
  for (const char* l : {"duu", "udu", "uud"}) v[index(l)] = -a;
  return v;
}

}  // namespace oracle
