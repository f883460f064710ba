#include "fluxqpt/spin_network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

namespace {

constexpr std::size_t kMaxSites = 40;
// Working vectors assumed resident during an iterative solve.
constexpr std::size_t kWorkingVectors = 64;

void check_site_count(std::size_t n) {
  if (n == 0 || n > kMaxSites) {
    throw Error(ErrorCategory::config,
                "n: site count must be in [1, " + std::to_string(kMaxSites) + "], got " +
                    std::to_string(n));
  }
}

}  // namespace

std::string_view to_string(Topology topology) noexcept {
  switch (topology) {
    case Topology::triangle: return "triangle";
    case Topology::nn_nnn_chain: return "nn-nnn-chain";
    case Topology::custom: return "custom";
  }
  return "custom";
}

Topology parse_topology(std::string_view text) {
  if (text == "triangle") return Topology::triangle;
  if (text == "nn-nnn-chain" || text == "chain") return Topology::nn_nnn_chain;
  if (text == "custom") return Topology::custom;
  throw Error(ErrorCategory::config, "topology: unknown value '" + std::string(text) +
                                         "' (expected triangle, nn-nnn-chain or custom)");
}

SpinNetwork::SpinNetwork(std::size_t n, std::vector<Edge> edges, Topology topology)
    : n_(n), edges_(std::move(edges)), topology_(topology) {}

SpinNetwork SpinNetwork::triangle() { return SpinNetwork(3, {{0, 1}, {1, 2}, {0, 2}}, Topology::triangle); }

SpinNetwork SpinNetwork::nn_nnn_chain(std::size_t n) {
  check_site_count(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  for (std::size_t i = 0; i + 2 < n; ++i) edges.push_back({i, i + 2});
  return SpinNetwork(n, std::move(edges), Topology::nn_nnn_chain);
}

SpinNetwork SpinNetwork::custom(std::size_t n, std::vector<Edge> edges) {
  check_site_count(n);
  for (auto& e : edges) {
    if (e.i == e.j) {
      throw Error(ErrorCategory::config, "edges: self-loop on site " + std::to_string(e.i));
    }
    if (e.i >= n || e.j >= n) {
      throw Error(ErrorCategory::config, "edges: endpoint out of range for n = " +
                                             std::to_string(n));
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      if (edges[a] == edges[b]) {
        throw Error(ErrorCategory::config, "edges: duplicate edge (" + std::to_string(edges[a].i) +
                                               ", " + std::to_string(edges[a].j) + ")");
      }
    }
  }
  return SpinNetwork(n, std::move(edges), Topology::custom);
}

ControlParams ControlParams::uniform(const SpinNetwork& network, double epsilon, double delta,
                                     double j) {
  return ControlParams{std::vector<double>(network.size(), epsilon),
                       std::vector<double>(network.size(), delta),
                       std::vector<double>(network.edges().size(), j)};
}

std::size_t estimate_required_bytes(std::size_t n, std::size_t edge_count) {
  (void)edge_count;  // couplings collapse onto the diagonal
  if (n >= 8 * sizeof(std::size_t) - 8) return std::numeric_limits<std::size_t>::max();
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t per_row = (n + 1) * (sizeof(Complex) + sizeof(std::size_t)) +
                              sizeof(std::size_t) + kWorkingVectors * sizeof(Complex);
  if (dim > std::numeric_limits<std::size_t>::max() / per_row) {
    return std::numeric_limits<std::size_t>::max();
  }
  return dim * per_row;
}

std::size_t memory_budget_bytes() {
  constexpr std::size_t kDefault = std::size_t{2} << 30;
  const char* raw = std::getenv("FLUXQPT_MEMORY_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefault;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || !(value > 0.0)) {
    throw Error(ErrorCategory::config,
                "FLUXQPT_MEMORY_BUDGET: expected a positive byte count, got '" +
                    std::string(raw) + "'");
  }
  double scale = 1.0;
  switch (std::toupper(static_cast<unsigned char>(*end))) {
    case '\0': break;
    case 'K': scale = 1024.0; break;
    case 'M': scale = 1024.0 * 1024.0; break;
    case 'G': scale = 1024.0 * 1024.0 * 1024.0; break;
    default:
      throw Error(ErrorCategory::config,
                  "FLUXQPT_MEMORY_BUDGET: unknown suffix in '" + std::string(raw) + "'");
  }
  return static_cast<std::size_t>(value * scale);
}

SparseOperator build_hamiltonian(const SpinNetwork& network, const ControlParams& params,
                                 std::size_t budget_bytes) {
  const std::size_t n = network.size();
  const auto edges = network.edges();
  if (params.epsilon.size() != n || params.delta.size() != n || params.j.size() != edges.size()) {
    throw Error(ErrorCategory::dimension,
                "control parameters do not match network: expected " + std::to_string(n) +
                    " sites and " + std::to_string(edges.size()) + " couplings, got eps=" +
                    std::to_string(params.epsilon.size()) + " delta=" +
                    std::to_string(params.delta.size()) + " j=" + std::to_string(params.j.size()));
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(params.epsilon.begin(), params.epsilon.end(), finite) ||
      !std::all_of(params.delta.begin(), params.delta.end(), finite) ||
      !std::all_of(params.j.begin(), params.j.end(), finite)) {
    throw Error(ErrorCategory::config, "control parameters must be finite");
  }
  const std::size_t required = estimate_required_bytes(n, edges.size());
  if (required > budget_bytes) {
    throw Error(ErrorCategory::memory_budget,
                "n = " + std::to_string(n) + " requires about " + std::to_string(required) +
                    " bytes, above the memory budget of " + std::to_string(budget_bytes) +
                    " bytes (set FLUXQPT_MEMORY_BUDGET to raise it)");
  }

  const std::size_t dim = network.dim();
  std::vector<Triplet> triplets;
  triplets.reserve(dim * (n + 1));
  for (std::size_t b = 0; b < dim; ++b) {
    double diagonal = 0.0;
    for (std::size_t i = 0; i < n; ++i) diagonal -= params.epsilon[i] * spin_z(b, i);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      diagonal += params.j[e] * spin_z(b, edges[e].i) * spin_z(b, edges[e].j);
    }
    if (diagonal != 0.0) triplets.push_back({b, b, diagonal});
    for (std::size_t i = 0; i < n; ++i) {
      if (params.delta[i] != 0.0) triplets.push_back({b, b ^ (std::size_t{1} << i), -params.delta[i]});
    }
  }
  return SparseOperator::from_triplets(dim, std::move(triplets));
}

Axis parse_axis(std::string_view text) {
  if (text == "x") return Axis::x;
  if (text == "y") return Axis::y;
  if (text == "z") return Axis::z;
  throw Error(ErrorCategory::config, "axis: expected x, y or z, got '" + std::string(text) + "'");
}

SparseOperator build_pauli_sum(const SpinNetwork& network, Axis axis,
                               std::span<const double> weights) {
  const std::size_t n = network.size();
  if (weights.size() != n) {
    throw Error(ErrorCategory::dimension, "pauli sum needs " + std::to_string(n) +
                                              " weights, got " + std::to_string(weights.size()));
  }
  const std::size_t dim = network.dim();
  std::vector<Triplet> triplets;
  triplets.reserve(dim * n);
  for (std::size_t b = 0; b < dim; ++b) {
    double diagonal = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t flipped = b ^ (std::size_t{1} << i);
      switch (axis) {
        case Axis::z: diagonal += weights[i] * spin_z(b, i); break;
        case Axis::x: triplets.push_back({flipped, b, weights[i]}); break;
        case Axis::y:
          // sigma^y |up> = i |down>, sigma^y |down> = -i |up>
          triplets.push_back({flipped, b, Complex{0.0, weights[i] * spin_z(b, i)}});
          break;
      }
    }
    if (axis == Axis::z && diagonal != 0.0) triplets.push_back({b, b, diagonal});
  }
  return SparseOperator::from_triplets(dim, std::move(triplets));
}

int basis_moment(std::size_t basis_index, std::size_t n) noexcept {
  int moment = 0;
  for (std::size_t i = 0; i < n; ++i) moment += spin_z(basis_index, i);
  return moment;
}

std::string basis_label(std::size_t basis_index, std::size_t n) {
  std::string label(n, 'u');
  for (std::size_t i = 0; i < n; ++i) {
    if (spin_z(basis_index, i) < 0) label[i] = 'd';
  }
  return label;
}

}  // namespace fluxqpt
