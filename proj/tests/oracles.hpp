#pragma once

// Test-side oracles, independent of the library's own algorithms.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "netid/io_map.hpp"
#include "netid/network.hpp"

namespace netid::testing {

// Random network with FIR edges of degree <= 2. Zero-delay taps only go from
// lower to higher node numbers, so every loop carries a delay. Retries until
// internally stable.
inline NetworkModel random_fir_network(std::mt19937_64& rng, std::size_t nodes, double density = 0.5) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> tap(-0.4, 0.4);
  for (;;) {
    EdgeMap edges;
    for (std::size_t to = 1; to <= nodes; ++to) {
      for (std::size_t from = 1; from <= nodes; ++from) {
        if (to == from || coin(rng) > density) continue;
        std::vector<double> taps(3);
        taps[0] = from < to && coin(rng) < 0.5 ? tap(rng) : 0.0;
        taps[1] = tap(rng);
        taps[2] = coin(rng) < 0.5 ? tap(rng) : 0.0;
        edges.emplace(Edge{NodeId{static_cast<int>(to)}, NodeId{static_cast<int>(from)}}, RationalTF::fir(taps));
      }
    }
    if (edges.empty()) continue;
    NetworkModel model(nodes, std::move(edges));
    if (is_internally_stable(model)) return model;
  }
}

// First n samples of T_{out,in} by inverse DFT of true_T on `points` grid
// frequencies. Aliasing is below |slowest pole|^points.
inline std::vector<double> impulse_by_inverse_dft(const NetworkModel& model, NodeId out, NodeId in, std::size_t n,
                                                  std::size_t points) {
  const FreqResponseMatrix t = true_T(model, NodeSet{out}, NodeSet{in}, FreqGrid::equispaced(points));
  std::vector<double> h(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t p = 0; p < points; ++p) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(points);
      acc += t.samples[p](0, 0) * std::polar(1.0, w * static_cast<double>(k));
    }
    h[k] = acc.real() / static_cast<double>(points);
  }
  return h;
}

inline std::complex<double> fir_response(const std::vector<double>& taps, double omega) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * std::polar(1.0, -omega * static_cast<double>(k));
  return acc;
}

}  // namespace netid::testing
