#pragma once

// Seeded generators and a minimal property runner. A failing case reports its
// index and seed so it can be replayed in isolation.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "blockspec/random_blocks.hpp"

namespace gen {

using blockspec::Rng;
using blockspec::cplx;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t size_in(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline cplx complex_in_box(Rng& rng, double r) { return {uniform(rng, -r, r), uniform(rng, -r, r)}; }

inline std::vector<double> increasing_weights(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> w(n);
  for (auto& v : w) v = uniform(rng, std::log(lo), std::log(hi));
  std::sort(w.begin(), w.end());
  for (std::size_t k = 0; k < n; ++k) w[k] = std::exp(w[k]) * (1.0 + 1e-9 * static_cast<double>(k));
  for (std::size_t k = 1; k < n; ++k) {
    if (!(w[k] > w[k - 1])) w[k] = std::nextafter(w[k - 1], INFINITY);
  }
  return w;
}

/// Runs `prop(rng, case_index)` for `cases` independent streams derived from `seed`.
inline void for_all(std::size_t cases, std::uint64_t seed, const std::function<void(Rng&, std::size_t)>& prop) {
  for (std::size_t k = 0; k < cases; ++k) {
    Rng rng(seed * 1000003ULL + k);
    CAPTURE(k);
    CAPTURE(seed);
    prop(rng, k);
  }
}

}  // namespace gen
