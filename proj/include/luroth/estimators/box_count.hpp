// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "luroth/rational.hpp"

namespace luroth {

enum class BoxCountMode {
  // Cells meeting the union of all depth-n rate intervals.
  depth_union,
  // For grid m, only the intervals of depth <= n whose Q^(1+tau) lies in
  // [2^m, 2^(m+1)), i.e. the ones whose length matches the cell size.
  scale_band,
};

struct BoxCountFit {
  Rational tau;
  std::size_t depth = 0;
  BoxCountMode mode = BoxCountMode::depth_union;
  std::vector<unsigned> ms;
  std::vector<std::uint64_t> counts;  // exact number of cells (k 2^-m, (k+1) 2^-m] met
  double slope = 0;                   // least squares of log2 N(m) on m
  double intercept = 0;
  double residual = 0;  // RMS of the fit residuals
  // Set when some grid is finer than the longest depth-n rate interval, so
  // N(m) mostly counts intervals rather than resolving them.
  bool fine_grid = false;
};

// Grid exponents must be distinct, at least two of them, each at most 62.
BoxCountFit box_count_dim(const Rational& tau, std::size_t depth, std::vector<unsigned> ms,
                          BoxCountMode mode = BoxCountMode::depth_union, unsigned threads = 1);

}  // namespace luroth
