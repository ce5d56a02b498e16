#pragma once

#include <cstddef>
#include <vector>

#include "timerev/grid_field.hpp"

namespace timerev::detail {

// Unnormalized DFT with indices centered on n/2 along every axis:
//   out[m] = sum_j in[j] exp(sign * 2*pi*i * (m - n/2)(j - n/2) / n)
// Data is row-major with nx the fast axis; ny == 1 for 1-D.
void centered_dft(std::vector<Complex>& data, std::size_t nx, std::size_t ny, int sign);

}  // namespace timerev::detail
