// constants.hpp: integer constants of the trace-norm bound.

#pragma once

#include <cstdint>

namespace spt {

// a_1 = 2; a_k = a_{k-1} + a_{k/2} (k even), a_{k-1} + a_{(k-1)/2} (k >= 3 odd).
std::int64_t a_sequence(int n);

// 1 + floor(log2 n): number of dyadic root levels needed at order n.
int j_of(int n);

}  // namespace spt
