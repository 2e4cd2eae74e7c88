#include "spt/constants.hpp"

#include "spt/operator_core.hpp"

#include <vector>

namespace spt {

std::int64_t a_sequence(int n) {
    if (n < 1) {
        throw DomainError("a_sequence: n must be >= 1");
    }
    std::vector<std::int64_t> a(static_cast<std::size_t>(n) + 1, 0);
    a[1] = 2;
    for (int k = 2; k <= n; ++k) {
        a[k] = a[k - 1] + (k % 2 == 0 ? a[k / 2] : a[(k - 1) / 2]);
    }
    return a[n];
}

int j_of(int n) {
    if (n < 1) {
        throw DomainError("j_of: n must be >= 1");
    }
    int floor_log2 = 0;
    while ((n >> (floor_log2 + 1)) > 0) {
        ++floor_log2;
    }
    return 1 + floor_log2;
}

}  // namespace spt
