#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "csearch/errors.hpp"

namespace csearch {

/// Ordered balanced split of [0,n) into four disjoint quarters. Node ids are
/// sorted ascending within each quarter; this fixes the row/column order of
/// every moment matrix built from it.
struct PartitionScheme {
    std::array<std::vector<int>, 4> quarters;
    std::vector<int> quarter_of;  // node -> quarter index
    int n = 0;

    int size(int q) const { return static_cast<int>(quarters[q].size()); }
};

/// Uniformly random balanced partition, deterministic per seed. Quarter
/// sizes differ by at most one.
PartitionScheme partition_nodes(int n, std::uint64_t seed);

}  // namespace csearch
