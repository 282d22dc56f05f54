#include "csearch/partition.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace csearch {

PartitionScheme partition_nodes(int n, std::uint64_t seed) {
    if (n < 4) throw ParameterError("partition_nodes: need at least 4 nodes");

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    PartitionScheme part;
    part.n = n;
    part.quarter_of.assign(n, -1);
    const int base = n / 4;
    const int rem = n % 4;
    int pos = 0;
    for (int q = 0; q < 4; ++q) {
        const int size = base + (q < rem ? 1 : 0);
        part.quarters[q].assign(perm.begin() + pos, perm.begin() + pos + size);
        std::sort(part.quarters[q].begin(), part.quarters[q].end());
        for (int v : part.quarters[q]) part.quarter_of[v] = q;
        pos += size;
    }
    return part;
}

}  // namespace csearch
