#pragma once

// Deterministic block-wise map/reduce used by every Monte Carlo and
// enumeration kernel.
//
// Work items [0, count) are split into fixed-size blocks. A block's partial
// result depends only on the item range (per-item RNG streams are derived from
// the item index), and partials are folded in ascending block order. The
// result is therefore bit-identical for any thread count and identical between
// the OpenMP and serial drivers; the serial driver is kept as the reference
// the parallel one is tested against.

#include <algorithm>
#include <cstdint>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pslab {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline constexpr std::int64_t kDefaultBlock = 1024;

// block_fn(first, last) -> block partial; fold(acc, partial) runs in ascending
// block order. The block partial type may differ from the accumulator.
template <class Acc, class BlockFn, class FoldFn>
Acc blocked_reduce_serial(std::int64_t count, std::int64_t block, Acc init, BlockFn&& block_fn,
                          FoldFn&& fold) {
    Acc acc = std::move(init);
    for (std::int64_t first = 0; first < count; first += block) {
        auto partial = block_fn(first, std::min(count, first + block));
        fold(acc, partial);
    }
    return acc;
}

template <class Acc, class BlockFn, class FoldFn>
Acc blocked_reduce_parallel(std::int64_t count, std::int64_t block, Acc init, BlockFn&& block_fn,
                            FoldFn&& fold) {
    using Block = std::invoke_result_t<BlockFn&, std::int64_t, std::int64_t>;
    if (count <= 0) return init;
    const std::int64_t n_blocks = (count + block - 1) / block;
    std::vector<Block> partials(static_cast<std::size_t>(n_blocks));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::int64_t first = b * block;
        partials[static_cast<std::size_t>(b)] = block_fn(first, std::min(count, first + block));
    }
    Acc acc = std::move(init);
    for (std::int64_t b = 0; b < n_blocks; ++b) fold(acc, partials[static_cast<std::size_t>(b)]);
    return acc;
}

template <class Acc, class BlockFn, class FoldFn>
Acc blocked_reduce(std::int64_t count, std::int64_t block, Acc init, BlockFn&& block_fn,
                   FoldFn&& fold, bool parallel = true) {
    if (parallel)
        return blocked_reduce_parallel(count, block, std::move(init), block_fn, fold);
    return blocked_reduce_serial(count, block, std::move(init), block_fn, fold);
}

}  // namespace pslab
