#pragma once

#include <algorithm>
#include <atomic>
#include <thread>

namespace frobdist::symplectic {

/// Fixed block count for census work splitting; independent of worker count.
inline constexpr std::size_t kCensusBlocks = 64;

template <class Acc, class Make, class Visit>
std::vector<Acc> census_blocks(u32 ell, int g, const CensusOptions &opts, Make make, Visit visit)
{
    check_census_supported(ell, g, opts);
    const SymplecticBasisEnumerator enumerator(ell, g);
    const std::size_t total = enumerator.first_vector_count();
    const std::size_t blocks = std::min(kCensusBlocks, total);
    std::vector<Acc> results;
    results.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        results.push_back(make());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t b = next++; b < blocks; b = next++) {
            const std::size_t begin = total * b / blocks;
            const std::size_t end = total * (b + 1) / blocks;
            Acc &acc = results[b];
            enumerator.run(begin, end, [&](const SympMatrix &m) { visit(acc, m); });
        }
    };
    const unsigned jobs = std::max(1U, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    return results;
}

} // namespace frobdist::symplectic
