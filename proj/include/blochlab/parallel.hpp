#pragma once

// Deterministic data-parallel helpers.  Work is split into a fixed number of
// chunks independent of the thread count and partial results are combined in
// chunk order, so results are bit-identical for any --threads value.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace blochlab {

// global cap used by the CLI --threads flag; 0 means hardware concurrency
void set_thread_cap(int threads);
int thread_cap();

// Runs worker(chunk_index) for chunk_index in [0, chunks) on the available
// threads; blocks until done.
void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& worker);

// Sum of term(i) for i in [0, n), accumulated per fixed-size chunk and then
// combined in chunk order.
double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term);
std::complex<double> chunked_sum_complex(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term);

// Per-chunk block evaluation: worker fills [begin, end) of a caller-owned
// buffer. Deterministic because the split does not depend on thread count.
void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t begin, std::size_t end)>& worker);

}  // namespace blochlab
