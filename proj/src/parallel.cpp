#include "blochlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace blochlab {

namespace {
std::atomic<int> g_thread_cap{0};

int effective_threads() {
    int cap = g_thread_cap.load();
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (cap <= 0) return hw;
    return std::min(cap, hw);
}
}  // namespace

void set_thread_cap(int threads) { g_thread_cap.store(threads); }
int thread_cap() { return effective_threads(); }

void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& worker) {
    if (chunks == 0) return;
    const int nt = std::min<std::size_t>(effective_threads(), chunks);
    if (nt <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) worker(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                worker(c);
            }
        });
    }
    for (auto& th : pool) th.join();
}

namespace {
constexpr std::size_t kChunkTarget = 256;

std::size_t chunk_count(std::size_t n) {
    return std::min<std::size_t>(kChunkTarget, n == 0 ? 1 : n);
}
}  // namespace

double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    if (n == 0) return 0.0;
    const std::size_t chunks = chunk_count(n);
    std::vector<double> partial(chunks, 0.0);
    run_chunks(chunks, [&](std::size_t c) {
        const std::size_t b = n * c / chunks;
        const std::size_t e = n * (c + 1) / chunks;
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) acc += term(i);
        partial[c] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

std::complex<double> chunked_sum_complex(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term) {
    if (n == 0) return {0.0, 0.0};
    const std::size_t chunks = chunk_count(n);
    std::vector<std::complex<double>> partial(chunks, {0.0, 0.0});
    run_chunks(chunks, [&](std::size_t c) {
        const std::size_t b = n * c / chunks;
        const std::size_t e = n * (c + 1) / chunks;
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = b; i < e; ++i) acc += term(i);
        partial[c] = acc;
    });
    std::complex<double> total{0.0, 0.0};
    for (auto v : partial) total += v;
    return total;
}

void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& worker) {
    if (n == 0) return;
    const std::size_t chunks = chunk_count(n);
    run_chunks(chunks, [&](std::size_t c) {
        worker(n * c / chunks, n * (c + 1) / chunks);
    });
}

}  // namespace blochlab
