#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ballpdf {

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t count = 0;
    unsigned threads = 1;
};

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t chunk_size = 65536;

// SplitMix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// counter-based generator: output i is mix64(key + (i+1) * golden)
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream + golden_gamma))) {}

    std::uint64_t next_u64()
    {
        ++counter_;
        return mix64(key_ + counter_ * golden_gamma);
    }

    // uniform on the open interval (0,1)
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Box-Muller, second variate cached
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// stream for chunk c of a logical stream
inline CounterRng chunk_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk)
{
    return CounterRng(seed, (stream << 32) + chunk);
}

// run fn(chunk_index, first_item, item_count) for every chunk; results must be merged by chunk index
template <class F>
void for_each_chunk(std::uint64_t total, unsigned threads, F&& fn, std::uint64_t size = chunk_size)
{
    const std::uint64_t chunks = (total + size - 1) / size;
    auto body = [&](std::uint64_t c) { fn(c, c * size, std::min(size, total - c * size)); };
    threads = std::max(1u, threads);
    if (threads == 1 || chunks <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::uint64_t>(threads, chunks); ++t)
        pool.emplace_back([&] {
            for (std::uint64_t c = next++; c < chunks; c = next++) {
                try {
                    body(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = chunks;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ballpdf
