#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace degstein {

using u128 = unsigned __int128;

inline u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

// Compensated (Kahan) accumulator for long probability sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Runs fn(begin, end, chunk_index) over [0, count) split into fixed-size
// chunks. Chunk boundaries do not depend on the thread count, so any
// chunk-indexed output is reproducible for every value of `threads`.
inline void parallel_chunks(std::int64_t count, std::int64_t chunk_size, int threads,
                            const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    if (count <= 0) return;
    const std::int64_t n_chunks = (count + chunk_size - 1) / chunk_size;
    if (threads <= 1 || n_chunks == 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c)
            fn(c * chunk_size, std::min(count, (c + 1) * chunk_size), c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            fn(c * chunk_size, std::min(count, (c + 1) * chunk_size), c);
        }
    };
    std::vector<std::thread> pool;
    const int use = static_cast<int>(std::min<std::int64_t>(threads, n_chunks));
    pool.reserve(use);
    for (int t = 0; t < use; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace degstein
