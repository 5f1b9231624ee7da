#include "kac/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace kac {

unsigned thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("KAC_SPECTRAL_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1)
                n = std::min(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // unparsable value: keep the hardware default
        }
    }
    return n;
}

void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body)
{
    if (end <= begin)
        return;
    const std::size_t count = end - begin;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{begin};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < end; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace kac
