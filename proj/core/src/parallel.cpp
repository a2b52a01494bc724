#include "tabpred/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tabpred {

namespace {
std::atomic<unsigned> g_threads{1};
}

unsigned default_thread_count() { return g_threads.load(); }

void set_default_thread_count(unsigned n) { g_threads.store(n == 0 ? 1 : n); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads) {
    if (threads == 0) threads = default_thread_count();
    if (threads > count) threads = static_cast<unsigned>(count);

    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t begin = count * t / threads;
        std::size_t end = count * (t + 1) / threads;
        workers.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace tabpred
