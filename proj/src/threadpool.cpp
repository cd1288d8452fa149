#include "pipeforge/threadpool.hpp"

#include <atomic>
#include <cstdint>
#include <exception>

namespace pipeforge {

namespace {
thread_local bool t_inside_pool = false;
}

struct ThreadPool::Batch {
    std::size_t n = 0;
    const std::function<void(std::size_t)>* body = nullptr;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> finished{0};
    std::mutex err_mu;
    std::size_t err_index = SIZE_MAX;
    std::exception_ptr error;

    void run_available() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                (*body)(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (i < err_index) {
                    err_index = i;
                    error = std::current_exception();
                }
            }
            finished.fetch_add(1);
        }
    }
};

ThreadPool::ThreadPool(unsigned threads) {
    unsigned extra = threads > 1 ? threads - 1 : 0;
    workers_.reserve(extra);
    for (unsigned i = 0; i < extra; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lk(mu_);
        stopping_ = true;
    }
    wake_.notify_all();
    for (auto& t : workers_) t.join();
}

void ThreadPool::worker_loop() {
    t_inside_pool = true;
    std::uint64_t seen = 0;
    for (;;) {
        Batch* batch = nullptr;
        {
            std::unique_lock<std::mutex> lk(mu_);
            wake_.wait(lk, [&] { return stopping_ || (active_ != nullptr && generation_ != seen); });
            if (stopping_) return;
            batch = active_;
            seen = generation_;
        }
        batch->run_available();
        {
            std::lock_guard<std::mutex> lk(mu_);
            done_.notify_all();
        }
    }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    if (workers_.empty() || t_inside_pool || n == 1) {
        Batch serial;
        serial.n = n;
        serial.body = &body;
        serial.run_available();
        if (serial.error) std::rethrow_exception(serial.error);
        return;
    }

    Batch batch;
    batch.n = n;
    batch.body = &body;
    {
        std::lock_guard<std::mutex> lk(mu_);
        active_ = &batch;
        ++generation_;
    }
    wake_.notify_all();
    batch.run_available();
    {
        std::unique_lock<std::mutex> lk(mu_);
        done_.wait(lk, [&] { return batch.finished.load() == batch.n; });
        active_ = nullptr;
    }
    if (batch.error) std::rethrow_exception(batch.error);
}

}  // namespace pipeforge
