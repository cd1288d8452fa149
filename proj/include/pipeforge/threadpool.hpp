#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pipeforge {

// Fork-join pool for index-addressed task batches. Work items are pure
// functions of their index and results are written to index-addressed slots
// by the caller, so scheduling order never affects output. The calling thread
// participates in draining the batch; parallel_for issued from inside a worker
// runs inline (no nesting).
class ThreadPool {
public:
    // threads = total concurrency including the calling thread; 1 = serial
    explicit ThreadPool(unsigned threads);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned concurrency() const { return workers_.size() + 1; }

    // Runs body(0..n-1). Exceptions are collected per index; the one with the
    // lowest index is rethrown after the batch completes.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

private:
    struct Batch;
    void worker_loop();

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable wake_;
    std::condition_variable done_;
    Batch* active_ = nullptr;
    std::uint64_t generation_ = 0;
    bool stopping_ = false;
};

}  // namespace pipeforge
