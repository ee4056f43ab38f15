#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace dlas {

/// Single-consumer message queue: workers send, one consumer receives until
/// every producer has signalled completion.
template <typename T>
class Channel {
public:
    explicit Channel(int producers) : producers_(producers) {}

    void send(T value) {
        {
            std::lock_guard lock(m_);
            q_.push_back(std::move(value));
        }
        cv_.notify_one();
    }

    void producer_done() {
        {
            std::lock_guard lock(m_);
            --producers_;
        }
        cv_.notify_one();
    }

    std::optional<T> receive() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return !q_.empty() || producers_ == 0; });
        if (q_.empty()) return std::nullopt;
        T v = std::move(q_.front());
        q_.pop_front();
        return v;
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    std::deque<T> q_;
    int producers_;
};

/// Replica-parallel map: runs job(0..n-1) on `workers` threads, results
/// funnelled through a channel to the calling thread and re-ordered by
/// replica index, so the output is independent of scheduling.
template <typename R>
std::vector<R> parallel_replicas(long long n, int workers,
                                 const std::function<R(long long)>& job) {
    std::vector<R> out(static_cast<std::size_t>(n));
    if (workers <= 1 || n < 2) {
        for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = job(i);
        return out;
    }
    struct Msg {
        long long index;
        R value;
    };
    Channel<Msg> ch(workers);
    std::vector<std::thread> pool;
    std::mutex handoff;
    long long next = 0;
    std::exception_ptr failure;
    std::mutex failure_m;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                long long i;
                {
                    std::lock_guard lock(handoff);
                    if (next >= n) break;
                    i = next++;
                }
                try {
                    ch.send({i, job(i)});
                } catch (...) {
                    std::lock_guard lock(failure_m);
                    if (!failure) failure = std::current_exception();
                    break;
                }
            }
            ch.producer_done();
        });
    }
    while (auto msg = ch.receive()) out[static_cast<std::size_t>(msg->index)] = std::move(msg->value);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace dlas
