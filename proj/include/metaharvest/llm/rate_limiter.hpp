#pragma once

#include <chrono>
#include <mutex>

namespace metaharvest::llm {

/// Token bucket shared by every gateway client of a process. Callers reserve a
/// token and sleep off any deficit outside the lock, so waiting is FIFO-ish and
/// never blocks other threads' bookkeeping.
class TokenBucket {
  public:
    /// `requests_per_minute <= 0` disables limiting.
    explicit TokenBucket(double requests_per_minute, double burst = 1.0);

    void acquire();

    /// Time the next acquire() would wait, without reserving.
    [[nodiscard]] auto pending_wait() -> std::chrono::nanoseconds;

  private:
    void refill(std::chrono::steady_clock::time_point now);

    double rate_per_second_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
    std::mutex mutex_;
};

}  // namespace metaharvest::llm
