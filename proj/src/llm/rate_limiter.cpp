#include "metaharvest/llm/rate_limiter.hpp"

#include <algorithm>
#include <thread>

namespace metaharvest::llm {

TokenBucket::TokenBucket(double requests_per_minute, double burst)
    : rate_per_second_(requests_per_minute / 60.0),
      capacity_(std::max(1.0, burst)),
      tokens_(capacity_),
      last_(std::chrono::steady_clock::now())
{
}

void TokenBucket::refill(std::chrono::steady_clock::time_point now)
{
    std::chrono::duration<double> const elapsed = now - last_;
    tokens_ = std::min(capacity_, tokens_ + elapsed.count() * rate_per_second_);
    last_ = now;
}

void TokenBucket::acquire()
{
    if (rate_per_second_ <= 0) {
        return;
    }
    std::chrono::duration<double> wait{0};
    {
        std::lock_guard lock(mutex_);
        refill(std::chrono::steady_clock::now());
        tokens_ -= 1.0;
        if (tokens_ < 0) {
            wait = std::chrono::duration<double>(-tokens_ / rate_per_second_);
        }
    }
    if (wait.count() > 0) {
        std::this_thread::sleep_for(wait);
    }
}

auto TokenBucket::pending_wait() -> std::chrono::nanoseconds
{
    if (rate_per_second_ <= 0) {
        return std::chrono::nanoseconds{0};
    }
    std::lock_guard lock(mutex_);
    refill(std::chrono::steady_clock::now());
    if (tokens_ >= 1.0) {
        return std::chrono::nanoseconds{0};
    }
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double>((1.0 - tokens_) / rate_per_second_));
}

}  // namespace metaharvest::llm
