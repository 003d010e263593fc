#pragma once

#include <thread>

#include <spdlog/spdlog.h>

namespace metaharvest::llm {

template <typename F>
auto with_retries(RetryPolicy const& policy, F&& attempt) -> decltype(attempt(0))
{
    auto delay = policy.initial_backoff;
    for (int n = 0;; ++n) {
        try {
            return attempt(n);
        } catch (LlmError const& e) {
            if (!e.retryable() || n >= policy.max_retries) {
                throw;
            }
            spdlog::warn("llm call failed ({}), retry {}/{} in {} ms", e.what(), n + 1, policy.max_retries,
                         delay.count());
            if (policy.sleep) {
                policy.sleep(delay);
            } else {
                std::this_thread::sleep_for(delay);
            }
            delay = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay.count())
                                                                     * policy.multiplier));
        }
    }
}

}  // namespace metaharvest::llm
