#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace jetreduce {

class Timeout : public std::runtime_error {
public:
    Timeout() : std::runtime_error("time budget exhausted") {}
};

/// Cooperative per-thread time budget. Long-running kernels poll
/// `check_deadline()`; installing a scope sets the budget for the current
/// thread and restores the previous one on exit.
class DeadlineScope {
public:
    explicit DeadlineScope(std::optional<std::chrono::steady_clock::duration> budget);
    ~DeadlineScope();
    DeadlineScope(const DeadlineScope&) = delete;
    DeadlineScope& operator=(const DeadlineScope&) = delete;

private:
    std::optional<std::chrono::steady_clock::time_point> previous_;
};

void check_deadline();

}  // namespace jetreduce
