#pragma once

#include <chrono>
#include <stdexcept>

namespace pac {

class TimedOut : public std::runtime_error {
public:
    TimedOut() : std::runtime_error("time limit exceeded") {}
};

/// Cooperative time limit, polled between candidate checks and rounds.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(std::chrono::milliseconds budget) : end_(Clock::now() + budget), armed_(true) {}

    bool expired() const { return armed_ && Clock::now() >= end_; }
    void check() const
    {
        if (expired())
            throw TimedOut();
    }

private:
    Clock::time_point end_{};
    bool armed_ = false;
};

} // namespace pac
