#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace v2x {

/// Simulation time in milliseconds. One TTI is one millisecond.
using Tti = std::int64_t;

/// Discrete-event kernel. Events fire in (time, insertion order) order and the
/// clock never moves backwards.
class EventQueue
{
public:
    using Handler = std::function<void()>;

    struct Handle
    {
        Tti time = 0;
        std::uint64_t sequence = 0;
    };

    Tti now() const noexcept { return now_; }

    /// Throws std::invalid_argument when `time` lies before now().
    Handle schedule(Tti time, Handler handler);

    /// Executes the earliest pending event. Returns false when the queue is empty.
    bool step();

    /// Executes every pending event with time <= `until`, then advances the
    /// clock to `until`.
    void run_until(Tti until);

    std::size_t pending() const noexcept { return heap_.size(); }
    std::uint64_t executed() const noexcept { return executed_; }

private:
    struct Entry
    {
        Tti time;
        std::uint64_t sequence;
        Handler handler;
    };
    struct Later
    {
        bool operator()(const Entry& a, const Entry& b) const noexcept
        {
            if (a.time != b.time)
                return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    Tti now_ = 0;
    std::uint64_t next_sequence_ = 0;
    std::uint64_t executed_ = 0;
};

} // namespace v2x
