#include "v2x/engine/event_queue.hpp"

#include <stdexcept>
#include <string>

namespace v2x {

EventQueue::Handle EventQueue::schedule(Tti time, Handler handler)
{
    if (time < now_)
        throw std::invalid_argument("cannot schedule event at t=" + std::to_string(time) +
                                    " ms, clock is at " + std::to_string(now_) + " ms");
    Handle h{time, next_sequence_++};
    heap_.push(Entry{time, h.sequence, std::move(handler)});
    return h;
}

bool EventQueue::step()
{
    if (heap_.empty())
        return false;
    // priority_queue::top is const; move the handler out before popping.
    Entry e = std::move(const_cast<Entry&>(heap_.top()));
    heap_.pop();
    now_ = e.time;
    ++executed_;
    e.handler();
    return true;
}

void EventQueue::run_until(Tti until)
{
    while (!heap_.empty() && heap_.top().time <= until)
        step();
    if (until > now_)
        now_ = until;
}

} // namespace v2x
