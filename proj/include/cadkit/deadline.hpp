#ifndef CADKIT_DEADLINE_HPP
#define CADKIT_DEADLINE_HPP

#include <chrono>
#include <optional>
#include <stdexcept>

namespace cadkit
{

class budget_exceeded : public std::runtime_error
{
public:
    budget_exceeded() : std::runtime_error("computation budget exceeded") {}
};

// Cooperative time budget. Long-running loops call check(), which throws
// budget_exceeded once the deadline has passed.
class Deadline
{
public:
    using clock = std::chrono::steady_clock;

    static Deadline unbounded() { return Deadline{}; }
    static Deadline after(std::chrono::duration<double> budget)
    {
        Deadline d;
        d.m_at = clock::now() + std::chrono::duration_cast<clock::duration>(budget);
        return d;
    }

    bool bounded() const noexcept { return m_at.has_value(); }
    bool expired() const { return m_at && clock::now() >= *m_at; }
    void check() const
    {
        if (expired()) {
            throw budget_exceeded{};
        }
    }

private:
    std::optional<clock::time_point> m_at;
};

} // namespace cadkit

#endif
