#pragma once

#include <stdexcept>
#include <string>

namespace kanforge {

/// Rejected input: precondition violation, malformed data, bound mismatch.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A search or enumeration hit its node budget before reaching a verdict.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what, long long budget)
        : std::runtime_error(what), budget_(budget) {}
    long long budget() const { return budget_; }

private:
    long long budget_;
};

/// Fiber cardinality exceeded the configured cap.
class CapError : public InputError {
public:
    CapError(const std::string& what, int level, int base_id, int size)
        : InputError(what), level_(level), base_id_(base_id), size_(size) {}
    int level() const { return level_; }
    int base_id() const { return base_id_; }
    int fiber_size() const { return size_; }

private:
    int level_;
    int base_id_;
    int size_;
};

/// A verified postcondition failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace kanforge
