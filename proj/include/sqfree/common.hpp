#pragma once

// Error taxonomy, work budgets, and run configuration shared by all modules.

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sqfree {

/// Base class for all library errors. `module`/`operation` identify the
/// failing entry point; `reason` is a stable machine-readable slug.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string operation, std::string reason,
          std::string detail = {})
        : std::runtime_error(module + "." + operation + ": " + reason +
                             (detail.empty() ? "" : " (" + detail + ")")),
          module_(std::move(module)),
          operation_(std::move(operation)),
          reason_(std::move(reason)),
          detail_(std::move(detail)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }
    const std::string& reason() const noexcept { return reason_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string module_, operation_, reason_, detail_;
};

/// Caller misuse: bad arguments, violated preconditions, malformed input.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A work ceiling was hit. Never a silent wrong answer.
class BudgetError : public Error {
public:
    BudgetError(std::string module, std::string operation,
                std::uint64_t used, std::uint64_t ceiling)
        : Error(std::move(module), std::move(operation), "budget exceeded",
                "used " + std::to_string(used) + " of " +
                    std::to_string(ceiling)),
          used_(used),
          ceiling_(ceiling) {}

    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t ceiling() const noexcept { return ceiling_; }

private:
    std::uint64_t used_, ceiling_;
};

/// An internal cross-check failed; indicates a defect, not caller misuse.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Tunables threaded through the long-running operations.
struct RunConfig {
    std::uint64_t node_budget = 1'000'000'000;  // DFS nodes
    std::uint64_t state_budget = 1'000'000;     // automaton states
    int threads = 0;                            // 0 = hardware concurrency
    int prefix_depth = 6;                       // parallel split depth
    unsigned seed = 0;  // perturbs root-finder start layout only

    int effective_threads() const {
        if (threads > 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

inline const RunConfig& default_config() {
    static const RunConfig cfg{};
    return cfg;
}

/// Shared node counter with a hard ceiling. Workers charge in batches to
/// keep the atomic off the hot path; `exceeded` latches once tripped.
class WorkBudget {
public:
    explicit WorkBudget(std::uint64_t ceiling) : ceiling_(ceiling) {}

    /// Charge `amount` units. Returns false once the ceiling is passed.
    bool charge(std::uint64_t amount) {
        std::uint64_t prev = used_.fetch_add(amount, std::memory_order_relaxed);
        if (prev + amount > ceiling_) {
            exceeded_.store(true, std::memory_order_relaxed);
            return false;
        }
        return !exceeded_.load(std::memory_order_relaxed);
    }

    bool exceeded() const { return exceeded_.load(std::memory_order_relaxed); }
    std::uint64_t used() const { return used_.load(std::memory_order_relaxed); }
    std::uint64_t ceiling() const { return ceiling_; }

    [[noreturn]] void raise(const char* module, const char* operation) const {
        throw BudgetError(module, operation, used(), ceiling_);
    }

private:
    std::uint64_t ceiling_;
    std::atomic<std::uint64_t> used_{0};
    std::atomic<bool> exceeded_{false};
};

/// Deterministic parallel map: runs fn(i) for i in [0, n) on up to
/// `threads` workers. Results must be written by index; the schedule never
/// influences outputs. Exceptions are rethrown on the caller thread.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t workers =
        std::min<std::size_t>(n, threads <= 1 ? 1 : static_cast<std::size_t>(threads));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n) return;
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace sqfree
