#pragma once

// Deterministic task fan-out shared by every OpenMP loop in the library.

#include <cstdint>
#include <exception>

#include <omp.h>

namespace lsvwip {

enum class Exec { Serial, Parallel };

/// Runs task(i) for i in [0, count). Exceptions cannot cross an OpenMP region, so
/// they are captured per task and the one from the lowest index is rethrown.
/// Inside an enclosing parallel region (suite-level fan-out) the loop runs serially.
template <class Task>
void for_each_task(Exec exec, std::uint64_t count, Task&& task) {
    const auto n = static_cast<std::int64_t>(count);
    std::exception_ptr first;
    std::int64_t first_index = n;
    const auto guarded = [&](std::int64_t i) {
        try {
            task(static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical(lsvwip_task_error)
            if (i < first_index) {
                first_index = i;
                first = std::current_exception();
            }
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
        for (std::int64_t i = 0; i < n; ++i) guarded(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) guarded(i);
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace lsvwip
