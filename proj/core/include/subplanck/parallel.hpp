#pragma once

#include <cstddef>
#include <functional>

namespace subplanck {

/// Number of worker threads used by row-parallel kernels. Defaults to 1.
/// Results never depend on this value: work is split into independent rows
/// and every reduction runs in a fixed order afterwards.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Calls body(i) for i in [begin, end), spread over thread_count() threads.
/// The first exception thrown by any call is rethrown in the caller.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace subplanck
