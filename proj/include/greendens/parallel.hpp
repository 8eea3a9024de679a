#ifndef GREENDENS_PARALLEL_HPP
#define GREENDENS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace greendens {

// Process-wide worker count. 0 selects std::thread::hardware_concurrency().
// Results never depend on this value: parallel maps write disjoint slots and
// every floating-point reduction is performed serially in index order.
void set_thread_count(int threads);
int thread_count();

// Runs fn(i) for i in [0, n), split into contiguous chunks across threads.
// fn must only write state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace greendens

#endif
