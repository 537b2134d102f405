#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace penrose {

/// Worker count for parallel quadrature evaluation. Defaults to 1; the
/// PENROSE_LAB_THREADS environment variable or set_worker_count() override it.
/// Results are independent of the worker count (reduction order is fixed).
int worker_count();
void set_worker_count(int workers);

/// Evaluates fn(i) for i in [0, count), possibly on several threads.
/// Caller-visible state must be written by index only.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Formats a double with 17 significant digits (round-trip safe).
std::string format_double(double v);

/// Area of the unit k-sphere S^k in R^{k+1}: 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double sphere_area(int k);

}  // namespace penrose
