#pragma once

#include <cstddef>
#include <vector>

#include "wchaos/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// Parallel kernels fill independent slots with OpenMP and are reduced in a
// fixed serial order afterwards, so results are bit-identical to the serial
// reference for any thread count. The serial versions are kept as the
// reference implementations used by tests and the benchmark tool.

namespace wchaos {

/// Serial reference: values[i] = f(i) for i in [0, n).
template <typename F>
std::vector<double> map_indexed_serial(std::size_t n, F&& f) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = f(i);
    return values;
}

/// OpenMP map into preassigned slots. Identical output to map_indexed_serial.
template <typename F>
std::vector<double> map_indexed(std::size_t n, F&& f) {
    std::vector<double> values(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        values[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    return values;
}

/// Ordered compensated reduction of the mapped values.
inline double reduce_ordered(const std::vector<double>& values) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

/// Serial map + ordered reduction (reference path).
template <typename F>
double sum_indexed_serial(std::size_t n, F&& f) {
    return reduce_ordered(map_indexed_serial(n, f));
}

/// Parallel map + ordered reduction. Bit-identical to sum_indexed_serial.
template <typename F>
double sum_indexed(std::size_t n, F&& f) {
    return reduce_ordered(map_indexed(n, f));
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace wchaos
