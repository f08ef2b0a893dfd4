#pragma once

namespace evgrid {

// Execution mode for the per-station kernels. Both modes write results by
// station index and reduce in fixed index order, so outputs are bit-identical.
enum class ExecMode { serial, openmp };

template <class Fn>
void for_each_station(ExecMode mode, int count, Fn&& fn) {
    if (mode == ExecMode::openmp) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) fn(i);
    } else {
        for (int i = 0; i < count; ++i) fn(i);
    }
}

} // namespace evgrid
