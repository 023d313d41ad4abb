#pragma once

namespace randheston {

/// Thread count for parallel grids: RANDHESTON_THREADS when set to a positive integer,
/// otherwise the OpenMP default.
int thread_cap();

}  // namespace randheston
