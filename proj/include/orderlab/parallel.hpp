#pragma once

namespace orderlab {

/// Execution mode for the dual-kernel scans. Every parallel kernel has a
/// serial twin producing bit-identical results; `Auto` picks the parallel
/// kernel when OpenMP is compiled in and more than one worker is allowed.
enum class Parallelism { Serial, Parallel, Auto };

/// Worker count for parallel kernels: OpenMP's default, capped by the
/// ORDERLAB_THREADS environment variable when set. Returns 1 when OpenMP
/// is not compiled in.
int worker_count();

/// True when `mode` resolves to the parallel kernel.
bool use_parallel(Parallelism mode);

} // namespace orderlab
