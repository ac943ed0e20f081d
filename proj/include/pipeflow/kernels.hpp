#pragma once

#include <cstddef>
#include <span>

namespace pipeflow {

// Data-parallel vector kernels used by the solvers. Reductions accumulate
// fixed-size blocks and sum the block partials in index order, so results
// are bit-identical for any OpenMP thread count (including one). The
// *_serial variants are plain reference loops kept for tests and benchmarks.

inline constexpr std::size_t kReductionBlock = 1024;

/// Below this many elements the parallel vector kernels run inline on the
/// calling thread: pure vector traffic is fork/join-bound until well past
/// 1e5 elements. The result is the same either way.
inline constexpr std::size_t kParallelGrain = 131072;

double dot(std::span<const double> x, std::span<const double> y);
double dot_serial(std::span<const double> x, std::span<const double> y);

double nrm2(std::span<const double> x);

/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);
void axpy_serial(double a, std::span<const double> x, std::span<double> y);

/// x *= a
void scal(double a, std::span<double> x);

} // namespace pipeflow
