#include "pipeflow/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace pipeflow {

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const std::size_t nb = (n + kReductionBlock - 1) / kReductionBlock;
    thread_local std::vector<double> part;
    part.assign(nb, 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
    for (std::int64_t ib = 0; ib < static_cast<std::int64_t>(nb); ++ib) {
        const std::size_t lo = static_cast<std::size_t>(ib) * kReductionBlock;
        const std::size_t hi = std::min(lo + kReductionBlock, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
        part[ib] = s;
    }
    double r = 0.0;
    for (std::size_t ib = 0; ib < nb; ++ib) r += part[ib];
    return r;
}

double dot_serial(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double nrm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::int64_t>(kParallelGrain))
    for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_serial(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scal(double a, std::span<double> x) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::int64_t>(kParallelGrain))
    for (std::int64_t i = 0; i < n; ++i) x[i] *= a;
}

} // namespace pipeflow
