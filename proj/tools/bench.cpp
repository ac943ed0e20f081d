// Timing harness for the data-parallel kernels against their serial
// references: SpMV, dot, assembly, and a full Robin solve at one vs all
// threads. Usage: pipeflow_bench [rings sectors levels reps]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <vector>

#include <omp.h>

#include "pipeflow/fem.hpp"
#include "pipeflow/kernels.hpp"
#include "pipeflow/poiseuille.hpp"

using namespace pipeflow;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <class F>
double time_best(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-18s %12.3f %12.3f %10.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    int rings = 16, sectors = 64, levels = 2, reps = 5;
    if (argc >= 3) {
        rings = std::atoi(argv[1]);
        sectors = std::atoi(argv[2]);
    }
    if (argc >= 4) levels = std::atoi(argv[3]);
    if (argc >= 5) reps = std::atoi(argv[4]);

    const CrossSection disk = make_section(SectionKind::Disk, 1.0);
    TriMesh m = polar_mesh(disk, rings, sectors);
    for (int l = 0; l < levels; ++l) m = refine(m);
    auto mesh = std::make_shared<const TriMesh>(std::move(m));

    const int threads = omp_get_max_threads();
    std::printf("mesh: %d vertices, %d triangles, level %d; %d threads\n",
                mesh->n_vertices(), mesh->n_triangles(), mesh->level, threads);
    std::printf("%-18s %12s %12s %10s\n", "kernel", "serial[ms]", "omp[ms]", "speedup");

    const SparseSym K = assemble_stiffness(*mesh);
    std::vector<double> x(K.dim()), y(K.dim());
    for (int i = 0; i < K.dim(); ++i) x[i] = std::sin(0.13 * i);

    const int spmv_inner = 50;
    row("spmv",
        time_best(reps, [&] { for (int k = 0; k < spmv_inner; ++k) K.apply_serial(x, y); }),
        time_best(reps, [&] { for (int k = 0; k < spmv_inner; ++k) K.apply(x, y); }));

    const int dot_inner = 200;
    volatile double sink = 0.0;
    row("dot",
        time_best(reps, [&] { for (int k = 0; k < dot_inner; ++k) sink = dot_serial(x, x); }),
        time_best(reps, [&] { for (int k = 0; k < dot_inner; ++k) sink = dot(x, x); }));
    (void)sink;

    {
        const double serial = time_best(reps, [&] {
            omp_set_num_threads(1);
            (void)assemble_stiffness(*mesh);
        });
        omp_set_num_threads(threads);
        const double parallel = time_best(reps, [&] { (void)assemble_stiffness(*mesh); });
        row("assemble", serial, parallel);
    }

    {
        const double serial = time_best(1, [&] {
            omp_set_num_threads(1);
            (void)solve_robin(mesh, 4.0);
        });
        omp_set_num_threads(threads);
        const double parallel = time_best(1, [&] { (void)solve_robin(mesh, 4.0); });
        row("solve_robin a=4", serial, parallel);
    }
    return 0;
}
