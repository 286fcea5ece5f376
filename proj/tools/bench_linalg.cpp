/*
 * bench_linalg.cpp
 * Times the serial reference kernel against the OpenMP kernel on random
 * elimination workloads. Thread count follows OMP_NUM_THREADS.
 */
#include <chrono>
#include <cstdio>
#include <random>

#include "perfdim/linalg.hpp"

#ifdef PERFDIM_HAVE_OPENMP
#include <omp.h>
#endif

using namespace perfdim;
using Clock = std::chrono::steady_clock;

namespace {

Matrix random_matrix(FieldSpec f, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> val(-20, 20);
    std::uniform_int_distribution<int> keep(0, 99);
    Matrix a(f, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (keep(rng) < 55) a.set(i, j, Scalar::of_long(f, val(rng)));
    return a;
}

double time_rref(const Matrix& a, Exec exec, int reps) {
    double best = 1e100;
    for (int k = 0; k < reps; ++k) {
        Matrix w = a;
        auto t0 = Clock::now();
        rref_in_place(w, nullptr, exec);
        double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int reps = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef PERFDIM_HAVE_OPENMP
    std::printf("openmp enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("openmp not compiled in; parallel policy falls back to serial\n");
#endif
    std::mt19937 rng(12345);
    std::printf("%-10s %6s %12s %12s %8s\n", "field", "n", "serial(ms)", "parallel(ms)", "speedup");
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(2147483647)}) {
        for (int n : {64, 128, 256}) {
            if (f.is_rationals() && n > 128) continue;  // rational fill-in gets large
            Matrix a = random_matrix(f, n, rng);
            Matrix s = a, p = a;
            rref_in_place(s, nullptr, Exec::serial);
            rref_in_place(p, nullptr, Exec::parallel);
            if (!(s == p)) {
                std::fprintf(stderr, "MISMATCH between serial and parallel kernels\n");
                return 1;
            }
            double ts = time_rref(a, Exec::serial, reps);
            double tp = time_rref(a, Exec::parallel, reps);
            std::printf("%-10s %6d %12.2f %12.2f %8.2fx\n", f.str().c_str(), n, ts, tp, ts / tp);
        }
    }
    return 0;
}
