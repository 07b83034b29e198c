// Times the serial reference path against the OpenMP path for the heavy
// kernels and checks that both produce identical results. Sizes are chosen
// so a full run stays under a minute on one core.

#include <omp.h>

#include <cstdio>
#include <string>

#include "inclab/area.hpp"
#include "inclab/configs.hpp"
#include "inclab/gridscan.hpp"
#include "inclab/incidence.hpp"

using namespace inclab;

namespace {

struct RowResult {
    double t_serial = 0;
    double t_parallel = 0;
    bool equal = false;
};

template <typename F>
RowResult time_pair(F&& kernel) {
    RowResult row;
    double t0 = omp_get_wtime();
    auto a = kernel(Exec::serial);
    row.t_serial = omp_get_wtime() - t0;
    t0 = omp_get_wtime();
    auto b = kernel(Exec::parallel);
    row.t_parallel = omp_get_wtime() - t0;
    row.equal = (a == b);
    return row;
}

void print_row(const std::string& name, const RowResult& r) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   %s\n", name.c_str(),
                r.t_serial * 1e3, r.t_parallel * 1e3,
                r.t_parallel > 0 ? r.t_serial / r.t_parallel : 0.0,
                r.equal ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    int threads = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--threads") threads = std::atoi(argv[i + 1]);
    if (threads > 0) omp_set_num_threads(threads);

    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s   %s\n", "kernel", "serial", "parallel",
                "speedup", "check");

    int bad = 0;

    {
        Config cfg = gen_furstenberg({2, 5, rat(1)});
        auto row = time_pair([&](Exec e) {
            auto rep = count_incidences(cfg, e, true);
            return rep.total;
        });
        print_row("incidences (M=5 config)", row);
        bad += !row.equal;
    }

    {
        MultiPoly Q = gen_grid_polynomial(2, 16);
        auto row = time_pair([&](Exec e) { return sign_field(Q, 512, e).sign; });
        print_row("sign field (d=16, 512^2)", row);
        bad += !row.equal;
    }

    {
        MultiPoly Q = gen_grid_polynomial(2, 12);
        auto row = time_pair([&](Exec e) {
            return neighborhood_volume(Q, 0.05, 24, DilationMetric::euclidean, e).value;
        });
        print_row("neighborhood volume", row);
        bad += !row.equal;
    }

    {
        // circle of radius 1/4 around the cube center, exact fiber roots
        MultiPoly Q = parse_poly("1 2 0\n1 0 2\n-1 1 0\n-1 0 1\n7/16 0 0\n", 2);
        auto row = time_pair([&](Exec e) {
            return directed_area(Q, canonical_direction(IntVec{Int(0), Int(1)}), 2048,
                                 AreaMode::exact_roots, 64, e)
                .value;
        });
        print_row("directed area (2048 fibers)", row);
        bad += !row.equal;
    }

    {
        Config cfg = gen_furstenberg({2, 4, rat(1)});
        std::vector<Direction> dirs;
        for (const auto& l : cfg.lines) dirs.push_back(l.dir);
        auto row = time_pair([&](Exec e) {
            auto rep = direction_density(dirs, 0.5, Region::sphere(), 20000, 7, e);
            return rep.max_gap;
        });
        print_row("direction density probes", row);
        bad += !row.equal;
    }

    if (bad) {
        std::printf("\n%d kernel(s) disagreed between serial and parallel\n", bad);
        return 1;
    }
    std::printf("\nall kernels agree between serial and parallel\n");
    return 0;
}
