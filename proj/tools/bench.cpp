// Kernel benchmark: serial reference vs OpenMP versions of the hot paths.
// Also asserts bitwise agreement while timing, since determinism across
// thread counts is part of the output contract.

#include "thermalab/kernels.hpp"
#include "thermalab/linalg.hpp"
#include "thermalab/rng.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace thermalab;
using kernels::Exec;

namespace {

double seconds(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const std::string& name, std::size_t n, double t_serial, double t_parallel,
            bool identical) {
    std::printf("%-22s n=%5zu  serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n",
        name.c_str(), n, t_serial, t_parallel, t_serial / t_parallel,
        identical ? "bitwise-equal" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::size_t> sizes = {256, 512, 1024};
    if (argc > 1 && std::string(argv[1]) == "--quick") sizes = {128, 256};

    for (std::size_t n : sizes) {
        RngStream rng(7, n);
        SymmetricMatrix h = sample_goe(rng, n, 1.0);
        Matrix o(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) o(i, j) = rng.gaussian();

        {
            Matrix rs, rp;
            const double ts = seconds([&] { rs = kernels::rotate_congruence(o, h, Exec::Serial); });
            const double tp = seconds([&] { rp = kernels::rotate_congruence(o, h, Exec::Parallel); });
            report("rotate_congruence", n, ts, tp, rs == rp);
        }
        {
            std::vector<double> evals(n), times(200);
            for (std::size_t i = 0; i < n; ++i) evals[i] = double(i) * 0.02;
            for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.01 * double(i);
            Matrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = o(i, j) + o(j, i);
            std::vector<double> vs, vp;
            const double ts =
                seconds([&] { vs = kernels::cos_weighted_series(m, evals, times, Exec::Serial); });
            const double tp =
                seconds([&] { vp = kernels::cos_weighted_series(m, evals, times, Exec::Parallel); });
            report("cos_weighted_series", n, ts, tp, vs == vp);
        }
        {
            EigenSystem es, ep;
            const double ts = seconds([&] { es = eigh(h, Exec::Serial); });
            const double tp = seconds([&] { ep = eigh(h, Exec::Parallel); });
            report("eigh", n, ts, tp,
                   es.eigenvalues == ep.eigenvalues && es.vectors == ep.vectors);
        }
        {
            std::vector<double> vs, vp;
            const double ts = seconds([&] { vs = eigenvalues_only(h, Exec::Serial); });
            const double tp = seconds([&] { vp = eigenvalues_only(h, Exec::Parallel); });
            report("eigenvalues_only", n, ts, tp, vs == vp);
        }
    }
    return 0;
}
