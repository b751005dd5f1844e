#include "wavelab/fft_internal.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace wavelab::fft {

namespace {

struct PlanSet {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// FFTW plan creation is not thread safe; execution with the new-array
// interface is. Plans are created with FFTW_UNALIGNED so they can run on
// arbitrary vector storage.
std::mutex plan_mutex;
std::map<std::pair<int, int>, PlanSet>& plan_cache() {
    static std::map<std::pair<int, int>, PlanSet> cache;
    return cache;
}

const PlanSet& plans_for(const GridSpec& g) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(g.d, g.n);
    auto it = plan_cache().find(key);
    if (it != plan_cache().end()) return it->second;

    std::vector<std::complex<double>> buf(g.size());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    PlanSet set;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (g.d == 1) {
        set.fwd = fftw_plan_dft_1d(g.n, p, p, FFTW_FORWARD, flags);
        set.inv = fftw_plan_dft_1d(g.n, p, p, FFTW_BACKWARD, flags);
    } else {
        set.fwd = fftw_plan_dft_2d(g.n, g.n, p, p, FFTW_FORWARD, flags);
        set.inv = fftw_plan_dft_2d(g.n, g.n, p, p, FFTW_BACKWARD, flags);
    }
    return plan_cache().emplace(key, set).first->second;
}

}  // namespace

void forward(const GridSpec& g, const std::complex<double>* in, std::complex<double>* out) {
    const PlanSet& ps = plans_for(g);
    fftw_execute_dft(ps.fwd, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / double(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] *= scale;
}

void inverse(const GridSpec& g, const std::complex<double>* in, std::complex<double>* out) {
    const PlanSet& ps = plans_for(g);
    fftw_execute_dft(ps.inv, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace wavelab::fft
