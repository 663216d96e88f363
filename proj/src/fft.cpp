#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace msar::fft {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Plan::Plan(int n, int sign) : n_(n) {
    if (n <= 0) throw_runtime("fft: transform size must be positive");
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf_ = reinterpret_cast<cdouble*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(n)));
    if (!buf_) throw_runtime("fft: allocation failed");
    plan_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_),
                             reinterpret_cast<fftw_complex*>(buf_),
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_) {
        fftw_free(buf_);
        throw_runtime("fft: planning failed");
    }
}

Plan::~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(buf_);
}

void Plan::transform(const cdouble* in, size_t in_len, cdouble* out) const {
    size_t ncopy = std::min(in_len, static_cast<size_t>(n_));
    std::copy(in, in + ncopy, buf_);
    std::fill(buf_ + ncopy, buf_ + n_, cdouble{});
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::copy(buf_, buf_ + n_, out);
}

void Plan::transform(const std::vector<cdouble>& in, std::vector<cdouble>& out) const {
    out.resize(static_cast<size_t>(n_));
    transform(in.data(), in.size(), out.data());
}

std::vector<cdouble> dft(const std::vector<cdouble>& in, int n, int sign) {
    Plan plan(n, sign);
    std::vector<cdouble> out;
    plan.transform(in, out);
    return out;
}

}  // namespace msar::fft
