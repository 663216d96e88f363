#pragma once

// Thin RAII wrapper over FFTW3 complex transforms. FFTW planning is not
// thread-safe, so plan creation/destruction is serialized behind a mutex;
// execution uses per-instance aligned buffers and may run concurrently on
// distinct Plan objects.

#include <vector>

#include "common.hpp"

namespace msar::fft {

class Plan {
public:
    // sign: -1 forward (e^{-j2pi mn/N}), +1 inverse-style (e^{+j2pi mn/N}).
    // Transforms are unnormalized, matching the textbook DFT.
    Plan(int n, int sign);
    ~Plan();
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    int size() const { return n_; }

    // out may alias in; input shorter than n is zero-padded.
    void transform(const cdouble* in, size_t in_len, cdouble* out) const;
    void transform(const std::vector<cdouble>& in, std::vector<cdouble>& out) const;

private:
    int n_;
    void* plan_;       // fftw_plan
    cdouble* buf_;     // fftw-aligned scratch, length n_
};

// One-shot helpers for cold paths.
std::vector<cdouble> dft(const std::vector<cdouble>& in, int n, int sign);

}  // namespace msar::fft
