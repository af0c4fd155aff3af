#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace tsde::fft {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft::RealFft(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RealFft: length must be >= 2");
    std::lock_guard<std::mutex> lock(planner_mutex());
    in_ = fftw_alloc_real(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    plan_ = fftw_plan_dft_r2c_1d(n, in_, static_cast<fftw_complex*>(out_), FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("RealFft: plan creation failed");
}

RealFft::~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(out_);
}

std::vector<std::complex<double>> RealFft::forward(const double* x) {
    std::memcpy(in_, x, sizeof(double) * static_cast<std::size_t>(n_));
    fftw_execute(static_cast<fftw_plan>(plan_));
    const int nf = n_ / 2 + 1;
    std::vector<std::complex<double>> out(nf);
    auto* c = static_cast<fftw_complex*>(out_);
    for (int k = 0; k < nf; ++k) out[k] = {c[k][0], c[k][1]};
    return out;
}

RealIfft::RealIfft(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RealIfft: length must be >= 2");
    std::lock_guard<std::mutex> lock(planner_mutex());
    in_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    out_ = fftw_alloc_real(static_cast<std::size_t>(n));
    plan_ = fftw_plan_dft_c2r_1d(n, static_cast<fftw_complex*>(in_), out_, FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("RealIfft: plan creation failed");
}

RealIfft::~RealIfft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(out_);
}

std::vector<double> RealIfft::inverse(const std::vector<std::complex<double>>& half) {
    const int nf = n_ / 2 + 1;
    if (static_cast<int>(half.size()) != nf) {
        throw std::invalid_argument("RealIfft: expected n/2+1 coefficients");
    }
    auto* c = static_cast<fftw_complex*>(in_);
    for (int k = 0; k < nf; ++k) {
        c[k][0] = half[k].real();
        c[k][1] = half[k].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[i] = out_[i] / n_;
    return out;
}

}  // namespace tsde::fft
