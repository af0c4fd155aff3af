#pragma once

// Thin RAII wrappers over FFTW double-precision transforms. Plan creation
// and destruction are serialized behind a mutex (FFTW requirement); plan
// execution on the owned buffers is thread-compatible per plan.

#include <complex>
#include <vector>

namespace tsde::fft {

/// Real-to-complex forward transform of fixed length n.
class RealFft {
public:
    explicit RealFft(int n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const { return n_; }
    /// Transforms x (length n) and returns n/2+1 unnormalized coefficients.
    std::vector<std::complex<double>> forward(const double* x);

private:
    int n_;
    void* plan_;
    double* in_;
    void* out_;
};

/// Complex-to-real inverse of the packed half spectrum; output scaled by 1/n.
class RealIfft {
public:
    explicit RealIfft(int n);
    ~RealIfft();
    RealIfft(const RealIfft&) = delete;
    RealIfft& operator=(const RealIfft&) = delete;

    int size() const { return n_; }
    std::vector<double> inverse(const std::vector<std::complex<double>>& half);

private:
    int n_;
    void* plan_;
    void* in_;
    double* out_;
};

}  // namespace tsde::fft
