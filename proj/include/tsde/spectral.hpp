#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace tsde {

/// One-sided grid of a two-sided PSD: Var = (1/pi) * integral of values
/// over [0, omega_s/2]. No one-sided x2 is applied, so analytic oscillator
/// spectra compare directly.
struct SpectralDensity {
    std::vector<double> omega;   // rad/s, ascending on [0, omega_s/2]
    std::vector<double> values;  // variance per rad/s, >= 0
    double omega_s = 0.0;        // sampling angular frequency 2*pi/dt

    void validate() const;
};

struct CrossSpectralMatrix {
    double omega = 0.0;
    Eigen::MatrixXcd matrix;  // P x P Hermitian
    Eigen::VectorXd weights;  // P quadrature weights
};

/// Largest power of two <= M/8, floored at 256 where M permits.
int default_nperseg(int m);

/// Welch averaged-periodogram estimate (Hann window); the sample mean is
/// removed before blocking, so the estimate ignores additive constants.
SpectralDensity welch_psd(const Eigen::VectorXd& x, double dt, int nperseg,
                          double overlap = 0.5);

/// L1 distance of the two curves over [0, omega_s/2], trapezoidal rule on
/// the (shared) data grid.
double spectral_difference(const SpectralDensity& s_model, const SpectralDensity& s_data);

/// Per-frequency Hermitian CSD matrices of a P x M snapshot matrix, with the
/// same blocking and scaling as welch_psd (diagonals reproduce it).
std::vector<CrossSpectralMatrix> cross_spectral_density(const Eigen::MatrixXd& snapshots,
                                                        double dt,
                                                        const Eigen::VectorXd& weights,
                                                        int nperseg, double overlap = 0.5);

/// Per-channel blocked windowed DFT coefficients, scaled so that
/// (1/B) sum_b |Q(k,b)|^2 is the Welch PSD at frequency k.
/// Returns an (nperseg/2+1) x B matrix.
Eigen::MatrixXcd blocked_fft(const Eigen::VectorXd& x, double dt, int nperseg, double overlap);

void save_psd_csv(const SpectralDensity& s, const std::string& path,
                  const std::map<std::string, std::string>& metadata = {});
SpectralDensity load_psd_csv(const std::string& path);

/// Flat binary snapshot matrix (row-major P x M float64 LE) with JSON
/// sidecar {P, M, dt}.
struct SnapshotFile {
    Eigen::MatrixXd data;  // P x M
    double dt = 0.0;
};
SnapshotFile load_snapshots(const std::string& bin_path, const std::string& meta_path);
void save_snapshots(const Eigen::MatrixXd& data, double dt, const std::string& bin_path,
                    const std::string& meta_path);

}  // namespace tsde
