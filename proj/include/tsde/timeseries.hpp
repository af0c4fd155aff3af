#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace tsde {

/// Uniformly sampled multichannel record; sample m sits at time m*dt.
struct TimeSeries {
    Eigen::MatrixXd values;          // M samples x N channels
    double dt = 0.0;                 // sampling interval, seconds
    std::vector<std::string> names;  // N channel labels

    int samples() const { return static_cast<int>(values.rows()); }
    int channels() const { return static_cast<int>(values.cols()); }
    Eigen::VectorXd channel(int j) const { return values.col(j); }

    /// Throws std::invalid_argument on any invariant violation.
    void validate() const;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // sample (M-1) convention
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Histogram density estimate with Gaussian smoothing and a per-bin
/// adjusted-Wald confidence band (band refers to the raw histogram).
struct SmoothedPdf {
    std::vector<double> centers;
    std::vector<double> density;      // smoothed, per unit of y
    std::vector<double> raw_density;  // pre-smoothing histogram density
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    double bin_width = 0.0;
    long dropped = 0;  // samples outside an explicit range
};

/// Reads the CSV layout described in the README: optional `# key=value`
/// comment lines (including `# dt=<seconds>`), an optional channel-name
/// header row, then numeric rows. dt_override > 0 supplies dt when the
/// file carries none.
TimeSeries load_csv(const std::string& path, bool has_header, double dt_override = 0.0);

void save_csv(const TimeSeries& ts, const std::string& path,
              const std::map<std::string, std::string>& metadata = {});

struct Standardized {
    TimeSeries ts;
    Eigen::VectorXd means;
    Eigen::VectorXd stds;
};

/// Per-channel shift/scale to sample mean 0, sample std 1.
Standardized standardize(const TimeSeries& ts);

Moments moments(const Eigen::VectorXd& x);

/// Biased estimator r(tau) = (1/M) sum (x_m - xbar)(x_{m+tau} - xbar),
/// normalized so r(0) = 1. Returns max_lag + 1 values.
Eigen::VectorXd autocorrelation(const Eigen::VectorXd& x, int max_lag);

/// range_lo < range_hi selects an explicit histogram range; samples outside
/// are dropped (counted in SmoothedPdf::dropped) while the total sample
/// count still normalizes the density.
SmoothedPdf estimate_pdf(const Eigen::VectorXd& x, int bins = 100,
                         double smooth_sigma_bins = 2.0, double ci_level = 0.95,
                         double range_lo = 0.0, double range_hi = 0.0);

void save_pdf_csv(const SmoothedPdf& pdf, const std::string& path,
                  const std::map<std::string, std::string>& metadata = {});

}  // namespace tsde
