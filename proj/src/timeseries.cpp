#include "tsde/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tsde/util.hpp"

namespace tsde {

void TimeSeries::validate() const {
    if (values.rows() < 2) throw std::invalid_argument("TimeSeries: need M >= 2 samples");
    if (values.cols() < 1) throw std::invalid_argument("TimeSeries: need N >= 1 channels");
    if (!(dt > 0.0)) throw std::invalid_argument("TimeSeries: dt must be > 0");
    if (!values.allFinite()) throw std::invalid_argument("TimeSeries: values must be finite");
    if (!names.empty() && static_cast<int>(names.size()) != values.cols()) {
        throw std::invalid_argument("TimeSeries: name count does not match channel count");
    }
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_number(const std::string& s, double& v) {
    const char* p = s.c_str();
    char* end = nullptr;
    v = std::strtod(p, &end);
    return end != p && *end == '\0';
}

}  // namespace

TimeSeries load_csv(const std::string& path, bool has_header, double dt_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    TimeSeries ts;
    double dt_meta = 0.0;
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    long data_row = 0;
    bool header_seen = false;
    std::size_t ncols = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::string meta = trim(t.substr(1));
            auto eq = meta.find('=');
            if (eq != std::string::npos && trim(meta.substr(0, eq)) == "dt") {
                double v;
                if (!parse_number(trim(meta.substr(eq + 1)), v) || !(v > 0.0)) {
                    throw std::runtime_error("load_csv: invalid dt metadata at line " +
                                             std::to_string(line_no));
                }
                dt_meta = v;
            }
            continue;
        }
        auto toks = split_csv_line(t);
        if (has_header && !header_seen) {
            header_seen = true;
            ts.names.assign(toks.begin(), toks.end());
            ncols = toks.size();
            continue;
        }
        ++data_row;
        if (ncols == 0) ncols = toks.size();
        if (toks.size() != ncols) {
            throw std::runtime_error("load_csv: ragged row " + std::to_string(data_row) +
                                     " has " + std::to_string(toks.size()) + " columns, expected " +
                                     std::to_string(ncols) + " (line " + std::to_string(line_no) + ")");
        }
        std::vector<double> vals(ncols);
        for (std::size_t c = 0; c < ncols; ++c) {
            double v;
            if (!parse_number(toks[c], v)) {
                throw std::runtime_error("load_csv: unparseable value at row " +
                                         std::to_string(data_row) + ", column " +
                                         std::to_string(c + 1));
            }
            if (!std::isfinite(v)) {
                throw std::runtime_error("load_csv: non-finite value at row " +
                                         std::to_string(data_row) + ", column " +
                                         std::to_string(c + 1));
            }
            vals[c] = v;
        }
        rows.push_back(std::move(vals));
    }

    if (rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path);
    ts.dt = dt_meta > 0.0 ? dt_meta : dt_override;
    if (!(ts.dt > 0.0)) {
        throw std::runtime_error("load_csv: sampling interval missing; supply `# dt=<seconds>` "
                                 "metadata or an explicit dt");
    }
    ts.values.resize(static_cast<long>(rows.size()), static_cast<long>(ncols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < ncols; ++c) ts.values(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
    }
    if (ts.names.empty()) {
        for (std::size_t c = 0; c < ncols; ++c) ts.names.push_back("ch" + std::to_string(c));
    }
    ts.validate();
    return ts;
}

void save_csv(const TimeSeries& ts, const std::string& path,
              const std::map<std::string, std::string>& metadata) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path);
    out << "# dt=" << format_double(ts.dt) << "\n";
    for (const auto& [k, v] : metadata) out << "# " << k << "=" << v << "\n";
    for (int j = 0; j < ts.channels(); ++j) {
        out << (ts.names.empty() ? "ch" + std::to_string(j) : ts.names[j]);
        out << (j + 1 < ts.channels() ? "," : "\n");
    }
    for (int m = 0; m < ts.samples(); ++m) {
        for (int j = 0; j < ts.channels(); ++j) {
            out << format_double(ts.values(m, j)) << (j + 1 < ts.channels() ? "," : "\n");
        }
    }
    if (!out) throw std::runtime_error("save_csv: write failed for " + path);
}

Standardized standardize(const TimeSeries& ts) {
    ts.validate();
    const int n = ts.channels();
    const int m = ts.samples();
    Standardized out;
    out.means.resize(n);
    out.stds.resize(n);
    out.ts = ts;
    for (int j = 0; j < n; ++j) {
        double mean = ts.values.col(j).mean();
        double ss = (ts.values.col(j).array() - mean).square().sum();
        double sd = std::sqrt(ss / (m - 1));
        if (!(sd > 0.0)) {
            throw std::invalid_argument("standardize: channel " +
                                        (ts.names.empty() ? std::to_string(j) : ts.names[j]) +
                                        " is constant (degenerate)");
        }
        out.means[j] = mean;
        out.stds[j] = sd;
        out.ts.values.col(j) = (ts.values.col(j).array() - mean) / sd;
    }
    return out;
}

Moments moments(const Eigen::VectorXd& x) {
    const long m = x.size();
    if (m < 4) throw std::invalid_argument("moments: need M >= 4 samples");
    Moments out;
    out.mean = x.mean();
    Eigen::ArrayXd c = x.array() - out.mean;
    double m2 = c.square().mean();
    if (!(m2 > 0.0)) throw std::invalid_argument("moments: zero variance (degenerate)");
    double m3 = c.cube().mean();
    double m4 = c.square().square().mean();
    out.variance = m2 * static_cast<double>(m) / static_cast<double>(m - 1);
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

Eigen::VectorXd autocorrelation(const Eigen::VectorXd& x, int max_lag) {
    const long m = x.size();
    if (max_lag < 0 || max_lag >= m) {
        throw std::invalid_argument("autocorrelation: require 0 <= max_lag < M");
    }
    Eigen::ArrayXd c = x.array() - x.mean();
    double c0 = c.square().sum() / static_cast<double>(m);
    if (!(c0 > 0.0)) throw std::invalid_argument("autocorrelation: zero variance (degenerate)");
    Eigen::VectorXd r(max_lag + 1);
    for (int tau = 0; tau <= max_lag; ++tau) {
        double s = 0.0;
        for (long i = 0; i + tau < m; ++i) s += c[i] * c[i + tau];
        r[tau] = s / static_cast<double>(m) / c0;
    }
    return r;
}

SmoothedPdf estimate_pdf(const Eigen::VectorXd& x, int bins, double smooth_sigma_bins,
                         double ci_level, double range_lo, double range_hi) {
    const long m = x.size();
    if (bins < 2) throw std::invalid_argument("estimate_pdf: bins must be >= 2");
    if (m < bins) throw std::invalid_argument("estimate_pdf: need M >= bins samples");
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        throw std::invalid_argument("estimate_pdf: ci_level must be in (0,1)");
    }
    double lo, hi;
    if (range_lo < range_hi) {
        lo = range_lo;
        hi = range_hi;
    } else {
        lo = x.minCoeff();
        hi = x.maxCoeff();
        if (!(hi > lo)) throw std::invalid_argument("estimate_pdf: constant data (degenerate)");
    }

    SmoothedPdf pdf;
    const double w = (hi - lo) / bins;
    pdf.bin_width = w;
    pdf.centers.resize(bins);
    for (int b = 0; b < bins; ++b) pdf.centers[b] = lo + (b + 0.5) * w;

    std::vector<long> counts(bins, 0);
    for (long i = 0; i < m; ++i) {
        double v = x[i];
        if (v < lo || v > hi) {
            ++pdf.dropped;
            continue;
        }
        int b = std::min(bins - 1, static_cast<int>((v - lo) / w));
        ++counts[b];
    }

    pdf.raw_density.resize(bins);
    for (int b = 0; b < bins; ++b) {
        pdf.raw_density[b] = static_cast<double>(counts[b]) / (static_cast<double>(m) * w);
    }

    // Adjusted-Wald band on the raw bin counts.
    const double z = normal_quantile(0.5 * (1.0 + ci_level));
    pdf.ci_lo.resize(bins);
    pdf.ci_hi.resize(bins);
    const double mm = static_cast<double>(m);
    for (int b = 0; b < bins; ++b) {
        double pt = (static_cast<double>(counts[b]) + 2.0) / (mm + 4.0);
        double half = z * std::sqrt(pt * (1.0 - pt) / (mm + 4.0));
        pdf.ci_lo[b] = std::max(0.0, (pt - half) / w);
        pdf.ci_hi[b] = (pt + half) / w;
    }

    // Gaussian smoothing, truncated at +-4 sigma. Each source bin's mass is
    // redistributed with a kernel renormalized over in-range targets, so the
    // integral is conserved exactly with no wraparound.
    const double sigma = smooth_sigma_bins;
    pdf.density.assign(bins, 0.0);
    if (sigma > 0.0) {
        const int radius = static_cast<int>(std::ceil(4.0 * sigma));
        std::vector<double> kernel(2 * radius + 1);
        for (int r = -radius; r <= radius; ++r) {
            kernel[r + radius] = std::exp(-0.5 * (r / sigma) * (r / sigma));
        }
        for (int j = 0; j < bins; ++j) {
            if (pdf.raw_density[j] == 0.0) continue;
            int t0 = std::max(0, j - radius);
            int t1 = std::min(bins - 1, j + radius);
            double norm = 0.0;
            for (int t = t0; t <= t1; ++t) norm += kernel[t - j + radius];
            for (int t = t0; t <= t1; ++t) {
                pdf.density[t] += pdf.raw_density[j] * kernel[t - j + radius] / norm;
            }
        }
    } else {
        pdf.density = pdf.raw_density;
    }
    return pdf;
}

void save_pdf_csv(const SmoothedPdf& pdf, const std::string& path,
                  const std::map<std::string, std::string>& metadata) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_pdf_csv: cannot open " + path);
    out << "# bin_width=" << format_double(pdf.bin_width) << "\n";
    for (const auto& [k, v] : metadata) out << "# " << k << "=" << v << "\n";
    out << "center,density,ci_lo,ci_hi\n";
    for (std::size_t b = 0; b < pdf.centers.size(); ++b) {
        out << format_double(pdf.centers[b]) << "," << format_double(pdf.density[b]) << ","
            << format_double(pdf.ci_lo[b]) << "," << format_double(pdf.ci_hi[b]) << "\n";
    }
    if (!out) throw std::runtime_error("save_pdf_csv: write failed for " + path);
}

}  // namespace tsde
