#include "tsde/spectral.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fft.hpp"
#include "json.hpp"
#include "tsde/util.hpp"

namespace tsde {

using json = nlohmann::json;

void SpectralDensity::validate() const {
    if (omega.size() != values.size() || omega.size() < 2) {
        throw std::invalid_argument("SpectralDensity: grid and values must match, size >= 2");
    }
    if (!(omega_s > 0.0)) throw std::invalid_argument("SpectralDensity: omega_s must be > 0");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (values[i] < 0.0) throw std::invalid_argument("SpectralDensity: negative value");
        if (i > 0 && !(omega[i] > omega[i - 1])) {
            throw std::invalid_argument("SpectralDensity: grid must be strictly ascending");
        }
    }
    const double tol = 1e-9 * omega_s + (omega[1] - omega[0]);
    if (omega.back() > 0.5 * omega_s + tol) {
        throw std::invalid_argument("SpectralDensity: grid exceeds omega_s/2");
    }
}

int default_nperseg(int m) {
    int p = 1;
    while (2 * p <= m / 8) p *= 2;
    if (p < 256) {
        p = 256;
        while (p > m) p /= 2;
    }
    return std::max(p, 8);
}

namespace {

std::vector<double> hann_window(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
    }
    return w;
}

struct BlockPlan {
    int nperseg;
    int hop;
    int nblocks;
};

BlockPlan make_block_plan(long m, int nperseg, double overlap) {
    if (nperseg < 8) throw std::invalid_argument("welch: nperseg must be >= 8");
    if (nperseg > m) throw std::invalid_argument("welch: nperseg exceeds record length");
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw std::invalid_argument("welch: overlap must be in [0,1)");
    }
    int hop = std::max(1, static_cast<int>(std::lround(nperseg * (1.0 - overlap))));
    int nblocks = 1 + static_cast<int>((m - nperseg) / hop);
    return {nperseg, hop, nblocks};
}

}  // namespace

Eigen::MatrixXcd blocked_fft(const Eigen::VectorXd& x, double dt, int nperseg, double overlap) {
    if (!(dt > 0.0)) throw std::invalid_argument("blocked_fft: dt must be > 0");
    const auto plan = make_block_plan(x.size(), nperseg, overlap);
    const auto w = hann_window(nperseg);
    double wss = 0.0;
    for (double wi : w) wss += wi * wi;
    const double scale = std::sqrt(dt / wss);

    const double mean = x.mean();
    const int nf = nperseg / 2 + 1;
    Eigen::MatrixXcd q(nf, plan.nblocks);
    fft::RealFft fft(nperseg);
    std::vector<double> buf(static_cast<std::size_t>(nperseg));
    for (int b = 0; b < plan.nblocks; ++b) {
        const long off = static_cast<long>(b) * plan.hop;
        for (int i = 0; i < nperseg; ++i) {
            buf[static_cast<std::size_t>(i)] = (x[off + i] - mean) * w[static_cast<std::size_t>(i)];
        }
        auto coef = fft.forward(buf.data());
        for (int k = 0; k < nf; ++k) q(k, b) = coef[static_cast<std::size_t>(k)] * scale;
    }
    return q;
}

SpectralDensity welch_psd(const Eigen::VectorXd& x, double dt, int nperseg, double overlap) {
    Eigen::MatrixXcd q = blocked_fft(x, dt, nperseg, overlap);
    const int nf = static_cast<int>(q.rows());
    const int nb = static_cast<int>(q.cols());
    SpectralDensity s;
    s.omega_s = 2.0 * M_PI / dt;
    s.omega.resize(static_cast<std::size_t>(nf));
    s.values.resize(static_cast<std::size_t>(nf));
    for (int k = 0; k < nf; ++k) {
        s.omega[static_cast<std::size_t>(k)] = 2.0 * M_PI * k / (nperseg * dt);
        s.values[static_cast<std::size_t>(k)] = q.row(k).squaredNorm() / nb;
    }
    return s;
}

double spectral_difference(const SpectralDensity& s_model, const SpectralDensity& s_data) {
    s_model.validate();
    s_data.validate();
    if (std::abs(s_model.omega_s - s_data.omega_s) > 1e-9 * s_data.omega_s) {
        throw std::invalid_argument("spectral_difference: sampling frequencies differ");
    }
    if (s_model.omega.size() != s_data.omega.size()) {
        throw std::invalid_argument("spectral_difference: model must be evaluated on the data grid");
    }
    for (std::size_t i = 0; i < s_data.omega.size(); ++i) {
        if (std::abs(s_model.omega[i] - s_data.omega[i]) > 1e-9 * s_data.omega_s) {
            throw std::invalid_argument("spectral_difference: grids differ");
        }
    }
    std::vector<double> absdiff(s_data.values.size());
    for (std::size_t i = 0; i < absdiff.size(); ++i) {
        absdiff[i] = std::abs(s_model.values[i] - s_data.values[i]);
    }
    return trapezoid(s_data.omega, absdiff);
}

std::vector<CrossSpectralMatrix> cross_spectral_density(const Eigen::MatrixXd& snapshots,
                                                        double dt,
                                                        const Eigen::VectorXd& weights,
                                                        int nperseg, double overlap) {
    const int p = static_cast<int>(snapshots.rows());
    if (p < 1) throw std::invalid_argument("cross_spectral_density: need P >= 1 channels");
    if (weights.size() != p) {
        throw std::invalid_argument("cross_spectral_density: weight count must equal P");
    }
    for (int i = 0; i < p; ++i) {
        if (!(weights[i] > 0.0)) {
            throw std::invalid_argument("cross_spectral_density: weights must be > 0");
        }
    }

    // Per-channel block coefficients, then per-frequency outer-product average.
    std::vector<Eigen::MatrixXcd> q(static_cast<std::size_t>(p));
    for (int c = 0; c < p; ++c) {
        q[static_cast<std::size_t>(c)] = blocked_fft(snapshots.row(c).transpose(), dt, nperseg, overlap);
    }
    const int nf = static_cast<int>(q[0].rows());
    const int nb = static_cast<int>(q[0].cols());

    std::vector<CrossSpectralMatrix> out(static_cast<std::size_t>(nf));
    for (int k = 0; k < nf; ++k) {
        Eigen::MatrixXcd qk(p, nb);
        for (int c = 0; c < p; ++c) qk.row(c) = q[static_cast<std::size_t>(c)].row(k);
        CrossSpectralMatrix& csm = out[static_cast<std::size_t>(k)];
        csm.omega = 2.0 * M_PI * k / (nperseg * dt);
        csm.weights = weights;
        csm.matrix = (qk * qk.adjoint()) / static_cast<double>(nb);
        csm.matrix = 0.5 * (csm.matrix + csm.matrix.adjoint().eval());
    }
    return out;
}

void save_psd_csv(const SpectralDensity& s, const std::string& path,
                  const std::map<std::string, std::string>& metadata) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_psd_csv: cannot open " + path);
    out << "# omega_s=" << format_double(s.omega_s) << "\n";
    for (const auto& [k, v] : metadata) out << "# " << k << "=" << v << "\n";
    out << "omega,value\n";
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        out << format_double(s.omega[i]) << "," << format_double(s.values[i]) << "\n";
    }
    if (!out) throw std::runtime_error("save_psd_csv: write failed for " + path);
}

SpectralDensity load_psd_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_psd_csv: cannot open " + path);
    SpectralDensity s;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq != std::string::npos && line.find("omega_s") != std::string::npos) {
                s.omega_s = std::stod(line.substr(eq + 1));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("load_psd_csv: malformed row in " + path);
        }
        s.omega.push_back(std::stod(line.substr(0, comma)));
        s.values.push_back(std::stod(line.substr(comma + 1)));
    }
    s.validate();
    return s;
}

SnapshotFile load_snapshots(const std::string& bin_path, const std::string& meta_path) {
    std::ifstream meta(meta_path);
    if (!meta) throw std::runtime_error("load_snapshots: cannot open sidecar " + meta_path);
    json j = json::parse(meta);
    const long p = j.at("P").get<long>();
    const long m = j.at("M").get<long>();
    SnapshotFile snap;
    snap.dt = j.at("dt").get<double>();
    if (p < 1 || m < 2 || !(snap.dt > 0.0)) {
        throw std::runtime_error("load_snapshots: invalid sidecar fields");
    }
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("load_snapshots: cannot open " + bin_path);
    snap.data.resize(p, m);
    // row-major on disk
    std::vector<double> row(static_cast<std::size_t>(m));
    for (long r = 0; r < p; ++r) {
        bin.read(reinterpret_cast<char*>(row.data()),
                 static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m)));
        if (!bin) throw std::runtime_error("load_snapshots: truncated data in " + bin_path);
        for (long c = 0; c < m; ++c) snap.data(r, c) = row[static_cast<std::size_t>(c)];
    }
    if (!snap.data.allFinite()) throw std::runtime_error("load_snapshots: non-finite data");
    return snap;
}

void save_snapshots(const Eigen::MatrixXd& data, double dt, const std::string& bin_path,
                    const std::string& meta_path) {
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("save_snapshots: cannot open " + bin_path);
    std::vector<double> row(static_cast<std::size_t>(data.cols()));
    for (long r = 0; r < data.rows(); ++r) {
        for (long c = 0; c < data.cols(); ++c) row[static_cast<std::size_t>(c)] = data(r, c);
        bin.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(sizeof(double) * row.size()));
    }
    json j;
    j["P"] = data.rows();
    j["M"] = data.cols();
    j["dt"] = dt;
    std::ofstream meta(meta_path);
    if (!meta) throw std::runtime_error("save_snapshots: cannot open sidecar " + meta_path);
    meta << j.dump(2) << "\n";
}

}  // namespace tsde
