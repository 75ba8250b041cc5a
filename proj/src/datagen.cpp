#include "icalab/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>

namespace icalab {

void SourceModel::validate() const {
    if (k < 2) throw ParameterError("SourceModel: k must be >= 2");
    if (means.size() != k || stds.size() != k)
        throw ShapeError("SourceModel: means/stds must have k entries");
    for (std::size_t u = 0; u < k; ++u) {
        if (means[u].size() != d || stds[u].size() != d)
            throw ShapeError("SourceModel: category vectors must have length d");
        for (double s : stds[u])
            if (!(s > 0.0)) throw ParameterError("SourceModel: stds must be > 0");
    }
}

Matrix MixingNetwork::apply(const Matrix& z) const {
    if (z.cols() != w1.rows()) throw ShapeError("MixingNetwork: input dim mismatch");
    Matrix h = add_rowvec(matmul(z, w1), b1);
    for (double& v : h.data()) v = std::tanh(v);
    return add_rowvec(matmul(h, w2), b2);
}

double gaussian_kl_diag(const std::vector<double>& m0, const std::vector<double>& s0,
                        const std::vector<double>& m1, const std::vector<double>& s1) {
    double kl = 0.0;
    for (std::size_t i = 0; i < m0.size(); ++i) {
        const double v0 = s0[i] * s0[i];
        const double v1 = s1[i] * s1[i];
        const double dm = m0[i] - m1[i];
        kl += 0.5 * (v0 / v1 + dm * dm / v1 - 1.0 + std::log(v1 / v0));
    }
    return kl;
}

double diversity(const SourceModel& model) {
    model.validate();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < model.k; ++u)
        for (std::size_t v = 0; v < model.k; ++v) {
            if (u == v) continue;
            best = std::min(best, gaussian_kl_diag(model.means[u], model.stds[u],
                                                   model.means[v], model.stds[v]));
        }
    return best;
}

SourceModel calibrate_diversity(const SourceModel& model, double target) {
    if (!(target > 0.0)) throw ParameterError("calibrate_diversity: target must be > 0");
    for (std::size_t u = 1; u < model.k; ++u)
        if (model.stds[u] != model.stds[0])
            throw ParameterError("calibrate_diversity: requires equal per-category variances");
    const double current = diversity(model);
    if (current <= 0.0) throw ParameterError("calibrate_diversity: current diversity is 0");
    const double s = std::sqrt(target / current);
    SourceModel out = model;
    for (auto& m : out.means)
        for (double& v : m) v *= s;
    return out;
}

SourceModel grid_source_model(std::size_t d, std::size_t k, double target_delta) {
    SourceModel m;
    m.d = d;
    m.k = k;
    m.means.assign(k, std::vector<double>(d));
    m.stds.assign(k, std::vector<double>(d, 1.0));
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t i = 0; i < d; ++i)
            m.means[u][i] = std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(u * d + i) /
                                     static_cast<double>(k * d));
    return calibrate_diversity(m, target_delta);
}

namespace {

SourceModel build_modulated(std::size_t d, std::size_t k,
                            const std::vector<std::vector<double>>& mean_pat,
                            const std::vector<std::vector<double>>& logv_pat, double t) {
    SourceModel m;
    m.d = d;
    m.k = k;
    m.means.assign(k, std::vector<double>(d));
    m.stds.assign(k, std::vector<double>(d));
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t i = 0; i < d; ++i) {
            m.means[u][i] = t * mean_pat[u][i];
            // Clamp keeps stds strictly positive and finite at extreme scales.
            m.stds[u][i] = std::exp(std::clamp(0.5 * t * logv_pat[u][i], -4.0, 4.0));
        }
    return m;
}

}  // namespace

SourceModel modulated_source_model(std::size_t d, std::size_t k, double target_delta,
                                   const Rng& rng) {
    if (k < 2) throw ParameterError("modulated_source_model: k must be >= 2");
    if (!(target_delta > 0.0))
        throw ParameterError("modulated_source_model: target delta must be > 0");
    Rng r = rng.split("source-model");
    std::vector<std::vector<double>> mean_pat(k, std::vector<double>(d));
    std::vector<std::vector<double>> logv_pat(k, std::vector<double>(d));
    const double amp = 3.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t i = 0; i < d; ++i) {
            mean_pat[u][i] = r.normal();
            logv_pat[u][i] = amp * r.normal();
        }
    // Categories 0 and 1 share variances, so diversity at scale 0 is exactly 0
    // and bisection on the joint scale always brackets the target.
    logv_pat[1] = logv_pat[0];

    auto delta_at = [&](double t) {
        return diversity(build_modulated(d, k, mean_pat, logv_pat, t));
    };
    double lo = 0.0, hi = 1.0;
    while (delta_at(hi) < target_delta) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (delta_at(mid) < target_delta ? lo : hi) = mid;
    }
    SourceModel m = build_modulated(d, k, mean_pat, logv_pat, 0.5 * (lo + hi));

    // Joint per-component rescale of (means, stds) to unit marginal variance.
    // KL between diagonal Gaussians is invariant under this map, so the
    // calibrated diversity is preserved while the mixing input scale stays
    // comparable across targets.
    for (std::size_t i = 0; i < d; ++i) {
        double mu = 0.0, m2 = 0.0, v = 0.0;
        for (std::size_t u = 0; u < k; ++u) {
            mu += m.means[u][i];
            m2 += m.means[u][i] * m.means[u][i];
            v += m.stds[u][i] * m.stds[u][i];
        }
        mu /= static_cast<double>(k);
        const double marg = m2 / static_cast<double>(k) - mu * mu + v / static_cast<double>(k);
        const double c = 1.0 / std::sqrt(marg);
        for (std::size_t u = 0; u < k; ++u) {
            m.means[u][i] *= c;
            m.stds[u][i] *= c;
        }
    }
    return m;
}

double min_singular_value(const Matrix& a) {
    // One-sided Jacobi: rotate column pairs of a working copy until all pairs
    // are orthogonal; singular values are then the column norms.
    Matrix w = a.rows() >= a.cols() ? a : transpose(a);
    const std::size_t m = w.rows(), n = w.cols();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += w(i, p) * w(i, p);
                    aqq += w(i, q) * w(i, q);
                    apq += w(i, p) * w(i, q);
                }
                off = std::max(off, std::abs(apq) / std::max(1e-300, std::sqrt(app * aqq)));
                if (std::abs(apq) < 1e-15 * std::sqrt(app * aqq)) continue;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
            }
        if (off < 1e-14) break;
    }
    double smin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += w(i, j) * w(i, j);
        smin = std::min(smin, std::sqrt(nrm));
    }
    return smin;
}

namespace {

Matrix gaussian_matrix(Rng& r, std::size_t rows, std::size_t cols, double std) {
    Matrix w(rows, cols);
    for (double& v : w.data()) v = std * r.normal();
    return w;
}

void enforce_min_singular(Matrix& w) {
    const double smin = min_singular_value(w);
    if (smin < 1e-3) {
        const double c = 1e-3 / std::max(smin, 1e-300);
        for (double& v : w.data()) v *= c;
    }
}

// Gram-Schmidt orthonormalization of the columns of a Gaussian draw.
Matrix orthonormal_columns(Rng& r, std::size_t rows, std::size_t cols) {
    Matrix w = gaussian_matrix(r, rows, cols, 1.0);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t p = 0; p < j; ++p) {
            double dot = 0.0;
            for (std::size_t i = 0; i < rows; ++i) dot += w(i, j) * w(i, p);
            for (std::size_t i = 0; i < rows; ++i) w(i, j) -= dot * w(i, p);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < rows; ++i) nrm += w(i, j) * w(i, j);
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < rows; ++i) w(i, j) /= nrm;
    }
    return w;
}

}  // namespace

MixingNetwork make_mixing(std::size_t d, const Rng& rng) {
    Rng r = rng.split("mixing");
    MixingNetwork mix;
    mix.w1 = gaussian_matrix(r, d, 2 * d, 1.0 / std::sqrt(static_cast<double>(d)));
    mix.w2 = gaussian_matrix(r, 2 * d, d, 1.0 / std::sqrt(static_cast<double>(2 * d)));
    enforce_min_singular(mix.w1);
    enforce_min_singular(mix.w2);
    mix.b1.resize(2 * d);
    mix.b2.resize(d);
    for (double& v : mix.b1) v = 0.1 * r.normal();
    for (double& v : mix.b2) v = 0.1 * r.normal();
    return mix;
}

MixingNetwork make_mixing_orthogonal(std::size_t d, const Rng& rng) {
    Rng r = rng.split("mixing-orthogonal");
    MixingNetwork mix;
    // d x 2d with orthonormal rows (transpose of orthonormal columns), gain
    // 0.6 keeps the tanh hidden layer out of saturation for unit sources.
    Matrix q1 = orthonormal_columns(r, 2 * d, d);
    mix.w1 = transpose(q1);
    for (double& v : mix.w1.data()) v *= 0.6;
    mix.w2 = orthonormal_columns(r, 2 * d, d);
    mix.b1.resize(2 * d);
    mix.b2.resize(d);
    for (double& v : mix.b1) v = 0.1 * r.normal();
    for (double& v : mix.b2) v = 0.1 * r.normal();
    return mix;
}

namespace {

Dataset generate_sources(const SourceModel& model, std::size_t n, const Rng& rng) {
    model.validate();
    if (n == 0) throw ParameterError("generate: n must be positive");
    Rng r = rng.split("generate");
    Dataset ds;
    ds.u.resize(n);
    ds.z = Matrix(n, model.d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(r.below(model.k));
        ds.u[i] = u;
        for (std::size_t j = 0; j < model.d; ++j)
            ds.z(i, j) = model.means[u][j] + model.stds[u][j] * r.normal();
    }
    ds.meta.d = model.d;
    ds.meta.k = model.k;
    ds.meta.delta = diversity(model);
    ds.meta.seed = rng.root_seed();
    return ds;
}

}  // namespace

Dataset generate(const SourceModel& model, const MixingNetwork& mix, std::size_t n,
                 const Rng& rng) {
    if (model.d != mix.input_dim()) throw ShapeError("generate: model/mixing dim mismatch");
    Dataset ds = generate_sources(model, n, rng);
    ds.x = mix.apply(ds.z);
    if (!ds.x.all_finite()) throw ParameterError("generate: mixing produced non-finite values");
    return ds;
}

Dataset generate_linear(const SourceModel& model, const Matrix& a, std::size_t n,
                        const Rng& rng) {
    if (a.rows() != model.d || a.cols() != model.d)
        throw ShapeError("generate_linear: A must be d x d");
    if (min_singular_value(a) <= 1e-9) throw RankError("generate_linear: A is singular");
    Dataset ds = generate_sources(model, n, rng);
    ds.x = matmul(ds.z, transpose(a));
    return ds;
}

double FanoInstance::closed_form_kl() const {
    return static_cast<double>(theta.size()) * mu * mu / 2.0;
}

SourceModel FanoInstance::as_source_model() const {
    SourceModel m;
    m.d = theta.size();
    m.k = 2;
    m.means.assign(2, std::vector<double>(m.d, 0.0));
    m.stds.assign(2, std::vector<double>(m.d, 1.0));
    for (std::size_t i = 0; i < m.d; ++i)
        m.means[1][i] = mu * static_cast<double>(theta[i]);
    return m;
}

std::vector<FanoInstance> fano_family(std::size_t d, double delta) {
    if (d == 0 || d > 16) throw ParameterError("fano_family: d must be in [1, 16]");
    if (!(delta > 0.0)) throw ParameterError("fano_family: delta must be > 0");
    const double mu = std::sqrt(2.0 * delta / static_cast<double>(d));
    std::vector<FanoInstance> out;
    out.reserve(std::size_t{1} << d);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        FanoInstance inst;
        inst.mu = mu;
        inst.delta = delta;
        inst.theta.resize(d);
        for (std::size_t i = 0; i < d; ++i)
            inst.theta[i] = (mask >> i) & 1 ? 1 : -1;
        out.push_back(std::move(inst));
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'I', 'C', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& f, T& v) {
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void save_dataset_binary(const Dataset& ds, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_dataset_binary: cannot open " + path);
    f.write(kMagic, 4);
    write_raw(f, kVersion);
    write_raw(f, static_cast<std::uint64_t>(ds.meta.d));
    write_raw(f, static_cast<std::uint64_t>(ds.meta.k));
    write_raw(f, ds.meta.delta);
    write_raw(f, ds.meta.seed);
    write_raw(f, static_cast<std::uint64_t>(ds.n()));
    for (std::size_t i = 0; i < ds.n(); ++i)
        write_raw(f, static_cast<std::uint32_t>(ds.u[i]));
    // Columnar layout: each source column contiguous, then each observation column.
    for (std::size_t j = 0; j < ds.meta.d; ++j)
        for (std::size_t i = 0; i < ds.n(); ++i) write_raw(f, ds.z(i, j));
    for (std::size_t j = 0; j < ds.meta.d; ++j)
        for (std::size_t i = 0; i < ds.n(); ++i) write_raw(f, ds.x(i, j));
    if (!f) throw std::runtime_error("save_dataset_binary: write failed for " + path);
}

Dataset load_dataset_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_dataset_binary: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_dataset_binary: bad magic in " + path);
    std::uint32_t version = 0;
    read_raw(f, version);
    if (version != kVersion)
        throw std::runtime_error("load_dataset_binary: unsupported version");
    std::uint64_t d = 0, k = 0, seed = 0, n = 0;
    double delta = 0.0;
    read_raw(f, d);
    read_raw(f, k);
    read_raw(f, delta);
    read_raw(f, seed);
    read_raw(f, n);
    Dataset ds;
    ds.meta = {static_cast<std::size_t>(d), static_cast<std::size_t>(k), delta, seed};
    ds.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t u = 0;
        read_raw(f, u);
        ds.u[i] = u;
    }
    ds.z = Matrix(n, d);
    ds.x = Matrix(n, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) read_raw(f, ds.z(i, j));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) read_raw(f, ds.x(i, j));
    if (!f) throw std::runtime_error("load_dataset_binary: truncated file " + path);
    return ds;
}

void save_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_dataset_csv: cannot open " + path);
    f << "u";
    for (std::size_t j = 1; j <= ds.meta.d; ++j) f << ",z_" << j;
    for (std::size_t j = 1; j <= ds.meta.d; ++j) f << ",x_" << j;
    f << "\n";
    char buf[32];
    for (std::size_t i = 0; i < ds.n(); ++i) {
        f << ds.u[i];
        for (std::size_t j = 0; j < ds.meta.d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.z(i, j));
            f << ',' << buf;
        }
        for (std::size_t j = 0; j < ds.meta.d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.x(i, j));
            f << ',' << buf;
        }
        f << "\n";
    }
}

}  // namespace icalab
