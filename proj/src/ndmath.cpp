#include "icalab/ndmath.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace icalab {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw ShapeError("Matrix: data length does not equal rows*cols");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw ShapeError("from_rows: ragged rows");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    using EMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>;
    using EMapMut =
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    EMap ea(a.data().data(), static_cast<Eigen::Index>(a.rows()),
            static_cast<Eigen::Index>(a.cols()));
    EMap eb(b.data().data(), static_cast<Eigen::Index>(b.rows()),
            static_cast<Eigen::Index>(b.cols()));
    EMapMut eo(out.data().data(), static_cast<Eigen::Index>(out.rows()),
               static_cast<Eigen::Index>(out.cols()));
    eo.noalias() = ea * eb;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix add_rowvec(const Matrix& a, const std::vector<double>& b) {
    if (a.cols() != b.size())
        throw ShapeError("add_rowvec: vector length does not match cols");
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* row = out.row_ptr(i);
        for (std::size_t j = 0; j < a.cols(); ++j) row[j] += b[j];
    }
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : root_seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& si : s_) si = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("Rng::below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 is kept away from 0 so log stays finite.
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Rng Rng::split(std::string_view label, std::uint64_t index) const {
    std::uint64_t mix = root_seed_ ^ fnv1a(label);
    std::uint64_t child = splitmix64(mix);
    mix ^= 0x632be59bd9b4e019ULL * (index + 1);
    child ^= splitmix64(mix);
    return Rng(child);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

Matrix gaussian_sample(Rng& rng, const std::vector<double>& mean,
                       const std::vector<double>& std, std::size_t n) {
    if (mean.size() != std.size())
        throw ShapeError("gaussian_sample: mean/std length mismatch");
    for (double s : std)
        if (!(s > 0.0)) throw ParameterError("gaussian_sample: std entries must be > 0");
    const std::size_t d = mean.size();
    Matrix out(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = mean[j] + std[j] * rng.normal();
    return out;
}

OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw ShapeError("ols_fit: xs/ys length mismatch");
    if (xs.size() < 2) throw ParameterError("ols_fit: need at least 2 points");
    const double n = static_cast<double>(xs.size());
    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw RankError("ols_fit: xs are constant");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double r2;
    if (syy <= 0.0) {
        r2 = 1.0;  // ys constant and reproduced exactly by the flat line
    } else {
        double ssr = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double resid = ys[i] - (slope * xs[i] + intercept);
            ssr += resid * resid;
        }
        r2 = 1.0 - ssr / syy;
        if (r2 < 0.0) r2 = 0.0;
        if (r2 > 1.0) r2 = 1.0;
    }
    (void)n;
    return {slope, intercept, r2};
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace icalab
