#include "icalab/encoder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace icalab {

namespace {

constexpr double kLeakySlope = 0.01;

double leaky(double v) { return v > 0.0 ? v : kLeakySlope * v; }
double leaky_grad(double v) { return v > 0.0 ? 1.0 : kLeakySlope; }

}  // namespace

void ParamGrad::scale(double c) {
    for (auto& w : dw)
        for (double& v : w.data()) v *= c;
    for (auto& b : db)
        for (double& v : b) v *= c;
}

void ParamGrad::add(const ParamGrad& other, double c) {
    for (std::size_t l = 0; l < dw.size(); ++l) {
        for (std::size_t i = 0; i < dw[l].size(); ++i)
            dw[l].data()[i] += c * other.dw[l].data()[i];
        for (std::size_t i = 0; i < db[l].size(); ++i) db[l][i] += c * other.db[l][i];
    }
}

Encoder Encoder::init(const std::vector<std::size_t>& dims, InitScheme scheme, Rng& rng,
                      double dropout) {
    if (dims.size() < 2) throw ParameterError("Encoder::init: need at least input and output dims");
    for (std::size_t d : dims)
        if (d == 0) throw ParameterError("Encoder::init: zero layer width");
    Encoder enc;
    enc.dims_ = dims;
    enc.set_dropout(dropout);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const double fan_in = static_cast<double>(dims[l]);
        const double fan_out = static_cast<double>(dims[l + 1]);
        const double std = scheme == InitScheme::He ? std::sqrt(2.0 / fan_in)
                                                    : std::sqrt(2.0 / (fan_in + fan_out));
        Matrix w(dims[l], dims[l + 1]);
        for (double& v : w.data()) v = std * rng.normal();
        enc.weights_.push_back(std::move(w));
        enc.biases_.emplace_back(dims[l + 1], 0.0);
    }
    return enc;
}

void Encoder::set_dropout(double rate) {
    if (rate < 0.0 || rate >= 1.0) throw ParameterError("Encoder: dropout must be in [0, 1)");
    dropout_ = rate;
}

Matrix Encoder::forward(const Matrix& x) const {
    if (x.cols() != input_dim()) throw ShapeError("Encoder::forward: input dim mismatch");
    Matrix h = x;
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
        h = add_rowvec(matmul(h, weights_[l]), biases_[l]);
        for (double& v : h.data()) v = leaky(v);
    }
    return add_rowvec(matmul(h, weights_.back()), biases_.back());
}

Matrix Encoder::forward_train(const Matrix& x, Rng& rng, ForwardCache& cache) const {
    if (x.cols() != input_dim()) throw ShapeError("Encoder::forward_train: input dim mismatch");
    cache = ForwardCache{};
    cache.input = x;
    cache.train_mode = true;
    Matrix h = x;
    const double keep = 1.0 - dropout_;
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
        Matrix pre = add_rowvec(matmul(h, weights_[l]), biases_[l]);
        cache.pre.push_back(pre);
        for (double& v : pre.data()) v = leaky(v);
        if (dropout_ > 0.0) {
            Matrix mask(pre.rows(), pre.cols());
            for (std::size_t i = 0; i < mask.size(); ++i)
                mask.data()[i] = rng.uniform() < keep ? 1.0 / keep : 0.0;
            for (std::size_t i = 0; i < pre.size(); ++i) pre.data()[i] *= mask.data()[i];
            cache.mask.push_back(std::move(mask));
        }
        cache.act.push_back(pre);
        h = std::move(pre);
    }
    cache.valid = true;
    return add_rowvec(matmul(h, weights_.back()), biases_.back());
}

ParamGrad Encoder::backward(const ForwardCache& cache, const Matrix& dloss_dy,
                            Matrix* dloss_dx) const {
    if (!cache.valid) throw UsageError("Encoder::backward: no cached forward state");
    ParamGrad g = zero_grad();
    const std::size_t nl = weights_.size();
    Matrix grad = dloss_dy;
    for (std::size_t li = nl; li-- > 0;) {
        const Matrix& inp = li == 0 ? cache.input : cache.act[li - 1];
        g.dw[li] = matmul(transpose(inp), grad);
        for (std::size_t j = 0; j < grad.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < grad.rows(); ++i) s += grad(i, j);
            g.db[li][j] = s;
        }
        if (li == 0 && dloss_dx == nullptr) break;
        grad = matmul(grad, transpose(weights_[li]));
        if (li > 0) {
            const Matrix& pre = cache.pre[li - 1];
            for (std::size_t i = 0; i < grad.size(); ++i)
                grad.data()[i] *= leaky_grad(pre.data()[i]);
            if (!cache.mask.empty())
                for (std::size_t i = 0; i < grad.size(); ++i)
                    grad.data()[i] *= cache.mask[li - 1].data()[i];
        }
    }
    if (dloss_dx != nullptr) *dloss_dx = std::move(grad);
    return g;
}

ParamGrad Encoder::zero_grad() const {
    ParamGrad g;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        g.dw.emplace_back(weights_[l].rows(), weights_[l].cols());
        g.db.emplace_back(biases_[l].size(), 0.0);
    }
    return g;
}

std::size_t Encoder::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        n += weights_[l].size() + biases_[l].size();
    return n;
}

namespace {

constexpr char kMagic[4] = {'I', 'C', 'L', 'E'};
constexpr std::uint32_t kVersion = 1;

// Solves (A^T A + lambda I) W = A^T B by Cholesky; A is n x p, B is n x q.
Matrix ridge_solve(const Matrix& a, const Matrix& b, double lambda) {
    const std::size_t p = a.cols();
    Matrix gram = matmul(transpose(a), a);
    for (std::size_t i = 0; i < p; ++i) gram(i, i) += lambda;
    Matrix rhs = matmul(transpose(a), b);

    // In-place Cholesky gram = L L^T.
    for (std::size_t j = 0; j < p; ++j) {
        double diag = gram(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= gram(j, k) * gram(j, k);
        if (diag <= 0.0) throw RankError("ridge_solve: pilot regression rank failure");
        gram(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < p; ++i) {
            double v = gram(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= gram(i, k) * gram(j, k);
            gram(i, j) = v / gram(j, j);
        }
    }
    // Forward/back substitution per right-hand-side column.
    Matrix w(p, rhs.cols());
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        std::vector<double> y(p);
        for (std::size_t i = 0; i < p; ++i) {
            double v = rhs(i, c);
            for (std::size_t k = 0; k < i; ++k) v -= gram(i, k) * y[k];
            y[i] = v / gram(i, i);
        }
        for (std::size_t i = p; i-- > 0;) {
            double v = y[i];
            for (std::size_t k = i + 1; k < p; ++k) v -= gram(k, i) * w(k, c);
            w(i, c) = v / gram(i, i);
        }
    }
    return w;
}

}  // namespace

void Encoder::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("Encoder::save: cannot open " + path);
    f.write(kMagic, 4);
    f.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    const std::uint32_t activation_tag = 1;  // leaky rectifier, slope 0.01
    f.write(reinterpret_cast<const char*>(&activation_tag), sizeof activation_tag);
    f.write(reinterpret_cast<const char*>(&dropout_), sizeof dropout_);
    const std::uint64_t nd = dims_.size();
    f.write(reinterpret_cast<const char*>(&nd), sizeof nd);
    for (std::size_t d : dims_) {
        const std::uint64_t v = d;
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const auto& wd = weights_[l].data();
        f.write(reinterpret_cast<const char*>(wd.data()),
                static_cast<std::streamsize>(wd.size() * sizeof(double)));
        f.write(reinterpret_cast<const char*>(biases_[l].data()),
                static_cast<std::streamsize>(biases_[l].size() * sizeof(double)));
    }
    if (!f) throw std::runtime_error("Encoder::save: write failed for " + path);
}

Encoder Encoder::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("Encoder::load: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("Encoder::load: bad magic in " + path);
    std::uint32_t version = 0, activation_tag = 0;
    f.read(reinterpret_cast<char*>(&version), sizeof version);
    if (version != kVersion) throw std::runtime_error("Encoder::load: unsupported version");
    f.read(reinterpret_cast<char*>(&activation_tag), sizeof activation_tag);
    double dropout = 0.0;
    f.read(reinterpret_cast<char*>(&dropout), sizeof dropout);
    std::uint64_t nd = 0;
    f.read(reinterpret_cast<char*>(&nd), sizeof nd);
    std::vector<std::size_t> dims(nd);
    for (auto& d : dims) {
        std::uint64_t v = 0;
        f.read(reinterpret_cast<char*>(&v), sizeof v);
        d = static_cast<std::size_t>(v);
    }
    Encoder enc;
    enc.dims_ = dims;
    enc.dropout_ = dropout;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Matrix w(dims[l], dims[l + 1]);
        f.read(reinterpret_cast<char*>(w.data().data()),
               static_cast<std::streamsize>(w.size() * sizeof(double)));
        std::vector<double> b(dims[l + 1]);
        f.read(reinterpret_cast<char*>(b.data()),
               static_cast<std::streamsize>(b.size() * sizeof(double)));
        enc.weights_.push_back(std::move(w));
        enc.biases_.push_back(std::move(b));
    }
    if (!f) throw std::runtime_error("Encoder::load: truncated file " + path);
    return enc;
}

Encoder oracle_init_from_pilot(const Dataset& pilot, const std::vector<std::size_t>& dims,
                               double scale, const Rng& rng) {
    if (scale < 0.0) throw ParameterError("oracle_init: scale must be >= 0");
    Rng r = rng.split("oracle-init");
    Encoder enc = Encoder::init(dims, InitScheme::He, r);

    // Hidden features of the pilot observations under the random hidden layers.
    Matrix h = pilot.x;
    for (std::size_t l = 0; l + 1 < enc.weights().size(); ++l) {
        h = add_rowvec(matmul(h, enc.weights()[l]), enc.biases()[l]);
        for (double& v : h.data()) v = v > 0.0 ? v : 0.01 * v;
    }
    // Augment with a constant column so the bias is fit jointly.
    Matrix aug(h.rows(), h.cols() + 1);
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t j = 0; j < h.cols(); ++j) aug(i, j) = h(i, j);
        aug(i, h.cols()) = 1.0;
    }
    Matrix w = ridge_solve(aug, pilot.z, 1e-3);
    Matrix& last = enc.weights().back();
    for (std::size_t i = 0; i < last.rows(); ++i)
        for (std::size_t j = 0; j < last.cols(); ++j) last(i, j) = w(i, j);
    for (std::size_t j = 0; j < last.cols(); ++j) enc.biases().back()[j] = w(h.cols(), j);

    if (scale > 0.0) perturb_params(enc, scale, r);
    return enc;
}

void perturb_params(Encoder& enc, double scale, Rng& rng) {
    if (scale < 0.0) throw ParameterError("perturb_params: scale must be >= 0");
    if (scale == 0.0) return;
    for (std::size_t l = 0; l < enc.weights().size(); ++l) {
        Matrix& wm = enc.weights()[l];
        double sd = 0.0, mu = 0.0;
        for (double v : wm.data()) mu += v;
        mu /= static_cast<double>(wm.size());
        for (double v : wm.data()) sd += (v - mu) * (v - mu);
        sd = std::sqrt(sd / static_cast<double>(wm.size()));
        for (double& v : wm.data()) v += scale * sd * rng.normal();
        for (double& v : enc.biases()[l]) v += scale * rng.normal();
    }
}

Encoder oracle_init(const SourceModel& model, const MixingNetwork& mix,
                    const std::vector<std::size_t>& dims, double scale, const Rng& rng,
                    std::size_t pilot_n) {
    Dataset pilot = generate(model, mix, pilot_n, rng.split("oracle-pilot"));
    return oracle_init_from_pilot(pilot, dims, scale, rng);
}

}  // namespace icalab
