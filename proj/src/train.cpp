#include "icalab/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace icalab {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ParameterError("TrainConfig: learning rate must be > 0");
    if (batch_size < 1) throw ParameterError("TrainConfig: batch size must be >= 1");
    if (val_fraction < 0.0 || val_fraction > 0.5)
        throw ParameterError("TrainConfig: validation fraction must be in [0, 0.5]");
    if (dropout < 0.0 || dropout >= 1.0)
        throw ParameterError("TrainConfig: dropout must be in [0, 1)");
    if (ensemble < 1) throw ParameterError("TrainConfig: ensemble size must be >= 1");
}

namespace {

// Flat view over every trainable parameter (encoder + head).
struct ParamView {
    std::vector<double*> ptr;
    std::vector<std::size_t> len;

    void add(std::vector<double>& v) {
        ptr.push_back(v.data());
        len.push_back(v.size());
    }
    std::size_t blocks() const { return ptr.size(); }
};

ParamView view_params(Encoder& enc, GclHead& head) {
    ParamView pv;
    for (auto& w : enc.weights()) pv.add(w.data());
    for (auto& b : enc.biases()) pv.add(b);
    pv.add(head.means.data());
    pv.add(head.log_var.data());
    return pv;
}

struct AdamState {
    std::vector<std::vector<double>> m, v;

    explicit AdamState(const ParamView& pv) {
        for (std::size_t b = 0; b < pv.blocks(); ++b) {
            m.emplace_back(pv.len[b], 0.0);
            v.emplace_back(pv.len[b], 0.0);
        }
    }
};

double schedule_lr(const TrainConfig& cfg, std::size_t t, std::size_t t_total) {
    double lr = cfg.learning_rate;
    if (cfg.two_stage && t_total > 0 && t > t_total / 2) lr *= 0.1;
    switch (cfg.schedule) {
        case Schedule::Constant:
            return lr;
        case Schedule::InverseSqrt:
            return lr / std::sqrt(static_cast<double>(t));
        case Schedule::CosineDecay:
            if (t_total == 0) return lr;
            return lr * 0.5 *
                   (1.0 + std::cos(std::numbers::pi * static_cast<double>(t) /
                                   static_cast<double>(t_total)));
    }
    return lr;
}

struct Snapshot {
    Encoder enc;
    GclHead head;
};

}  // namespace

TrainReport train(const Dataset& data, const TrainConfig& cfg, const Encoder* warm) {
    cfg.validate();
    if (data.n() == 0) throw ParameterError("train: empty dataset");
    const auto t_start = std::chrono::steady_clock::now();

    Rng root(cfg.seed);
    Rng init_rng = root.split("init");
    Rng shuffle_rng = root.split("shuffle");
    Rng dropout_rng = root.split("dropout");

    const std::size_t d = data.x.cols();
    std::vector<std::size_t> dims;
    dims.push_back(d);
    for (std::size_t h : cfg.hidden) dims.push_back(h);
    dims.push_back(d);

    TrainReport rep;
    rep.encoder = warm != nullptr ? *warm : Encoder::init(dims, cfg.init_scheme, init_rng);
    rep.encoder.set_dropout(cfg.dropout);
    rep.head = GclHead::init(data.meta.k, d, init_rng, cfg.shared_variance_head);
    if (cfg.moment_init_head)
        rep.head.moment_init(rep.encoder.forward(data.x), data.u);

    // Deterministic train/validation split: validation takes the tail rows.
    const std::size_t n_val =
        cfg.early_stopping ? static_cast<std::size_t>(cfg.val_fraction * static_cast<double>(data.n()))
                           : 0;
    const std::size_t n_train = data.n() - n_val;
    if (n_train == 0) throw ParameterError("train: no training rows after validation split");

    Dataset val;
    if (n_val > 0) {
        val.meta = data.meta;
        val.x = Matrix(n_val, d);
        val.z = Matrix(n_val, d);
        val.u.resize(n_val);
        for (std::size_t i = 0; i < n_val; ++i) {
            val.u[i] = data.u[n_train + i];
            for (std::size_t j = 0; j < d; ++j) {
                val.x(i, j) = data.x(n_train + i, j);
                val.z(i, j) = data.z(n_train + i, j);
            }
        }
    }

    const std::size_t bs = std::min(cfg.batch_size, n_train);
    const std::size_t batches_per_epoch = (n_train + bs - 1) / bs;
    const std::size_t t_total =
        cfg.iters > 0 ? cfg.iters : cfg.epochs * batches_per_epoch;
    const std::size_t epoch_budget =
        cfg.iters > 0 ? (cfg.iters + batches_per_epoch - 1) / batches_per_epoch : cfg.epochs;

    ParamView pv = view_params(rep.encoder, rep.head);
    AdamState adam(pv);
    std::vector<std::vector<double>> grads;
    for (std::size_t b = 0; b < pv.blocks(); ++b) grads.emplace_back(pv.len[b], 0.0);
    const std::size_t n_weight_blocks = rep.encoder.weights().size();

    constexpr double beta1 = 0.9, beta2 = 0.999, eps_num = 1e-8;
    std::size_t t = 0;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0, since_best = 0;
    Snapshot best;

    Matrix xb, dy;
    std::vector<std::size_t> ub;
    ForwardCache cache;

    for (std::size_t epoch = 0; epoch < epoch_budget && t < t_total; ++epoch) {
        const std::vector<std::size_t> perm = shuffle_rng.permutation(n_train);
        double epoch_loss = 0.0;
        std::size_t epoch_batches = 0;
        for (std::size_t b0 = 0; b0 < n_train && t < t_total; b0 += bs) {
            const std::size_t bn = std::min(bs, n_train - b0);
            xb = Matrix(bn, d);
            ub.resize(bn);
            for (std::size_t i = 0; i < bn; ++i) {
                const std::size_t src = perm[b0 + i];
                ub[i] = data.u[src];
                for (std::size_t j = 0; j < d; ++j) xb(i, j) = data.x(src, j);
            }

            const Matrix y = rep.encoder.forward_train(xb, dropout_rng, cache);
            LossBatch lb = gcl_loss(rep.head, y, ub);
            ++t;
            double loss = lb.mean;
            ParamGrad eg = rep.encoder.backward(cache, lb.dy);
            if (cfg.l1 > 0.0) {
                for (std::size_t l = 0; l < rep.encoder.weights().size(); ++l) {
                    const auto& wd = rep.encoder.weights()[l].data();
                    auto& gd = eg.dw[l].data();
                    for (std::size_t i = 0; i < wd.size(); ++i) {
                        loss += cfg.l1 * std::abs(wd[i]) / static_cast<double>(bn);
                        gd[i] += cfg.l1 * (wd[i] > 0.0 ? 1.0 : wd[i] < 0.0 ? -1.0 : 0.0);
                    }
                }
            }
            if (!std::isfinite(loss))
                throw DivergenceError("train: non-finite loss", static_cast<long>(t));
            epoch_loss += loss;
            ++epoch_batches;

            // Flatten gradients in the same block order as view_params.
            std::size_t blk = 0;
            for (auto& g : eg.dw) grads[blk++] = g.data();
            for (auto& g : eg.db) grads[blk++] = g;
            grads[blk++] = lb.dmeans.data();
            grads[blk++] = lb.dlogvar.data();

            const double lr = schedule_lr(cfg, t, t_total);
            for (std::size_t b = 0; b < pv.blocks(); ++b) {
                double* p = pv.ptr[b];
                const auto& g = grads[b];
                const bool is_weight = b < n_weight_blocks;
                for (std::size_t i = 0; i < pv.len[b]; ++i) {
                    double gi = g[i];
                    if (cfg.weight_decay > 0.0 && is_weight && cfg.optimizer != Optimizer::AdamW)
                        gi += cfg.weight_decay * p[i];
                    if (cfg.optimizer == Optimizer::Sgd) {
                        p[i] -= lr * gi;
                    } else {
                        auto& m = adam.m[b][i];
                        auto& v = adam.v[b][i];
                        m = beta1 * m + (1.0 - beta1) * gi;
                        v = beta2 * v + (1.0 - beta2) * gi * gi;
                        const double mh = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
                        const double vh = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
                        p[i] -= lr * mh / (std::sqrt(vh) + eps_num);
                        if (cfg.optimizer == Optimizer::AdamW && cfg.weight_decay > 0.0 && is_weight)
                            p[i] -= lr * cfg.weight_decay * p[i];
                    }
                }
            }
        }
        rep.loss_trace.push_back(epoch_batches > 0 ? epoch_loss / static_cast<double>(epoch_batches)
                                                   : 0.0);
        if (n_val > 0) {
            const double vr = empirical_risk(rep.head, rep.encoder, val);
            rep.val_trace.push_back(vr);
            if (vr < best_val) {
                best_val = vr;
                best_epoch = epoch;
                since_best = 0;
                best = {rep.encoder, rep.head};
            } else if (++since_best > cfg.patience) {
                rep.early_stop_epoch = epoch;
                break;
            }
        }
    }
    if (n_val > 0 && std::isfinite(best_val)) {
        rep.encoder = best.enc;
        rep.head = best.head;
        if (!rep.early_stop_epoch) rep.early_stop_epoch = best_epoch;
    }
    rep.iterations = t;
    // The loss check above runs before each update; the final update can still
    // overflow, so the returned parameters are verified directly.
    for (const auto& w : rep.encoder.weights())
        if (!w.all_finite())
            throw DivergenceError("train: non-finite parameters after final update",
                                  static_cast<long>(t));
    rep.wallclock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

TrainReport train_sgd_budget(const Dataset& data, const TrainConfig& cfg, std::size_t t_budget,
                             const Encoder* warm) {
    if (t_budget < 1) throw ParameterError("train_sgd_budget: T must be >= 1");
    TrainConfig c = cfg;
    c.optimizer = Optimizer::Sgd;
    c.schedule = Schedule::InverseSqrt;
    c.iters = t_budget;
    c.epochs = 0;
    return train(data, c, warm);
}

Encoder train_regression(const Dataset& pilot, const std::vector<std::size_t>& hidden,
                         std::size_t iters, double learning_rate, std::uint64_t seed,
                         InitScheme scheme) {
    if (pilot.n() == 0) throw ParameterError("train_regression: empty pilot");
    const std::size_t d = pilot.x.cols();
    std::vector<std::size_t> dims;
    dims.push_back(d);
    for (std::size_t h : hidden) dims.push_back(h);
    dims.push_back(d);

    Rng root(seed);
    Rng init_rng = root.split("init");
    Rng shuffle_rng = root.split("shuffle");
    Rng dropout_rng = root.split("dropout");
    Encoder enc = Encoder::init(dims, scheme, init_rng);

    ParamView pv;
    for (auto& w : enc.weights()) pv.add(w.data());
    for (auto& b : enc.biases()) pv.add(b);
    AdamState adam(pv);

    constexpr std::size_t bs = 128;
    constexpr double beta1 = 0.9, beta2 = 0.999, eps_num = 1e-8;
    const std::size_t n = pilot.n();
    std::size_t t = 0;
    Matrix xb, zb;
    std::vector<std::size_t> dummy;
    ForwardCache cache;
    while (t < iters) {
        const std::vector<std::size_t> perm = shuffle_rng.permutation(n);
        for (std::size_t b0 = 0; b0 < n && t < iters; b0 += bs) {
            const std::size_t bn = std::min(bs, n - b0);
            xb = Matrix(bn, d);
            zb = Matrix(bn, d);
            for (std::size_t i = 0; i < bn; ++i) {
                const std::size_t src = perm[b0 + i];
                for (std::size_t j = 0; j < d; ++j) {
                    xb(i, j) = pilot.x(src, j);
                    zb(i, j) = pilot.z(src, j);
                }
            }
            const Matrix y = enc.forward_train(xb, dropout_rng, cache);
            Matrix dy(bn, d);
            double loss = 0.0;
            for (std::size_t i = 0; i < dy.size(); ++i) {
                const double r = y.data()[i] - zb.data()[i];
                loss += r * r;
                dy.data()[i] = 2.0 * r / static_cast<double>(bn);
            }
            if (!std::isfinite(loss))
                throw DivergenceError("train_regression: non-finite loss", static_cast<long>(t));
            ParamGrad eg = enc.backward(cache, dy);
            ++t;
            const double lr = learning_rate * 0.5 *
                              (1.0 + std::cos(std::numbers::pi * static_cast<double>(t) /
                                              static_cast<double>(iters)));
            std::size_t blk = 0;
            auto update = [&](const std::vector<double>& g) {
                double* p = pv.ptr[blk];
                for (std::size_t i = 0; i < pv.len[blk]; ++i) {
                    auto& m = adam.m[blk][i];
                    auto& v = adam.v[blk][i];
                    m = beta1 * m + (1.0 - beta1) * g[i];
                    v = beta2 * v + (1.0 - beta2) * g[i] * g[i];
                    const double mh = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
                    const double vh = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
                    p[i] -= lr * mh / (std::sqrt(vh) + eps_num);
                }
                ++blk;
            };
            for (auto& g : eg.dw) update(g.data());
            for (auto& g : eg.db) update(g);
        }
    }
    return enc;
}

std::vector<TrainReport> train_ensemble(const Dataset& data, const TrainConfig& cfg,
                                        std::size_t m, const Encoder* warm) {
    if (m < 1) throw ParameterError("train_ensemble: m must be >= 1");
    std::vector<TrainReport> reports;
    reports.reserve(m);
    Rng root(cfg.seed);
    for (std::size_t i = 0; i < m; ++i) {
        TrainConfig c = cfg;
        // Member 0 reuses the base seed so a singleton ensemble equals train().
        c.seed = i == 0 ? cfg.seed : root.split("ensemble-member", i).root_seed();
        reports.push_back(train(data, c, warm));
    }
    return reports;
}

TrainConfig preset(const std::string& name) {
    TrainConfig c;
    c.iters = 12000;
    auto is = [&](const char* a, const char* b = nullptr) {
        return name == a || (b != nullptr && name == b);
    };
    if (is("baseline")) return c;
    if (is("v7", "v7-longtrain")) {
        c.optimizer = Optimizer::AdamW;
        c.weight_decay = 1e-4;
        c.iters = 0;
        c.epochs = 2000;
        return c;
    }
    if (is("v8", "v8-largemodel")) {
        c.hidden = {128, 128, 128};
        c.dropout = 0.1;
        c.iters = 0;
        c.epochs = 800;
        return c;
    }
    if (is("v9", "v9-lowlr")) {
        c.learning_rate = 1e-4;
        c.iters = 0;
        c.epochs = 3000;
        return c;
    }
    if (is("v10", "v10-earlystop")) {
        c.early_stopping = true;
        c.patience = 50;
        c.val_fraction = 0.2;
        c.iters = 0;
        c.epochs = 2000;
        return c;
    }
    if (is("v11", "v11-twostage")) {
        c.two_stage = true;
        c.schedule = Schedule::Constant;
        c.iters = 0;
        c.epochs = 1000;
        return c;
    }
    if (is("v12", "v12-ensemble")) {
        c.ensemble = 5;
        return c;
    }
    if (is("v13", "v13-betterinit")) {
        c.init_scheme = InitScheme::Xavier;
        return c;
    }
    if (is("v14", "v14-l1reg")) {
        c.l1 = 1e-4;
        return c;
    }
    if (is("v15", "v15-combined")) {
        c.optimizer = Optimizer::AdamW;
        c.weight_decay = 1e-4;
        c.hidden = {128, 128, 128};
        c.dropout = 0.1;
        c.early_stopping = true;
        c.patience = 50;
        c.val_fraction = 0.2;
        c.iters = 0;
        c.epochs = 2000;
        return c;
    }
    throw ParameterError("preset: unknown name '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"baseline",      "v7-longtrain", "v8-largemodel", "v9-lowlr",
            "v10-earlystop", "v11-twostage", "v12-ensemble",  "v13-betterinit",
            "v14-l1reg",     "v15-combined"};
}

}  // namespace icalab
