#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "icalab/encoder.hpp"
#include "icalab/gcl.hpp"
#include "icalab/metrics.hpp"

using namespace icalab;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

// Per-sample scalar-loop forward oracle mirroring the encoder definition.
std::vector<double> forward_oracle(const Encoder& enc, const double* x) {
    std::vector<double> cur(x, x + enc.input_dim());
    for (std::size_t l = 0; l < enc.n_layers(); ++l) {
        const Matrix& w = enc.weights()[l];
        const auto& b = enc.biases()[l];
        std::vector<double> next(w.cols());
        for (std::size_t j = 0; j < w.cols(); ++j) {
            double acc = b[j];
            for (std::size_t i = 0; i < w.rows(); ++i) acc += cur[i] * w(i, j);
            next[j] = (l + 1 < enc.n_layers() && acc < 0.0) ? 0.01 * acc : acc;
        }
        cur = std::move(next);
    }
    return cur;
}

// Scalar squared loss to a target, used for gradient checks without GCL.
double squared_loss(const Matrix& y, const Matrix& t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y.data()[i] - t.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(y.rows());
}

std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("zero parameters give zero output") {
    Rng rng(1);
    Encoder enc = Encoder::init({3, 8, 3}, InitScheme::He, rng);
    for (auto& w : enc.weights())
        for (auto& v : w.data()) v = 0.0;
    Matrix x = random_matrix(4, 3, rng);
    const Matrix y = enc.forward(x);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y.data()[i] == 0.0);
}

TEST_CASE("single identity layer is the identity map") {
    Rng rng(2);
    Encoder enc = Encoder::init({3, 3}, InitScheme::He, rng);
    enc.weights()[0] = Matrix::identity(3);
    for (auto& b : enc.biases()[0]) b = 0.0;
    const Matrix x = random_matrix(5, 3, rng);
    const Matrix y = enc.forward(x);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y.data()[i] == x.data()[i]);
}

TEST_CASE("batch forward matches per-sample scalar oracle") {
    Rng rng(3);
    Encoder enc = Encoder::init({4, 6, 5, 4}, InitScheme::He, rng);
    const Matrix x = random_matrix(3, 4, rng);
    const Matrix y = enc.forward(x);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto row = forward_oracle(enc, x.row_ptr(i));
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(y(i, j) - row[j]) < 1e-12);
    }
}

TEST_CASE("forward rejects wrong input width") {
    Rng rng(4);
    Encoder enc = Encoder::init({4, 8, 4}, InitScheme::He, rng);
    CHECK_THROWS_AS(enc.forward(Matrix(2, 3)), ShapeError);
}

TEST_CASE("eval forward is deterministic even with dropout configured") {
    Rng rng(5);
    Encoder enc = Encoder::init({4, 16, 4}, InitScheme::He, rng, 0.5);
    const Matrix x = random_matrix(6, 4, rng);
    const Matrix y1 = enc.forward(x);
    const Matrix y2 = enc.forward(x);
    for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1.data()[i] == y2.data()[i]);
}

TEST_CASE("backward with zero upstream gradient gives zero gradients") {
    Rng rng(6);
    Encoder enc = Encoder::init({3, 8, 3}, InitScheme::He, rng);
    const Matrix x = random_matrix(4, 3, rng);
    ForwardCache cache;
    Rng drop = rng.split("drop");
    enc.forward_train(x, drop, cache);
    const ParamGrad g = enc.backward(cache, Matrix(4, 3, 0.0));
    for (const auto& dw : g.dw)
        for (const auto v : dw.data()) CHECK(v == 0.0);
    for (const auto& db : g.db)
        for (const auto v : db) CHECK(v == 0.0);
}

TEST_CASE("backward requires a cached forward pass") {
    Rng rng(7);
    Encoder enc = Encoder::init({3, 8, 3}, InitScheme::He, rng);
    ForwardCache cache;
    CHECK_THROWS_AS(enc.backward(cache, Matrix(4, 3, 0.0)), UsageError);
}

TEST_CASE("linear encoder squared-loss gradient matches the closed form") {
    Rng rng(8);
    Encoder enc = Encoder::init({3, 3}, InitScheme::He, rng);
    const std::size_t n = 10;
    const Matrix x = random_matrix(n, 3, rng);
    const Matrix t = random_matrix(n, 3, rng);
    ForwardCache cache;
    Rng drop = rng.split("drop");
    const Matrix y = enc.forward_train(x, drop, cache);
    // loss = ||XW + b - T||^2 / n, dL/dy = 2(y - T)/n, dL/dW = X^T dL/dy.
    Matrix dy(n, 3);
    for (std::size_t i = 0; i < dy.size(); ++i)
        dy.data()[i] = 2.0 * (y.data()[i] - t.data()[i]) / static_cast<double>(n);
    const ParamGrad g = enc.backward(cache, dy);
    const Matrix expect = matmul(transpose(x), dy);
    for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(std::abs(g.dw[0].data()[i] - expect.data()[i]) < 1e-10);
}

TEST_CASE("finite-difference gradient check across the three architectures") {
    const std::vector<std::vector<std::size_t>> hiddens = {
        {32, 32}, {64, 64}, {128, 128, 128}};
    for (const auto& hidden : hiddens) {
        std::vector<std::size_t> dims = {4};
        dims.insert(dims.end(), hidden.begin(), hidden.end());
        dims.push_back(4);
        Rng rng(17 + hidden.size());
        Encoder enc = Encoder::init(dims, InitScheme::He, rng);
        const std::size_t n = 6;
        const Matrix x = random_matrix(n, 4, rng);
        const Matrix t = random_matrix(n, 4, rng);

        ForwardCache cache;
        Rng drop = rng.split("drop");
        const Matrix y = enc.forward_train(x, drop, cache);
        Matrix dy(n, 4);
        for (std::size_t i = 0; i < dy.size(); ++i)
            dy.data()[i] = 2.0 * (y.data()[i] - t.data()[i]) / static_cast<double>(n);
        const ParamGrad g = enc.backward(cache, dy);

        Rng pick = rng.split("pick");
        const double h = 1e-5;
        for (int c = 0; c < 50; ++c) {
            const std::size_t l = pick.below(enc.n_layers());
            const std::size_t idx = pick.below(enc.weights()[l].size());
            double& w = enc.weights()[l].data()[idx];
            const double saved = w;
            w = saved + h;
            const double lp = squared_loss(enc.forward(x), t);
            w = saved - h;
            const double lm = squared_loss(enc.forward(x), t);
            w = saved;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = g.dw[l].data()[idx];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
            CHECK(std::abs(fd - an) / denom < 1e-5);
        }
    }
}

TEST_CASE("backward also produces the input gradient") {
    Rng rng(9);
    Encoder enc = Encoder::init({3, 8, 3}, InitScheme::He, rng);
    const Matrix x = random_matrix(2, 3, rng);
    const Matrix t = random_matrix(2, 3, rng);
    ForwardCache cache;
    Rng drop = rng.split("drop");
    const Matrix y = enc.forward_train(x, drop, cache);
    Matrix dy(2, 3);
    for (std::size_t i = 0; i < dy.size(); ++i)
        dy.data()[i] = 2.0 * (y.data()[i] - t.data()[i]) / 2.0;
    Matrix dx;
    enc.backward(cache, dy, &dx);
    // Check dx by finite differences on one input coordinate.
    Matrix xp = x, xm = x;
    const double h = 1e-6;
    xp(0, 1) += h;
    xm(0, 1) -= h;
    const double fd = (squared_loss(enc.forward(xp), t) - squared_loss(enc.forward(xm), t)) /
                      (2.0 * h);
    CHECK(std::abs(fd - dx(0, 1)) / std::max(std::abs(fd), 1e-8) < 1e-4);
}

TEST_CASE("he and xavier init standard deviations") {
    Rng rng(10);
    Encoder he = Encoder::init({256, 256, 256}, InitScheme::He, rng);
    Encoder xa = Encoder::init({256, 256, 256}, InitScheme::Xavier, rng);
    auto sample_std = [](const Matrix& w) {
        double m = 0.0;
        for (const auto v : w.data()) m += v;
        m /= static_cast<double>(w.size());
        double s = 0.0;
        for (const auto v : w.data()) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(w.size()));
    };
    CHECK(std::abs(sample_std(he.weights()[0]) - std::sqrt(2.0 / 256.0)) /
              std::sqrt(2.0 / 256.0) < 0.05);
    CHECK(std::abs(sample_std(xa.weights()[0]) - std::sqrt(2.0 / 512.0)) /
              std::sqrt(2.0 / 512.0) < 0.05);
    for (const auto& b : he.biases())
        for (const auto v : b) CHECK(v == 0.0);
}

TEST_CASE("init is deterministic in the seed and rejects short dims") {
    Rng a(12), b(12);
    Encoder ea = Encoder::init({4, 8, 4}, InitScheme::He, a);
    Encoder eb = Encoder::init({4, 8, 4}, InitScheme::He, b);
    for (std::size_t l = 0; l < ea.n_layers(); ++l)
        for (std::size_t i = 0; i < ea.weights()[l].size(); ++i)
            CHECK(ea.weights()[l].data()[i] == eb.weights()[l].data()[i]);
    Rng c(1);
    CHECK_THROWS_AS(Encoder::init({4}, InitScheme::He, c), ParameterError);
}

TEST_CASE("dropout zeroes about p of hidden units with inverted scaling") {
    Rng rng(13);
    const double p = 0.3;
    Encoder enc = Encoder::init({4, 10000, 4}, InitScheme::He, rng, p);
    const Matrix x = random_matrix(1, 4, rng);
    ForwardCache cache;
    Rng drop = rng.split("drop");
    enc.forward_train(x, drop, cache);
    const Matrix& mask = cache.mask[0];
    std::size_t zeros = 0;
    for (const auto v : mask.data()) {
        if (v == 0.0) ++zeros;
        else CHECK(v == doctest::Approx(1.0 / (1.0 - p)).epsilon(1e-12));
    }
    const double frac = static_cast<double>(zeros) / static_cast<double>(mask.size());
    CHECK(std::abs(frac - p) < 0.02);
}

TEST_CASE("encoder checkpoint round-trip") {
    Rng rng(14);
    Encoder enc = Encoder::init({3, 16, 3}, InitScheme::He, rng, 0.1);
    const std::string path = tmp_path("icalab_test_enc.bin");
    enc.save(path);
    const Encoder back = Encoder::load(path);
    CHECK(back.dims() == enc.dims());
    CHECK(back.dropout() == enc.dropout());
    for (std::size_t l = 0; l < enc.n_layers(); ++l)
        for (std::size_t i = 0; i < enc.weights()[l].size(); ++i)
            CHECK(back.weights()[l].data()[i] == enc.weights()[l].data()[i]);
    std::remove(path.c_str());
}

TEST_CASE("oracle_init with scale 0 inverts a linear mixing exactly") {
    const SourceModel model = grid_source_model(3, 4, 1.0);
    Rng rng(15);
    // Linear mixing via a well-conditioned random matrix.
    Matrix a = Matrix::identity(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) += 0.3 * rng.normal();
    Rng g(16);
    const Dataset pilot = generate_linear(model, a, 2000, g);
    const Encoder enc = oracle_init_from_pilot(pilot, {3, 3}, 0.0, rng.split("init"));
    const Matrix yhat = enc.forward(pilot.x);
    const MccResult r = mcc(yhat, pilot.z, MccVariant::PermutationForm);
    CHECK(r.mcc > 1.0 - 1e-6);
    // The fitted single layer approximates (A^T)^{-1} so yhat recovers z.
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(yhat(i, j) - pilot.z(i, j)) < 1e-3);
}

TEST_CASE("oracle_init quality degrades with the perturbation scale") {
    const SourceModel model = grid_source_model(4, 9, 1.0);
    Rng rng(18);
    const MixingNetwork mix = make_mixing_orthogonal(4, rng.split("mix"));
    Rng eval_rng = rng.split("eval");
    const Dataset eval = generate(model, mix, 2000, eval_rng);

    double small_sum = 0.0, random_sum = 0.0, huge_sum = 0.0;
    const int reps = 5;
    for (int s = 0; s < reps; ++s) {
        const Rng seed_rng = rng.split("seed", s);
        const Encoder warm =
            oracle_init(model, mix, {4, 64, 64, 4}, 0.1, seed_rng.split("oracle"));
        const Encoder wild =
            oracle_init(model, mix, {4, 64, 64, 4}, 10.0, seed_rng.split("wild"));
        Rng init_rng = seed_rng.split("rand");
        const Encoder cold = Encoder::init({4, 64, 64, 4}, InitScheme::He, init_rng);
        small_sum += mcc(warm.forward(eval.x), eval.z, MccVariant::MaxForm).mcc;
        huge_sum += mcc(wild.forward(eval.x), eval.z, MccVariant::MaxForm).mcc;
        random_sum += mcc(cold.forward(eval.x), eval.z, MccVariant::MaxForm).mcc;
    }
    CHECK(small_sum / reps > random_sum / reps);
    // Scale 10 wipes out the warm start: no better than random beyond seed noise.
    CHECK(huge_sum / reps < random_sum / reps + 0.15);
}

TEST_CASE("perturb_params changes every parameter and is seeded") {
    Rng rng(19);
    Encoder a = Encoder::init({3, 8, 3}, InitScheme::He, rng);
    Encoder b = a;
    Rng pa(7), pb(7);
    perturb_params(a, 0.5, pa);
    perturb_params(b, 0.5, pb);
    for (std::size_t l = 0; l < a.n_layers(); ++l)
        for (std::size_t i = 0; i < a.weights()[l].size(); ++i)
            CHECK(a.weights()[l].data()[i] == b.weights()[l].data()[i]);
}
