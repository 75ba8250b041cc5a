#pragma once

#include <string>
#include <vector>

#include "icalab/datagen.hpp"
#include "icalab/ndmath.hpp"

namespace icalab {

enum class InitScheme { He, Xavier };

// Per-parameter gradients mirroring the encoder layout.
struct ParamGrad {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;

    void scale(double c);
    void add(const ParamGrad& other, double c = 1.0);
};

// Cached forward state consumed by backward().
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;     // pre-activations per hidden layer
    std::vector<Matrix> act;     // post-activation (and post-dropout) per hidden layer
    std::vector<Matrix> mask;    // dropout keep-masks (already scaled), train mode only
    bool train_mode = false;
    bool valid = false;
};

// MLP encoder: hidden layers use a leaky rectifier (slope 0.01), the output
// layer is linear. Dropout is inverted (scaled at train time).
class Encoder {
  public:
    Encoder() = default;
    // dims = {input d, hidden..., output d}
    static Encoder init(const std::vector<std::size_t>& dims, InitScheme scheme, Rng& rng,
                        double dropout = 0.0);

    std::size_t input_dim() const { return dims_.front(); }
    std::size_t output_dim() const { return dims_.back(); }
    std::size_t n_layers() const { return weights_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    double dropout() const { return dropout_; }
    void set_dropout(double rate);

    std::vector<Matrix>& weights() { return weights_; }
    const std::vector<Matrix>& weights() const { return weights_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }

    // Eval-mode forward: deterministic, dropout-free.
    Matrix forward(const Matrix& x) const;
    // Train-mode forward: draws dropout masks from rng and fills the cache.
    Matrix forward_train(const Matrix& x, Rng& rng, ForwardCache& cache) const;
    // Exact reverse-mode gradients for the batch captured in cache.
    ParamGrad backward(const ForwardCache& cache, const Matrix& dloss_dy,
                       Matrix* dloss_dx = nullptr) const;

    ParamGrad zero_grad() const;
    std::size_t param_count() const;

    void save(const std::string& path) const;
    static Encoder load(const std::string& path);

  private:
    std::vector<std::size_t> dims_;
    std::vector<Matrix> weights_;               // layer l: dims[l] x dims[l+1]
    std::vector<std::vector<double>> biases_;   // layer l: dims[l+1]
    double dropout_ = 0.0;
};

// Least-squares layer-wise warm start: hidden layers keep their random init,
// the final linear layer is fit by ridge regression of pilot sources z on the
// hidden features of pilot observations x. All parameters are then perturbed
// by Gaussian noise of relative size `scale`.
Encoder oracle_init(const SourceModel& model, const MixingNetwork& mix,
                    const std::vector<std::size_t>& dims, double scale, const Rng& rng,
                    std::size_t pilot_n = 4000);

// Same warm start against an arbitrary pilot dataset (used for linear mixing
// where x comes from generate_linear).
Encoder oracle_init_from_pilot(const Dataset& pilot, const std::vector<std::size_t>& dims,
                               double scale, const Rng& rng);

// Adds Gaussian noise of relative size `scale` to every parameter: weights
// get scale * per-matrix std(W) * N(0,1), biases get scale * N(0,1).
void perturb_params(Encoder& enc, double scale, Rng& rng);

}  // namespace icalab
