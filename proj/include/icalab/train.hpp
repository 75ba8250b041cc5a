#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icalab/encoder.hpp"
#include "icalab/gcl.hpp"

namespace icalab {

enum class Optimizer { Sgd, Adam, AdamW };
enum class Schedule { Constant, InverseSqrt, CosineDecay };

struct TrainConfig {
    Optimizer optimizer = Optimizer::Adam;
    Schedule schedule = Schedule::CosineDecay;
    double learning_rate = 1e-3;
    double weight_decay = 0.0;
    std::size_t epochs = 0;      // epoch budget; ignored when iters > 0
    std::size_t iters = 0;       // iteration budget T (steps, not epochs)
    std::size_t batch_size = 128;
    double dropout = 0.0;
    double l1 = 0.0;             // L1 penalty on encoder weights
    bool early_stopping = false;
    std::size_t patience = 50;
    double val_fraction = 0.0;   // in [0, 0.5]
    bool two_stage = false;      // first half at lr, second half at lr/10
    std::size_t ensemble = 1;
    InitScheme init_scheme = InitScheme::He;
    std::vector<std::size_t> hidden = {64, 64};
    bool shared_variance_head = false;
    bool moment_init_head = true;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainReport {
    Encoder encoder;
    GclHead head;
    std::vector<double> loss_trace;  // mean mini-batch loss per epoch
    std::vector<double> val_trace;   // validation risk per epoch (if enabled)
    std::size_t iterations = 0;
    std::optional<std::size_t> early_stop_epoch;
    double wallclock_sec = 0.0;
};

// Full training loop. When `warm` is provided it is used as the initial
// encoder; otherwise a fresh random init per cfg is drawn. Deterministic
// given (data, cfg); throws DivergenceError on non-finite loss.
TrainReport train(const Dataset& data, const TrainConfig& cfg,
                  const Encoder* warm = nullptr);

// Exactly T mini-batch SGD steps with the inverse-sqrt schedule.
TrainReport train_sgd_budget(const Dataset& data, const TrainConfig& cfg, std::size_t t_budget,
                             const Encoder* warm = nullptr);

// Supervised squared-loss regression of z on x (pilot pretrain). Adam with
// cosine decay, batch 128. Used for warm starts; the GCL stage follows.
Encoder train_regression(const Dataset& pilot, const std::vector<std::size_t>& hidden,
                         std::size_t iters, double learning_rate, std::uint64_t seed,
                         InitScheme scheme = InitScheme::He);

// m independent trainings with split seeds.
std::vector<TrainReport> train_ensemble(const Dataset& data, const TrainConfig& cfg,
                                        std::size_t m, const Encoder* warm = nullptr);

// Named presets for the variant sweep (V7..V15). Unknown name -> ParameterError.
TrainConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace icalab
