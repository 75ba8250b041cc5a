#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icalab/ndmath.hpp"

namespace icalab {

// Per-auxiliary-category conditional source distribution: component-wise
// diagonal Gaussians N(means[u], diag(stds[u]^2)).
struct SourceModel {
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<std::vector<double>> means;  // k vectors of length d
    std::vector<std::vector<double>> stds;   // k vectors of length d, > 0

    void validate() const;
};

// Fixed random smooth mixing: x = tanh(z W1 + b1) W2 + b2, dims d -> 2d -> d.
struct MixingNetwork {
    Matrix w1;               // d x 2d
    std::vector<double> b1;  // 2d
    Matrix w2;               // 2d x d
    std::vector<double> b2;  // d

    Matrix apply(const Matrix& z) const;
    std::size_t input_dim() const { return w1.rows(); }
};

struct DatasetMeta {
    std::size_t d = 0;
    std::size_t k = 0;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

struct Dataset {
    Matrix x;                   // n x d observations
    std::vector<std::size_t> u; // n labels in [0, k)
    Matrix z;                   // n x d ground-truth sources
    DatasetMeta meta;

    std::size_t n() const { return x.rows(); }
};

// One lower-bound instance: category 0 is N(0, I), category 1 is N(mu*theta, I).
struct FanoInstance {
    std::vector<int> theta;  // entries in {-1, +1}
    double mu = 0.0;         // sqrt(2*delta/d)
    double delta = 0.0;

    double closed_form_kl() const;  // d * mu^2 / 2
    SourceModel as_source_model() const;
};

// KL(N(m0, diag(s0^2)) || N(m1, diag(s1^2))) for diagonal Gaussians.
double gaussian_kl_diag(const std::vector<double>& m0, const std::vector<double>& s0,
                        const std::vector<double>& m1, const std::vector<double>& s1);

// Minimum pairwise KL over ordered category pairs (Assumption 4 diversity).
double diversity(const SourceModel& model);

// Scales all mean vectors by sqrt(target / current diversity). Requires equal
// per-category variances so KL depends on mean differences only.
SourceModel calibrate_diversity(const SourceModel& model, double target);

// Deterministic-grid equal-variance model: category u has mean entry i equal
// to cos(2*pi*(u*d + i)/(k*d)), unit variances, calibrated to target delta.
SourceModel grid_source_model(std::size_t d, std::size_t k, double target_delta);

// Experiment-grade model: seeded random mean patterns plus per-category
// log-variance modulation (amplitude 3/sqrt(d), categories 0 and 1 sharing
// variances so the zero-scale diversity floor is 0). A single joint scale on
// (mean patterns, log-variance patterns) is bisected to hit the target delta,
// then means/stds are jointly rescaled per component to unit marginal
// variance, which leaves every pairwise KL unchanged.
SourceModel modulated_source_model(std::size_t d, std::size_t k, double target_delta,
                                   const Rng& rng);

// Mixing construction from i.i.d. N(0, 1/sqrt(fan-in)) weights; each weight
// matrix rescaled so its smallest singular value exceeds 1e-3.
MixingNetwork make_mixing(std::size_t d, const Rng& rng);

// Mixing with column-orthogonalized weights (hidden layer gain 0.6,
// orthonormal output layer). Conditioning is seed-independent, which the
// scaling experiments need.
MixingNetwork make_mixing_orthogonal(std::size_t d, const Rng& rng);

Dataset generate(const SourceModel& model, const MixingNetwork& mix, std::size_t n,
                 const Rng& rng);

// Linear mixing x = z A^T; A must be d x d with full numerical rank.
Dataset generate_linear(const SourceModel& model, const Matrix& a, std::size_t n,
                        const Rng& rng);

// All 2^d sign patterns at diversity delta; d <= 16 enforced.
std::vector<FanoInstance> fano_family(std::size_t d, double delta);

// Smallest singular value via one-sided Jacobi; exact enough for d <= 64.
double min_singular_value(const Matrix& a);

// Serialization. Binary format: magic "ICLD", version, header, columnar data.
void save_dataset_binary(const Dataset& ds, const std::string& path);
Dataset load_dataset_binary(const std::string& path);
void save_dataset_csv(const Dataset& ds, const std::string& path);

}  // namespace icalab
