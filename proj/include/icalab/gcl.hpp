#pragma once

#include <vector>

#include "icalab/datagen.hpp"
#include "icalab/encoder.hpp"
#include "icalab/ndmath.hpp"

namespace icalab {

// Gaussian-softmax conditional model p(y|u): per-category means and diagonal
// log-variances. With shared_variance the log-variances are tied across
// categories (a single per-dimension vector, stored broadcast in row 0).
// Untied variances make the category likelihoods quadratic in y, which is
// what lets GCL pin down the sources beyond an affine ambiguity.
struct GclHead {
    std::size_t k = 0;
    std::size_t d = 0;
    Matrix means;    // k x d
    Matrix log_var;  // k x d (row 0 authoritative when shared)
    bool shared_variance = false;

    static GclHead init(std::size_t k, std::size_t d, Rng& rng, bool shared_variance = false);
    // Sets means/log-variances to per-category sample moments of y.
    void moment_init(const Matrix& y, const std::vector<std::size_t>& u);
};

struct LossBatch {
    std::vector<double> per_sample;  // >= 0
    double mean = 0.0;
    Matrix dy;       // gradient of the mean loss w.r.t. encoder outputs
    Matrix dmeans;   // gradient w.r.t. head means
    Matrix dlogvar;  // gradient w.r.t. head log-variances
};

// Cross-entropy of the softmax over per-category Gaussian log-likelihoods:
// loss_i = logsumexp_u' ll(y_i, u') - ll(y_i, u_i). Gradients are exact.
LossBatch gcl_loss(const GclHead& head, const Matrix& y, const std::vector<std::size_t>& u);

// Mean per-sample loss over the dataset, encoder in eval mode.
double empirical_risk(const GclHead& head, const Encoder& enc, const Dataset& data);

struct SelfBoundingReport {
    double mean = 0.0;
    double var = 0.0;
    bool holds = false;
};

// Checks Var(loss) <= M_est * E[loss] over per-sample losses.
SelfBoundingReport self_bounding_check(const GclHead& head, const Encoder& enc,
                                       const Dataset& data, double m_est);

}  // namespace icalab
