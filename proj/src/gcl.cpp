#include "icalab/gcl.hpp"

#include <algorithm>
#include <cmath>

namespace icalab {

GclHead GclHead::init(std::size_t k, std::size_t d, Rng& rng, bool shared_variance) {
    if (k < 2) throw ParameterError("GclHead: k must be >= 2");
    GclHead head;
    head.k = k;
    head.d = d;
    head.shared_variance = shared_variance;
    head.means = Matrix(k, d);
    for (double& v : head.means.data()) v = 0.1 * rng.normal();
    head.log_var = Matrix(k, d);
    return head;
}

void GclHead::moment_init(const Matrix& y, const std::vector<std::size_t>& u) {
    if (y.cols() != d) throw ShapeError("moment_init: dim mismatch");
    std::vector<std::size_t> counts(k, 0);
    Matrix sum(k, d), sumsq(k, d);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        const std::size_t q = u[i];
        if (q >= k) throw LabelError("moment_init: label out of range");
        ++counts[q];
        for (std::size_t j = 0; j < d; ++j) {
            sum(q, j) += y(i, j);
            sumsq(q, j) += y(i, j) * y(i, j);
        }
    }
    for (std::size_t q = 0; q < k; ++q) {
        if (counts[q] < 2) continue;  // keep the initialized values for empty bins
        const double c = static_cast<double>(counts[q]);
        for (std::size_t j = 0; j < d; ++j) {
            const double m = sum(q, j) / c;
            means(q, j) = m;
            const double var = std::max(sumsq(q, j) / c - m * m, 1e-8);
            log_var(q, j) = std::log(var);
        }
    }
    if (shared_variance) {
        // Tie the variance rows to their category-average.
        for (std::size_t j = 0; j < d; ++j) {
            double avg = 0.0;
            for (std::size_t q = 0; q < k; ++q) avg += log_var(q, j);
            avg /= static_cast<double>(k);
            for (std::size_t q = 0; q < k; ++q) log_var(q, j) = avg;
        }
    }
}

LossBatch gcl_loss(const GclHead& head, const Matrix& y, const std::vector<std::size_t>& u) {
    if (y.cols() != head.d) throw ShapeError("gcl_loss: y dim mismatch");
    if (y.rows() != u.size()) throw ShapeError("gcl_loss: label count mismatch");
    const std::size_t n = y.rows(), k = head.k, d = head.d;

    LossBatch out;
    out.per_sample.resize(n);
    out.dy = Matrix(n, d);
    out.dmeans = Matrix(k, d);
    out.dlogvar = Matrix(k, d);

    std::vector<double> ll(k);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ui = u[i];
        if (ui >= k) throw LabelError("gcl_loss: label out of range");
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < k; ++q) {
            const std::size_t vrow = head.shared_variance ? 0 : q;
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = y(i, j) - head.means(q, j);
                const double lv = head.log_var(vrow, j);
                s += diff * diff * std::exp(-lv) + lv;
            }
            ll[q] = -0.5 * s;
            mx = std::max(mx, ll[q]);
        }
        // Log-sum-exp with max subtraction for stability.
        double sum = 0.0;
        for (std::size_t q = 0; q < k; ++q) sum += std::exp(ll[q] - mx);
        const double lse = mx + std::log(sum);
        out.per_sample[i] = std::max(0.0, lse - ll[ui]);
        out.mean += out.per_sample[i] * inv_n;

        for (std::size_t q = 0; q < k; ++q) {
            // d(mean loss)/d ll[q] = (softmax_q - 1{q=u}) / n
            double g = std::exp(ll[q] - lse) * inv_n;
            if (q == ui) g -= inv_n;
            if (g == 0.0) continue;
            const std::size_t vrow = head.shared_variance ? 0 : q;
            for (std::size_t j = 0; j < d; ++j) {
                const double lv = head.log_var(vrow, j);
                const double diff = y(i, j) - head.means(q, j);
                const double w = diff * std::exp(-lv);
                out.dy(i, j) += -g * w;
                out.dmeans(q, j) += g * w;
                out.dlogvar(vrow, j) += g * (-0.5) * (1.0 - diff * w);
            }
        }
    }
    if (head.shared_variance) {
        // Broadcast the tied-variance gradient so callers can update any row.
        for (std::size_t q = 1; q < k; ++q)
            for (std::size_t j = 0; j < d; ++j) out.dlogvar(q, j) = out.dlogvar(0, j);
    }
    return out;
}

double empirical_risk(const GclHead& head, const Encoder& enc, const Dataset& data) {
    if (data.n() == 0) throw ParameterError("empirical_risk: empty dataset");
    const Matrix y = enc.forward(data.x);
    return gcl_loss(head, y, data.u).mean;
}

SelfBoundingReport self_bounding_check(const GclHead& head, const Encoder& enc,
                                       const Dataset& data, double m_est) {
    if (!(m_est > 0.0)) throw ParameterError("self_bounding_check: M_est must be > 0");
    const Matrix y = enc.forward(data.x);
    const LossBatch lb = gcl_loss(head, y, data.u);
    SelfBoundingReport rep;
    rep.mean = lb.mean;
    rep.var = variance_of(lb.per_sample);
    rep.holds = rep.var <= m_est * rep.mean;
    return rep;
}

}  // namespace icalab
