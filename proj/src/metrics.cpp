#include "icalab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icalab {

Matrix abs_correlation(const Matrix& yhat, const Matrix& z) {
    if (yhat.rows() != z.rows()) throw ShapeError("abs_correlation: row counts differ");
    if (yhat.rows() < 3) throw ParameterError("abs_correlation: need n >= 3");
    const std::size_t n = yhat.rows(), dy = yhat.cols(), dz = z.cols();

    auto center_scale = [n](const Matrix& m, const char* tag) {
        Matrix c(m.rows(), m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double mu = 0.0;
            for (std::size_t i = 0; i < n; ++i) mu += m(i, j);
            mu /= static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                c(i, j) = m(i, j) - mu;
                ss += c(i, j) * c(i, j);
            }
            if (ss <= 0.0)
                throw DegenerateMetricError(std::string("mcc: zero-variance column ") +
                                            std::to_string(j) + " in " + tag);
            const double inv = 1.0 / std::sqrt(ss);
            for (std::size_t i = 0; i < n; ++i) c(i, j) *= inv;
        }
        return c;
    };
    if (!yhat.all_finite())
        throw DegenerateMetricError("mcc: non-finite entries in yhat");
    const Matrix cy = center_scale(yhat, "yhat");
    const Matrix cz = center_scale(z, "z");
    Matrix corr = matmul(transpose(cy), cz);
    for (double& v : corr.data()) v = std::abs(v);
    (void)dy;
    (void)dz;
    return corr;
}

std::vector<std::size_t> max_assignment(const Matrix& score) {
    if (score.rows() != score.cols()) throw ShapeError("max_assignment: square matrix required");
    if (!score.all_finite())
        throw DegenerateMetricError("max_assignment: non-finite score entries");
    const std::size_t n = score.rows();
    // Hungarian algorithm (potentials form) on cost = -score.
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -score(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assign(n);
    for (std::size_t j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
    return assign;
}

MccResult mcc(const Matrix& yhat, const Matrix& z, MccVariant variant) {
    if (yhat.cols() != z.cols()) throw ShapeError("mcc: column counts differ");
    const Matrix corr = abs_correlation(yhat, z);
    const std::size_t d = corr.rows();
    MccResult res;
    res.variant = variant;
    res.per_component.resize(d);
    res.assignment.resize(d);
    if (variant == MccVariant::MaxForm) {
        for (std::size_t i = 0; i < d; ++i) {
            std::size_t best_j = 0;
            for (std::size_t j = 1; j < d; ++j)
                if (corr(i, j) > corr(i, best_j)) best_j = j;
            res.assignment[i] = best_j;
            res.per_component[i] = corr(i, best_j);
        }
    } else {
        res.assignment = max_assignment(corr);
        for (std::size_t i = 0; i < d; ++i) res.per_component[i] = corr(i, res.assignment[i]);
    }
    res.mcc = mean_of(res.per_component);
    return res;
}

double identification_error(const Matrix& yhat, const Matrix& z, MccVariant variant) {
    return 1.0 - mcc(yhat, z, variant).mcc;
}

MccResult mcc_ensemble(const std::vector<const Encoder*>& members, const Dataset& data,
                       MccVariant variant) {
    if (members.empty()) throw ParameterError("mcc_ensemble: need at least one member");
    const Matrix ref = members[0]->forward(data.x);
    const std::size_t n = ref.rows(), d = ref.cols();

    // Standardize columns so averaging weights members equally.
    auto standardized = [n, d](const Matrix& m) {
        Matrix out(m.rows(), m.cols());
        for (std::size_t j = 0; j < d; ++j) {
            double mu = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) mu += m(i, j);
            mu /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) ss += (m(i, j) - mu) * (m(i, j) - mu);
            ss = std::sqrt(ss / static_cast<double>(n));
            if (ss <= 0.0) throw DegenerateMetricError("mcc_ensemble: zero-variance output");
            for (std::size_t i = 0; i < n; ++i) out(i, j) = (m(i, j) - mu) / ss;
        }
        return out;
    };

    Matrix avg = standardized(ref);
    for (std::size_t m = 1; m < members.size(); ++m) {
        const Matrix ym = standardized(members[m]->forward(data.x));
        // Align to the reference member: bijection on |corr|, then sign match.
        const Matrix corr = abs_correlation(ym, avg);
        const std::vector<std::size_t> assign = max_assignment(corr);
        for (std::size_t jm = 0; jm < d; ++jm) {
            const std::size_t jr = assign[jm];
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += ym(i, jm) * avg(i, jr);
            const double sign = dot >= 0.0 ? 1.0 : -1.0;
            for (std::size_t i = 0; i < n; ++i)
                avg(i, jr) = (avg(i, jr) * static_cast<double>(m) + sign * ym(i, jm)) /
                             static_cast<double>(m + 1);
        }
    }
    return mcc(avg, data.z, variant);
}

}  // namespace icalab
