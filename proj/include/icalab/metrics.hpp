#pragma once

#include <vector>

#include "icalab/datagen.hpp"
#include "icalab/encoder.hpp"
#include "icalab/ndmath.hpp"

namespace icalab {

enum class MccVariant { MaxForm, PermutationForm };

struct MccResult {
    double mcc = 0.0;
    std::vector<double> per_component;   // best absolute correlation per component
    std::vector<std::size_t> assignment; // component -> source index
    MccVariant variant = MccVariant::MaxForm;
};

// |Pearson| matrix between columns of yhat and z (two-pass, numerically stable).
Matrix abs_correlation(const Matrix& yhat, const Matrix& z);

// Max-form: mean over components of max_j |rho|. Permutation-form: the
// assignment problem maximizing total |rho| under a bijection.
MccResult mcc(const Matrix& yhat, const Matrix& z, MccVariant variant);

double identification_error(const Matrix& yhat, const Matrix& z, MccVariant variant);

// Member outputs are aligned to the first member (permutation + sign), then
// averaged; MCC is computed on the average.
MccResult mcc_ensemble(const std::vector<const Encoder*>& members, const Dataset& data,
                       MccVariant variant);

// Maximum-weight bijection on a square score matrix (Hungarian algorithm).
std::vector<std::size_t> max_assignment(const Matrix& score);

}  // namespace icalab
