#pragma once

#include "cbpmde/pmf.hpp"
#include "cbpmde/tree.hpp"

namespace cbpmde {

// Nonparametric MLE of the offspring law from the whole family tree:
// p_hat[k] = Y_{n-1}(k) / Delta_{n-1}.  Exact normalization follows from the
// integer identity sum_k Y(k) = Delta.  Throws NoProgenitorsError when
// Delta = 0.
Pmf npmle(const FamilyTree& tree);

}  // namespace cbpmde
