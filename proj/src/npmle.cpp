#include "cbpmde/npmle.hpp"

#include "cbpmde/errors.hpp"

namespace cbpmde {

Pmf npmle(const FamilyTree& tree) {
    const TreeTotals t = totals(tree);
    if (t.delta <= 0)
        throw NoProgenitorsError("no progenitors observed; offspring law not estimable");

    std::vector<double> p(t.y.size());
    for (std::size_t k = 0; k < t.y.size(); ++k)
        p[k] = static_cast<double>(t.y[k]) / static_cast<double>(t.delta);
    while (!p.empty() && p.back() == 0.0) p.pop_back();
    return Pmf(std::move(p), 0.0);
}

}  // namespace cbpmde
