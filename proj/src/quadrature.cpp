#include "tlsc/quadrature.hpp"

namespace tlsc {

const TriangleRule& triangle_rule_degree4() {
    static const TriangleRule rule = [] {
        TriangleRule r;
        r.exactness_degree = 4;
        const double a1 = 0.44594849091596488632;
        const double w1 = 0.22338158967801146570;
        const double a2 = 0.09157621350977074346;
        const double w2 = 0.10995174365532186764;
        for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
            const double b = 1.0 - 2.0 * a;
            r.nodes.push_back({{b, a, a}, w});
            r.nodes.push_back({{a, b, a}, w});
            r.nodes.push_back({{a, a, b}, w});
        }
        return r;
    }();
    return rule;
}

}  // namespace tlsc
