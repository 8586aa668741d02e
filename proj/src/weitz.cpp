#include "spinimage/weitz.hpp"

#include <string>

#include "spinimage/bp.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"

namespace spinimage {

std::vector<ExternalField> weitz_fields(const InteractionMatrix& a, int d) {
    validate(a);
    if (a.q != 2) throw ValidationError("Weitz construction requires two spins");
    std::vector<ExternalField> fields;
    fields.reserve(d);
    for (int i = 0; i < d; ++i) {
        ExternalField f;
        f.weights.resize(d);
        for (int j = 0; j < d; ++j) {
            if (j < i)
                f.weights[j] = {a.at(0, 0), a.at(0, 1)};
            else if (j == i)
                f.weights[j] = {1.0, 1.0};
            else
                f.weights[j] = {a.at(1, 0), a.at(1, 1)};
        }
        fields.push_back(std::move(f));
    }
    return fields;
}

double weitz_check(const InteractionMatrix& a, const JointDistribution& mu) {
    if (a.q != 2 || mu.q != 2) throw ValidationError("Weitz construction requires two spins");
    validate(mu);
    auto fields = weitz_fields(a, mu.d);

    ProductMeasure tilted;
    tilted.marginals.resize(mu.d);
    for (int i = 0; i < mu.d; ++i) {
        JointDistribution ti;
        try {
            ti = tilt(fields[i], mu);
        } catch (const InfeasibleError&) {
            throw InfeasibleError("weitz_check: degenerate support at prefix index " +
                                  std::to_string(i));
        }
        tilted.marginals[i] = marginalize(ti, {i}).weights;
    }

    std::vector<double> lhs = bp(a, mu);
    std::vector<double> rhs = bp_product(a, tilted);
    return linf_diff(lhs, rhs);
}

}  // namespace spinimage
