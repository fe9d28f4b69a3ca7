#pragma once

#include "colouring.hpp"
#include "geometry.hpp"

#include <vector>

namespace multijoint {

/// Self-contained two-colouring for the plane. Family 1 is blue, family 2
/// is red. Every blue line with at most sqrt(2)*sqrt(|J|) bijoints colours
/// its bijoints blue (a point on several such lines stays blue); all other
/// bijoints are red. The threshold is evaluated exactly as count^2 <= 2|J|.
template <field_kernel K>
colour_vec two_colour_bijoints(const instance<K>& inst, const std::vector<point<K>>& bijoints) {
    if (inst.dim != 2) throw validation_error("two_colour_bijoints requires dimension 2");
    colour_vec colours(bijoints.size(), 2);
    const long long n = static_cast<long long>(bijoints.size());
    for (const auto& l : inst.families[0]) {
        std::vector<std::size_t> on_line;
        for (std::size_t i = 0; i < bijoints.size(); ++i)
            if (contains(l, bijoints[i])) on_line.push_back(i);
        const long long c = static_cast<long long>(on_line.size());
        if (c * c <= 2 * n)
            for (std::size_t i : on_line) colours[i] = 1;
    }
    return colours;
}

/// Largest c >= 0 with c^2 <= 2n: the exact value of the planar bound
/// floor(sqrt(2)*sqrt(n)). Useful as the budget when verifying the output.
inline int planar_bound(std::size_t n) {
    long long c = 0;
    while ((c + 1) * (c + 1) <= 2 * static_cast<long long>(n)) ++c;
    return static_cast<int>(c);
}

} // namespace multijoint
