#pragma once

#include "colouring.hpp"
#include "geometry.hpp"

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

namespace multijoint {

struct oracle_result {
    int m_star = 0;     // minimum achievable max own-colour count
    colour_vec witness; // a colouring attaining it
};

/// Ground truth by exhaustion: the minimum over all d^|J| colourings of the
/// largest own-colour count on any line. Enumerates in lexicographic order
/// with incremental counts, skipping any branch whose running maximum
/// already matches the best found.
inline oracle_result brute_force_min_saturation(const incidence& inc) {
    const int n = inc.n_points;
    const int d = inc.dim;
    std::uint64_t space = 1;
    for (int i = 0; i < n; ++i) space = detail::clamped_mul(space, static_cast<std::uint64_t>(d));
    if (space > 10'000'000)
        throw limit_error("instance too large for exhaustive search: " + std::to_string(d) + "^" +
                          std::to_string(n) + " colourings");
    if (n == 0) return {0, {}};

    std::vector<int> counts(inc.line_family.size(), 0);
    colour_vec current(static_cast<std::size_t>(n), 1);
    int best = INT_MAX;
    colour_vec best_witness;

    auto search = [&](auto&& self, int i, int running_max) -> void {
        if (running_max >= best) return;
        if (i == n) {
            best = running_max;
            best_witness = current;
            return;
        }
        for (int c = 1; c <= d; ++c) {
            current[static_cast<std::size_t>(i)] = c;
            int new_max = running_max;
            for (int l : inc.lines_through[static_cast<std::size_t>(i)])
                if (inc.line_family[static_cast<std::size_t>(l)] == c)
                    if (++counts[static_cast<std::size_t>(l)] > new_max)
                        new_max = counts[static_cast<std::size_t>(l)];
            self(self, i + 1, new_max);
            for (int l : inc.lines_through[static_cast<std::size_t>(i)])
                if (inc.line_family[static_cast<std::size_t>(l)] == c)
                    --counts[static_cast<std::size_t>(l)];
        }
    };
    search(search, 0, 0);
    return {best, std::move(best_witness)};
}

template <field_kernel K>
oracle_result brute_force_min_saturation(const instance<K>& inst,
                                         const std::vector<point<K>>& j_order) {
    colouring_problem<K> prob(inst, j_order);
    return brute_force_min_saturation(prob.index());
}

template <field_kernel K>
struct certificate_check {
    bool ok = true;
    std::string violated; // "joint-property" or "line-count"
    std::optional<point<K>> point_witness;
    std::optional<line<K>> line_witness;
};

/// Checks the two certificate hypotheses exactly: every listed point lies
/// on lines of the list, one per family, whose directions span F^d; and
/// every listed line passes through at least m of the listed points.
template <field_kernel K>
certificate_check<K> verify_certificate(const certificate<K>& cert, geometry_limits limits = {}) {
    certificate_check<K> check;
    if (cert.points.empty() && cert.lines.empty()) return check;
    const std::size_t d =
        cert.points.empty() ? cert.lines.front().direction.size() : cert.points.front().coords.size();
    for (const auto& l : cert.lines)
        if (l.family < 1 || l.family > static_cast<int>(d))
            throw validation_error("certificate line family out of range: " + line_str(l));

    std::vector<std::vector<const line<K>*>> by_family(d);
    for (const auto& l : cert.lines)
        by_family[static_cast<std::size_t>(l.family - 1)].push_back(&l);

    for (const auto& x : cert.points) {
        std::vector<std::vector<const line<K>*>> incident(d);
        for (std::size_t j = 0; j < d; ++j)
            for (const auto* l : by_family[j])
                if (contains(*l, x)) incident[j].push_back(l);
        if (!detail::has_spanning_tuple(incident, limits.tuple_cap)) {
            check.ok = false;
            check.violated = "joint-property";
            check.point_witness = x;
            return check;
        }
    }
    for (const auto& l : cert.lines) {
        int count = 0;
        for (const auto& x : cert.points)
            if (contains(l, x)) ++count;
        if (count < cert.m) {
            check.ok = false;
            check.violated = "line-count";
            check.line_witness = l;
            return check;
        }
    }
    return check;
}

} // namespace multijoint
