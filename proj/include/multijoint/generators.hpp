#pragma once

#include "geometry.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace multijoint {

namespace detail {

inline void check_embeddable(const prime_field& field, std::int64_t max_coordinate,
                             const std::string& what) {
    if (field.modulus() <= max_coordinate)
        throw validation_error(what + " needs a prime above " + std::to_string(max_coordinate) +
                               ", got " + std::to_string(field.modulus()));
}

inline void check_embeddable(const rational_field&, std::int64_t, const std::string&) {}

template <field_kernel K>
point<K> make_point(const K& field, const std::vector<std::int64_t>& coords) {
    point<K> x;
    x.coords.reserve(coords.size());
    for (std::int64_t c : coords) x.coords.push_back(field.element(c));
    return x;
}

template <field_kernel K>
line<K> axis_line(const K& field, const std::vector<std::int64_t>& base, int axis, int family) {
    std::vector<typename K::scalar> dir;
    dir.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        dir.push_back(field.element(i == static_cast<std::size_t>(axis) ? 1 : 0));
    return make_line(make_point(field, base), std::move(dir), family);
}

} // namespace detail

/// The N^d grid threaded by axis-parallel lines: family j holds the N^{d-1}
/// lines parallel to the j-th axis through the grid's coordinate slices.
/// Its multijoints are exactly the grid points {1..N}^d.
template <field_kernel K>
instance<K> monkey_bar(const K& field, int n, int d) {
    if (n < 1) throw validation_error("monkey_bar needs N >= 1");
    if (d < 2) throw validation_error("monkey_bar needs d >= 2");
    detail::check_embeddable(field, n, "monkey_bar");
    instance<K> inst{field, d, {}, std::nullopt};
    inst.families.resize(static_cast<std::size_t>(d));
    for (int axis = 0; axis < d; ++axis) {
        std::vector<std::int64_t> coords(static_cast<std::size_t>(d), 1);
        coords[static_cast<std::size_t>(axis)] = 0;
        while (true) {
            inst.families[static_cast<std::size_t>(axis)].push_back(
                detail::axis_line(field, coords, axis, axis + 1));
            int k = 0;
            while (k < d) {
                if (k == axis) {
                    ++k;
                    continue;
                }
                if (++coords[static_cast<std::size_t>(k)] <= n) break;
                coords[static_cast<std::size_t>(k)] = 1;
                ++k;
            }
            if (k == d) break;
        }
    }
    return inst;
}

/// Three coordinate-plane lattices in F^3, one per colour pair, with the
/// transverse colour threaded through each lattice point. The construction
/// keeps the x-coordinates of the two x-axis-anchored base sets disjoint
/// ({1..N} and {N+1..2N}) so that no grid point off the coordinate planes
/// becomes a multijoint. Validated by counting: exactly 3N^2 multijoints,
/// all generic.
template <field_kernel K>
instance<K> tricolour_necessity(const K& field, int n) {
    if (n < 1) throw validation_error("tricolour_necessity needs N >= 1");
    detail::check_embeddable(field, 2 * static_cast<std::int64_t>(n), "tricolour_necessity");
    instance<K> inst{field, 3, {}, std::nullopt};
    inst.families.resize(3);
    auto add = [&](int family, std::int64_t x, std::int64_t y, std::int64_t z) {
        inst.families[static_cast<std::size_t>(family - 1)].push_back(
            detail::axis_line(field, {x, y, z}, family - 1, family));
    };
    for (std::int64_t i = 1; i <= n; ++i) {
        add(1, 0, i, 0); // red rows of the z = 0 lattice
        add(1, 0, 0, i); // red rows of the y = 0 lattice
        add(2, i, 0, 0); // blue columns of the z = 0 lattice
        add(2, 0, 0, i); // blue columns of the x = 0 lattice
        add(3, n + i, 0, 0); // green columns of the y = 0 lattice, offset
        add(3, 0, i, 0);     // green rows of the x = 0 lattice
    }
    std::vector<point<K>> expected;
    for (std::int64_t a = 1; a <= n; ++a) {
        for (std::int64_t b = 1; b <= n; ++b) {
            add(3, a, b, 0);     // make (a, b, 0) a multijoint
            add(2, n + a, 0, b); // make (n+a, 0, b) a multijoint
            add(1, 0, a, b);     // make (0, a, b) a multijoint
            expected.push_back(detail::make_point(field, {a, b, 0}));
            expected.push_back(detail::make_point(field, {n + a, 0, b}));
            expected.push_back(detail::make_point(field, {0, a, b}));
        }
    }
    validate_instance(inst);
    auto found = multijoints(inst);
    std::sort(expected.begin(), expected.end());
    if (found != expected)
        throw internal_error("tricolour_necessity produced " + std::to_string(found.size()) +
                             " multijoints instead of the expected " +
                             std::to_string(expected.size()));
    if (!is_generic(inst).generic)
        throw internal_error("tricolour_necessity produced a non-generic arrangement");
    return inst;
}

struct random_instance_options {
    std::uint64_t rejection_budget = 1000; // whole-instance genericity retries
    geometry_limits geo{};
};

namespace detail {

inline std::uint64_t sample_below(std::mt19937_64& gen, std::uint64_t bound) {
    // Unbiased and reproducible across platforms, unlike the distributions.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = gen();
    } while (v >= limit);
    return v % bound;
}

} // namespace detail

/// Deterministic rejection sampler: draws lines_per_family random lines for
/// each family and retries the whole draw until the arrangement is generic
/// and the families are disjoint.
inline instance<prime_field> random_generic_instance(std::uint64_t seed, int d,
                                                     const prime_field& field,
                                                     int lines_per_family,
                                                     random_instance_options options = {}) {
    if (d < 2) throw validation_error("random_generic_instance needs d >= 2");
    if (lines_per_family < 1) throw validation_error("need at least one line per family");
    const std::uint64_t p = static_cast<std::uint64_t>(field.modulus());
    std::mt19937_64 gen(seed);
    auto sample_line = [&](int family) {
        for (int tries = 0; tries < 10000; ++tries) {
            point<prime_field> base;
            std::vector<fp_scalar> dir;
            bool zero = true;
            for (int i = 0; i < d; ++i) {
                base.coords.push_back(field.element(static_cast<std::int64_t>(
                    detail::sample_below(gen, p))));
                auto c = field.element(static_cast<std::int64_t>(detail::sample_below(gen, p)));
                zero = zero && c.is_zero();
                dir.push_back(c);
            }
            if (zero) continue;
            return make_line(std::move(base), std::move(dir), family);
        }
        throw limit_error("could not sample a nonzero direction");
    };
    for (std::uint64_t attempt = 0; attempt < options.rejection_budget; ++attempt) {
        instance<prime_field> inst{field, d, {}, std::nullopt};
        inst.families.resize(static_cast<std::size_t>(d));
        bool distinct = true;
        for (int j = 1; j <= d && distinct; ++j) {
            auto& family = inst.families[static_cast<std::size_t>(j - 1)];
            for (int i = 0; i < lines_per_family; ++i) {
                auto l = sample_line(j);
                bool duplicate = false;
                for (const auto& other_family : inst.families)
                    for (const auto& other : other_family)
                        if (other == l) duplicate = true;
                if (duplicate) {
                    distinct = false;
                    break;
                }
                family.push_back(std::move(l));
            }
        }
        if (!distinct) continue;
        if (!is_generic(inst, options.geo).generic) continue;
        validate_instance(inst, options.geo);
        return inst;
    }
    throw limit_error("rejection budget exceeded after " +
                      std::to_string(options.rejection_budget) + " attempts");
}

} // namespace multijoint
