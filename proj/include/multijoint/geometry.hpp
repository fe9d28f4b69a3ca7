#pragma once

#include "field.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace multijoint {

template <field_kernel K>
struct point {
    std::vector<typename K::scalar> coords;

    friend bool operator==(const point& a, const point& b) {
        if (a.coords.size() != b.coords.size())
            throw validation_error("comparing points of different dimension");
        for (std::size_t i = 0; i < a.coords.size(); ++i)
            if (a.coords[i] != b.coords[i]) return false;
        return true;
    }
    friend bool operator!=(const point& a, const point& b) { return !(a == b); }
    friend bool operator<(const point& a, const point& b) {
        if (a.coords.size() != b.coords.size())
            throw validation_error("comparing points of different dimension");
        for (std::size_t i = 0; i < a.coords.size(); ++i) {
            if (a.coords[i] < b.coords[i]) return true;
            if (b.coords[i] < a.coords[i]) return false;
        }
        return false;
    }
};

/// A line in canonical parametric form: the first nonzero coordinate of the
/// direction (the pivot) is 1, and the base point is 0 at the pivot index.
/// Equality and ordering are geometric; the family tag is an annotation.
template <field_kernel K>
struct line {
    point<K> base;
    std::vector<typename K::scalar> direction;
    int family = 0; // colour family, 1-based

    friend bool operator==(const line& a, const line& b) {
        return a.base == b.base && point<K>{a.direction} == point<K>{b.direction};
    }
    friend bool operator!=(const line& a, const line& b) { return !(a == b); }
    friend bool operator<(const line& a, const line& b) {
        if (a.base < b.base) return true;
        if (b.base < a.base) return false;
        return point<K>{a.direction} < point<K>{b.direction};
    }
};

/// Index of the pivot coordinate of a canonical line.
template <field_kernel K>
int pivot_index(const line<K>& l) {
    for (std::size_t i = 0; i < l.direction.size(); ++i)
        if (!l.direction[i].is_zero()) return static_cast<int>(i);
    throw validation_error("line has zero direction");
}

/// Canonicalize (base, direction) into a line. Any parametrization of the
/// same point set yields the same canonical value.
template <field_kernel K>
line<K> make_line(point<K> base, std::vector<typename K::scalar> direction, int family) {
    if (base.coords.size() != direction.size())
        throw validation_error("line base and direction dimensions differ");
    int pivot = -1;
    for (std::size_t i = 0; i < direction.size(); ++i) {
        if (!direction[i].is_zero()) {
            pivot = static_cast<int>(i);
            break;
        }
    }
    if (pivot < 0) throw validation_error("line has zero direction");
    auto scale = direction[pivot].inverse();
    for (auto& c : direction) c = c * scale;
    auto shift = base.coords[pivot];
    for (std::size_t i = 0; i < base.coords.size(); ++i)
        base.coords[i] = base.coords[i] - shift * direction[i];
    return line<K>{std::move(base), std::move(direction), family};
}

/// Exact membership test: x = base + t * direction for some scalar t. The
/// pivot coordinate determines the only possible t.
template <field_kernel K>
bool contains(const line<K>& l, const point<K>& x) {
    if (x.coords.size() != l.direction.size())
        throw validation_error("point and line dimensions differ");
    int pivot = pivot_index(l);
    const auto& t = x.coords[pivot]; // base is 0 at the pivot, direction is 1
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        if (x.coords[i] != l.base.coords[i] + t * l.direction[i]) return false;
    return true;
}

/// The unique common point of two distinct lines, if any. Two distinct
/// canonical lines are never coincident, so the answer is a point or none.
template <field_kernel K>
std::optional<point<K>> intersect(const line<K>& l1, const line<K>& l2) {
    if (l1.direction.size() != l2.direction.size())
        throw validation_error("intersecting lines of different dimension");
    if (l1 == l2) throw validation_error("intersect requires distinct lines");
    using S = typename K::scalar;
    const std::size_t d = l1.direction.size();
    // Rows of the 2-unknown system t*d1[i] - s*d2[i] = b2[i] - b1[i].
    struct row {
        S a, b, r;
    };
    std::vector<row> rows;
    rows.reserve(d);
    S zero = l1.direction[static_cast<std::size_t>(pivot_index(l1))].zero_like();
    for (std::size_t i = 0; i < d; ++i)
        rows.push_back({l1.direction[i], zero - l2.direction[i], l2.base.coords[i] - l1.base.coords[i]});

    int p1 = -1;
    for (std::size_t i = 0; i < d; ++i)
        if (!rows[i].a.is_zero()) {
            p1 = static_cast<int>(i);
            break;
        }
    for (std::size_t q = 0; q < d; ++q) {
        if (static_cast<int>(q) == p1 || rows[q].a.is_zero()) continue;
        S f = rows[q].a / rows[p1].a;
        rows[q].a = rows[q].a - f * rows[p1].a;
        rows[q].b = rows[q].b - f * rows[p1].b;
        rows[q].r = rows[q].r - f * rows[p1].r;
    }
    int p2 = -1;
    for (std::size_t i = 0; i < d; ++i)
        if (static_cast<int>(i) != p1 && !rows[i].b.is_zero()) {
            p2 = static_cast<int>(i);
            break;
        }
    if (p2 < 0) {
        // Proportional directions: parallel distinct lines never meet.
        for (std::size_t q = 0; q < d; ++q)
            if (static_cast<int>(q) != p1 && !rows[q].r.is_zero()) return std::nullopt;
        throw internal_error("coincident lines passed canonical inequality check");
    }
    for (std::size_t q = 0; q < d; ++q) {
        if (static_cast<int>(q) == p1 || static_cast<int>(q) == p2 || rows[q].b.is_zero()) continue;
        S f = rows[q].b / rows[p2].b;
        rows[q].b = rows[q].b - f * rows[p2].b;
        rows[q].r = rows[q].r - f * rows[p2].r;
    }
    for (std::size_t q = 0; q < d; ++q)
        if (static_cast<int>(q) != p1 && static_cast<int>(q) != p2 && !rows[q].r.is_zero())
            return std::nullopt; // skew
    S s = rows[p2].r / rows[p2].b;
    S t = (rows[p1].r - rows[p1].b * s) / rows[p1].a;
    point<K> x;
    x.coords.reserve(d);
    for (std::size_t i = 0; i < d; ++i) x.coords.push_back(l1.base.coords[i] + t * l1.direction[i]);
    return x;
}

/// True iff the direction vectors of exactly d lines span F^d.
template <field_kernel K>
bool directions_span(const std::vector<const line<K>*>& lines) {
    if (lines.empty()) throw validation_error("directions_span needs at least one line");
    const std::size_t d = lines[0]->direction.size();
    if (lines.size() != d)
        throw validation_error("directions_span needs exactly d lines");
    std::vector<typename K::scalar> entries;
    entries.reserve(d * d);
    for (const auto* l : lines) {
        if (l->direction.size() != d) throw validation_error("mixed dimensions in span test");
        for (const auto& c : l->direction) entries.push_back(c);
    }
    matrix<typename K::scalar> m(static_cast<int>(d), static_cast<int>(d), std::move(entries));
    return rank(std::move(m)) == static_cast<int>(d);
}

template <field_kernel K>
bool directions_span(const std::vector<line<K>>& lines) {
    std::vector<const line<K>*> ptrs;
    ptrs.reserve(lines.size());
    for (const auto& l : lines) ptrs.push_back(&l);
    return directions_span(ptrs);
}

/// d pairwise-disjoint colour families of lines in F^d, with an optional
/// explicit list of multijoints.
template <field_kernel K>
struct instance {
    K field;
    int dim = 0;
    std::vector<std::vector<line<K>>> families;
    std::optional<std::vector<point<K>>> points;
};

struct geometry_limits {
    std::uint64_t tuple_cap = 1'000'000; // incident-line tuples examined per point
};

namespace detail {

inline std::uint64_t clamped_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

/// Visit every tuple drawn one-per-pool; stop early when visit returns true.
/// Returns true iff some visit returned true. Throws when the tuple count
/// exceeds the cap.
template <class L, class F>
bool for_each_tuple(const std::vector<std::vector<L>>& pools, std::uint64_t cap, F&& visit) {
    std::uint64_t total = 1;
    for (const auto& pool : pools) {
        if (pool.empty()) return false;
        total = clamped_mul(total, pool.size());
    }
    if (total > cap)
        throw limit_error("tuple budget exceeded: " + std::to_string(total) + " > " +
                          std::to_string(cap));
    std::vector<std::size_t> idx(pools.size(), 0);
    while (true) {
        if (visit(idx)) return true;
        std::size_t k = 0;
        while (k < pools.size()) {
            if (++idx[k] < pools[k].size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == pools.size()) return false;
    }
}

} // namespace detail

/// The lines of each family passing through x.
template <field_kernel K>
std::vector<std::vector<const line<K>*>> incident_lines(const instance<K>& inst, const point<K>& x) {
    std::vector<std::vector<const line<K>*>> out(inst.families.size());
    for (std::size_t j = 0; j < inst.families.size(); ++j)
        for (const auto& l : inst.families[j])
            if (contains(l, x)) out[j].push_back(&l);
    return out;
}

namespace detail {

template <field_kernel K>
bool has_spanning_tuple(const std::vector<std::vector<const line<K>*>>& incident,
                        std::uint64_t cap) {
    for (const auto& pool : incident)
        if (pool.empty()) return false;
    return for_each_tuple(incident, cap, [&](const std::vector<std::size_t>& idx) {
        std::vector<const line<K>*> tuple;
        tuple.reserve(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) tuple.push_back(incident[j][idx[j]]);
        return directions_span(tuple);
    });
}

} // namespace detail

/// True iff x lies on a line of every family and some such tuple of lines
/// has spanning directions.
template <field_kernel K>
bool is_multijoint(const point<K>& x, const instance<K>& inst, geometry_limits limits = {}) {
    return detail::has_spanning_tuple(incident_lines(inst, x), limits.tuple_cap);
}

namespace detail {

/// Candidate meeting points: intersections of family-1 with family-2 lines.
/// Any point on a line from each of d >= 2 families lies on one of these.
/// Coincident cross-family pairs (invalid instances only) contribute their
/// base point and their crossings with every other line, so the genericity
/// check still sees a meeting point.
template <field_kernel K>
std::set<point<K>> candidate_points(const instance<K>& inst, bool handle_coincident) {
    std::set<point<K>> out;
    if (inst.families.size() < 2) return out;
    for (const auto& l1 : inst.families[0]) {
        for (const auto& l2 : inst.families[1]) {
            if (l1 == l2) {
                if (!handle_coincident) continue;
                out.insert(l1.base);
                for (const auto& fam : inst.families)
                    for (const auto& other : fam)
                        if (other != l1)
                            if (auto x = intersect(l1, other)) out.insert(*x);
                continue;
            }
            if (auto x = intersect(l1, l2)) out.insert(*x);
        }
    }
    return out;
}

} // namespace detail

/// All multijoints of the instance, in lexicographic order.
template <field_kernel K>
std::vector<point<K>> multijoints(const instance<K>& inst, geometry_limits limits = {}) {
    std::vector<point<K>> out;
    for (const auto& x : detail::candidate_points(inst, false))
        if (is_multijoint(x, inst, limits)) out.push_back(x);
    return out;
}

template <field_kernel K>
struct genericity_witness {
    point<K> at;
    std::vector<line<K>> lines; // one per family, directions do not span
};

template <field_kernel K>
struct genericity_result {
    bool generic = true;
    std::optional<genericity_witness<K>> witness;
};

/// Checks that whenever lines, one from each family, meet at a point, their
/// directions span F^d. Callable before validation; coincident duplicate
/// lines across families are reported as witnesses.
template <field_kernel K>
genericity_result<K> is_generic(const instance<K>& inst, geometry_limits limits = {}) {
    for (const auto& x : detail::candidate_points(inst, true)) {
        auto incident = incident_lines(inst, x);
        bool all_hit = true;
        for (const auto& pool : incident)
            if (pool.empty()) {
                all_hit = false;
                break;
            }
        if (!all_hit) continue;
        genericity_result<K> result;
        detail::for_each_tuple(incident, limits.tuple_cap, [&](const std::vector<std::size_t>& idx) {
            std::vector<const line<K>*> tuple;
            tuple.reserve(idx.size());
            for (std::size_t j = 0; j < idx.size(); ++j) tuple.push_back(incident[j][idx[j]]);
            if (directions_span(tuple)) return false;
            genericity_witness<K> w{x, {}};
            for (const auto* l : tuple) w.lines.push_back(*l);
            result.generic = false;
            result.witness = std::move(w);
            return true;
        });
        if (!result.generic) return result;
    }
    return {};
}

template <field_kernel K>
std::string point_str(const point<K>& x) {
    std::string out = "(";
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        if (i) out += ",";
        out += x.coords[i].str();
    }
    return out + ")";
}

template <field_kernel K>
std::string line_str(const line<K>& l) {
    std::string out = "family " + std::to_string(l.family) + " ; base ";
    for (std::size_t i = 0; i < l.base.coords.size(); ++i) {
        if (i) out += ",";
        out += l.base.coords[i].str();
    }
    out += " ; dir ";
    for (std::size_t i = 0; i < l.direction.size(); ++i) {
        if (i) out += ",";
        out += l.direction[i].str();
    }
    return out;
}

namespace detail {

template <field_kernel K>
bool scalar_in_field(const K&, const typename K::scalar&) {
    return true;
}

inline bool scalar_in_field(const prime_field& k, const fp_scalar& s) {
    return s.modulus() == k.modulus();
}

} // namespace detail

/// Structural validation: canonical lines with matching family tags,
/// pairwise-disjoint families, consistent field and dimension, and explicit
/// points (when present) that really are multijoints.
template <field_kernel K>
void validate_instance(const instance<K>& inst, geometry_limits limits = {}) {
    if (inst.dim < 2) throw validation_error("dimension must be at least 2");
    if (inst.families.size() != static_cast<std::size_t>(inst.dim))
        throw validation_error("expected one family per dimension");
    const std::size_t d = static_cast<std::size_t>(inst.dim);
    std::vector<const line<K>*> all;
    for (std::size_t j = 0; j < d; ++j) {
        for (const auto& l : inst.families[j]) {
            if (l.family != static_cast<int>(j) + 1)
                throw validation_error("line family tag " + std::to_string(l.family) +
                                       " does not match its list position " + std::to_string(j + 1));
            if (l.base.coords.size() != d || l.direction.size() != d)
                throw validation_error("line dimension does not match the instance");
            int pivot = pivot_index(l);
            if (l.direction[pivot] != l.direction[pivot].one_like() ||
                !l.base.coords[pivot].is_zero())
                throw validation_error("line is not in canonical form: " + line_str(l));
            for (const auto& c : l.base.coords)
                if (!detail::scalar_in_field(inst.field, c))
                    throw validation_error("line scalar outside the instance field");
            for (const auto& c : l.direction)
                if (!detail::scalar_in_field(inst.field, c))
                    throw validation_error("line scalar outside the instance field");
            all.push_back(&l);
        }
    }
    std::sort(all.begin(), all.end(), [](const line<K>* a, const line<K>* b) { return *a < *b; });
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (*all[i - 1] == *all[i]) {
            if (all[i - 1]->family == all[i]->family)
                throw validation_error("duplicate line in family " +
                                       std::to_string(all[i]->family) + ": " + line_str(*all[i]));
            throw validation_error("families are not disjoint: " + line_str(*all[i - 1]) +
                                   " also appears as " + line_str(*all[i]));
        }
    }
    if (inst.points) {
        for (const auto& x : *inst.points) {
            if (x.coords.size() != d)
                throw validation_error("point dimension does not match the instance");
            for (const auto& c : x.coords)
                if (!detail::scalar_in_field(inst.field, c))
                    throw validation_error("point scalar outside the instance field");
            if (!is_multijoint(x, inst, limits))
                throw validation_error("listed point is not a multijoint: " + point_str(x));
        }
    }
}

} // namespace multijoint
