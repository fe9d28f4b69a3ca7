#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace multijoint {

/// Colours are 1-based; entry i colours the i-th point of the working order.
using colour_vec = std::vector<int>;

/// Field-free incidence view of (instance, ordered point list). All engine
/// algorithms run on this; exact arithmetic happens only while building it.
struct incidence {
    int dim = 0;      // number of families = number of colours
    int n_points = 0; // working universe; the insertion target is always last
    std::vector<int> line_family;                 // per line id, 1-based
    std::vector<std::vector<int>> lines_through;  // per point, ascending line ids
    std::vector<std::vector<int>> points_on;      // per line, ascending point ids
};

inline int own_colour_count(const incidence& inc, int line_id, const colour_vec& colours) {
    const int j = inc.line_family[line_id];
    int count = 0;
    for (int p : inc.points_on[line_id])
        if (p < static_cast<int>(colours.size()) && colours[p] == j) ++count;
    return count;
}

struct saturated_line {
    int family;
    int line;
};

/// First line carrying more than m points of its own colour, if any.
inline std::optional<saturated_line> find_saturated_line(const incidence& inc,
                                                         const colour_vec& colours, int m) {
    for (int l = 0; l < static_cast<int>(inc.line_family.size()); ++l)
        if (own_colour_count(inc, l, colours) > m) return saturated_line{inc.line_family[l], l};
    return std::nullopt;
}

inline bool is_unsaturated(const incidence& inc, const colour_vec& colours, int m) {
    return !find_saturated_line(inc, colours, m).has_value();
}

struct tree_vertex {
    int point;  // point id in the working universe
    int parent; // vertex index, -1 for the root
    int colour; // 1-based; 0 for the achromatic root
};

/// Records of one completed construction step: for each colour other than
/// the acting vertex's own, the lines through it that block a recolour, and
/// the points those lines pulled into the tree.
struct step_record {
    std::vector<std::vector<int>> blocking_lines; // [colour-1], sorted line ids
    std::vector<std::vector<int>> added_points;   // [colour-1], sorted point ids
    std::size_t vertices_after = 0;               // tree size once the step is applied
};

struct tree_state {
    int root_point = -1;
    std::vector<tree_vertex> vertices; // step order, then working-order within a step
    std::vector<step_record> steps;    // completed steps only
    std::vector<char> member;          // per point id
    bool complete = false;             // every vertex was processed

    bool in_tree(int point_id) const {
        return point_id >= 0 && point_id < static_cast<int>(member.size()) &&
               member[point_id] != 0;
    }
};

/// A line through the step's vertex blocks recolouring it to the line's
/// colour when its own-colour points plus the differently-coloured tree
/// vertices on it already reach the budget m. The achromatic root never
/// counts toward either term.
inline bool line_condition(const incidence& inc, int line_id, const colour_vec& colours,
                           const tree_state& prefix, int m) {
    const int j = inc.line_family[line_id];
    const int n_jc = static_cast<int>(colours.size());
    int count = 0;
    for (int p : inc.points_on[line_id]) {
        if (p >= n_jc) continue;
        if (colours[p] == j)
            ++count;
        else if (prefix.in_tree(p))
            ++count;
    }
    return count >= m;
}

struct build_outcome {
    tree_state tree;               // the finished tree, or the prefix at the stop step
    bool advanceable = false;      // false means fully constructed
    int step = 0;                  // stop step when advanceable
    std::vector<int> free_colours; // colours with no blocking line, ascending
};

/// Grow the coloured rooted tree for colours with the next point as root.
/// Stops at the smallest step where some colour has no blocking line
/// (advanceable), or runs out of vertices (fully constructed).
inline build_outcome build_tree(const incidence& inc, const colour_vec& colours, int m) {
    const int n_jc = static_cast<int>(colours.size());
    if (n_jc >= inc.n_points)
        throw validation_error("build_tree: the working universe has no insertion point");
    for (int c : colours)
        if (c < 1 || c > inc.dim)
            throw validation_error("build_tree: colour out of range");

    tree_state t;
    t.root_point = n_jc;
    t.member.assign(inc.n_points, 0);
    t.member[n_jc] = 1;
    t.vertices.push_back({n_jc, -1, 0});

    for (std::size_t step = 1; step <= t.vertices.size(); ++step) {
        const tree_vertex actor = t.vertices[step - 1];
        step_record rec;
        rec.blocking_lines.assign(inc.dim, {});
        rec.added_points.assign(inc.dim, {});
        std::vector<int> free_colours;
        for (int j = 1; j <= inc.dim; ++j) {
            if (j == actor.colour) continue;
            auto& blocking = rec.blocking_lines[j - 1];
            for (int l : inc.lines_through[actor.point])
                if (inc.line_family[l] == j && line_condition(inc, l, colours, t, m))
                    blocking.push_back(l);
            if (blocking.empty()) free_colours.push_back(j);
        }
        if (!free_colours.empty())
            return {std::move(t), true, static_cast<int>(step), std::move(free_colours)};

        std::vector<int> batch;
        for (int j = 1; j <= inc.dim; ++j) {
            if (j == actor.colour) continue;
            auto& added = rec.added_points[j - 1];
            for (int l : rec.blocking_lines[j - 1])
                for (int p : inc.points_on[l])
                    if (p < n_jc && colours[p] == j && !t.member[p]) added.push_back(p);
            std::sort(added.begin(), added.end());
            added.erase(std::unique(added.begin(), added.end()), added.end());
            batch.insert(batch.end(), added.begin(), added.end());
        }
        std::sort(batch.begin(), batch.end());
        for (int p : batch) {
            t.member[p] = 1;
            t.vertices.push_back({p, static_cast<int>(step) - 1, colours[p]});
        }
        rec.vertices_after = t.vertices.size();
        t.steps.push_back(std::move(rec));
    }
    t.complete = true;
    return {std::move(t), false, 0, {}};
}

/// Extend colours to the insertion point using the smallest free colour of a
/// step-1 advanceable outcome.
inline colour_vec extend_at_root(const colour_vec& colours, const build_outcome& out) {
    if (!out.advanceable || out.step != 1)
        throw validation_error("extend_at_root needs a step-1 advanceable outcome");
    colour_vec extended = colours;
    extended.push_back(out.free_colours.front());
    return extended;
}

/// Recolour the stop vertex of an advanceable-at-step-i>1 outcome to the
/// chosen free colour.
inline colour_vec recolour_advance(const colour_vec& colours, const build_outcome& out,
                                   int free_colour) {
    if (!out.advanceable || out.step <= 1)
        throw validation_error("recolour_advance needs an advanceable step above 1");
    if (std::find(out.free_colours.begin(), out.free_colours.end(), free_colour) ==
        out.free_colours.end())
        throw validation_error("colour " + std::to_string(free_colour) +
                               " is not free at the stop step");
    const int y = out.tree.vertices[out.step - 1].point;
    colour_vec next = colours;
    next[y] = free_colour;
    return next;
}

/// Default choice: the smallest free colour.
inline colour_vec recolour_advance(const colour_vec& colours, const build_outcome& out) {
    if (!out.advanceable || out.step <= 1)
        throw validation_error("recolour_advance needs an advanceable step above 1");
    return recolour_advance(colours, out, out.free_colours.front());
}

namespace detail {

/// Vertex count of the tree after step i, holding at the final tree once
/// the construction has stopped.
inline std::size_t level_size(const tree_state& t, std::size_t i) {
    if (i == 0) return 1;
    if (i <= t.steps.size()) return t.steps[i - 1].vertices_after;
    return t.vertices.size();
}

inline bool same_vertex(const tree_vertex& a, const tree_vertex& b) {
    return a.point == b.point && a.parent == b.parent && a.colour == b.colour;
}

} // namespace detail

/// Level at which the tree of `a` is strictly more advanced than the tree
/// of `b`: the coloured trees agree below it and `a`'s tree at that level is
/// a proper coloured subtree of `b`'s. There is at most one such level.
inline std::optional<int> more_advanced_level(const incidence& inc, const colour_vec& a,
                                              const colour_vec& b, int m) {
    if (a.size() != b.size())
        throw validation_error("more_advanced compares colourings of the same point set");
    if (find_saturated_line(inc, a, m) || find_saturated_line(inc, b, m))
        throw validation_error("more_advanced requires unsaturated colourings");
    const auto ta = build_tree(inc, a, m);
    const auto tb = build_tree(inc, b, m);
    const std::size_t last = std::max(ta.tree.steps.size(), tb.tree.steps.size()) + 1;
    for (std::size_t i = 1; i <= last; ++i) {
        const std::size_t na = detail::level_size(ta.tree, i);
        const std::size_t nb = detail::level_size(tb.tree, i);
        bool equal = na == nb;
        if (equal)
            for (std::size_t v = detail::level_size(ta.tree, i - 1); v < na; ++v)
                if (!detail::same_vertex(ta.tree.vertices[v], tb.tree.vertices[v])) {
                    equal = false;
                    break;
                }
        if (equal) continue;
        // First level where the coloured trees differ; the batches below it
        // are identical, so check for a proper coloured-subtree inclusion.
        if (na >= nb) return std::nullopt;
        std::size_t qa = detail::level_size(ta.tree, i - 1);
        std::size_t qb = qa;
        while (qa < na) {
            while (qb < nb && tb.tree.vertices[qb].point < ta.tree.vertices[qa].point) ++qb;
            if (qb == nb || !detail::same_vertex(ta.tree.vertices[qa], tb.tree.vertices[qb]))
                return std::nullopt;
            ++qa;
            ++qb;
        }
        return static_cast<int>(i);
    }
    return std::nullopt;
}

inline bool more_advanced(const incidence& inc, const colour_vec& a, const colour_vec& b, int m) {
    return more_advanced_level(inc, a, b, m).has_value();
}

struct advance_limits {
    std::optional<std::uint64_t> cap; // overrides the d^min(n,20) * n default, n points coloured
};

inline std::uint64_t default_advance_cap(int d, std::size_t jc_size) {
    std::uint64_t cap = 1;
    const std::size_t e = std::min<std::size_t>(jc_size, 20);
    for (std::size_t i = 0; i < e; ++i) cap = detail::clamped_mul(cap, static_cast<std::uint64_t>(d));
    return detail::clamped_mul(cap, std::max<std::size_t>(jc_size, 1));
}

struct trace_event {
    std::size_t insertion = 0; // index of the point being inserted
    colour_vec before;
    build_outcome outcome;
    std::optional<colour_vec> after; // absent when a certificate was extracted
};

struct insertion_trace {
    std::vector<trace_event> events;
};

/// Certificate in index form: the tree's point set and the union of all
/// blocking-line records of a fully constructed tree.
struct index_certificate {
    std::vector<int> points;
    std::vector<int> lines;
    int m = 0;
};

inline index_certificate extract_certificate(const tree_state& t, int m) {
    if (!t.complete) throw validation_error("certificates come from fully constructed trees");
    index_certificate cert;
    cert.m = m;
    for (std::size_t v = 1; v < t.vertices.size(); ++v) cert.points.push_back(t.vertices[v].point);
    std::sort(cert.points.begin(), cert.points.end());
    std::set<int> lines;
    for (const auto& rec : t.steps)
        for (const auto& blocking : rec.blocking_lines) lines.insert(blocking.begin(), blocking.end());
    cert.lines.assign(lines.begin(), lines.end());
    return cert;
}

struct insert_outcome {
    std::optional<colour_vec> colours;     // success: colours extended to the new point
    std::optional<index_certificate> cert; // failure: a non-advanceable colouring was reached
    std::uint64_t advances = 0;
};

/// One round of the incremental driver: advance colours while it is
/// advanceable at a step above 1, then either extend at the root or report
/// the certificate of a fully constructed tree. Terminates because every
/// advance is strictly more advanced and the colouring space is finite; the
/// cap turns a violation of that argument into a loud failure.
inline insert_outcome insert_point(const incidence& inc, colour_vec colours, int m,
                                   advance_limits limits = {}, insertion_trace* trace = nullptr) {
    const std::uint64_t cap = limits.cap.value_or(default_advance_cap(inc.dim, colours.size()));
    insert_outcome out;
    while (true) {
        build_outcome built = build_tree(inc, colours, m);
        if (!built.advanceable) {
            out.cert = extract_certificate(built.tree, m);
            if (trace) trace->events.push_back({0, std::move(colours), std::move(built), std::nullopt});
            return out;
        }
        if (built.step == 1) {
            colour_vec extended = extend_at_root(colours, built);
            out.colours = extended;
            if (trace)
                trace->events.push_back({0, std::move(colours), std::move(built), std::move(extended)});
            return out;
        }
        colour_vec next = recolour_advance(colours, built);
        if (find_saturated_line(inc, next, m))
            throw internal_error("recolouring produced a saturated line");
        if (++out.advances > cap)
            throw internal_error("advance budget exceeded: " + std::to_string(out.advances) +
                                 " > " + std::to_string(cap));
        if (trace) trace->events.push_back({0, std::move(colours), std::move(built), next});
        colours = std::move(next);
    }
}

/// The baseline that motivates sticking to d colours: give every point the
/// extra colour d+1, so no line of any family sees its own colour at all.
inline colour_vec trivial_extra_colour(std::size_t n_points, int d) {
    return colour_vec(n_points, d + 1);
}

/// Typed working context: an instance together with an ordered point list,
/// and the exact incidence between them. Immutable once built.
template <field_kernel K>
class colouring_problem {
public:
    colouring_problem(const instance<K>& inst, std::vector<point<K>> points)
        : inst_(&inst), points_(std::move(points)) {
        inc_.dim = inst.dim;
        inc_.n_points = static_cast<int>(points_.size());
        for (const auto& family : inst.families)
            for (const auto& l : family) {
                lines_.push_back(&l);
                inc_.line_family.push_back(l.family);
            }
        inc_.lines_through.resize(points_.size());
        inc_.points_on.resize(lines_.size());
        for (std::size_t p = 0; p < points_.size(); ++p)
            for (std::size_t l = 0; l < lines_.size(); ++l)
                if (contains(*lines_[l], points_[p])) {
                    inc_.lines_through[p].push_back(static_cast<int>(l));
                    inc_.points_on[l].push_back(static_cast<int>(p));
                }
    }

    const incidence& index() const { return inc_; }
    const instance<K>& inst() const { return *inst_; }
    std::size_t size() const { return points_.size(); }
    int line_count() const { return static_cast<int>(lines_.size()); }
    const point<K>& point_at(int id) const { return points_[static_cast<std::size_t>(id)]; }
    const line<K>& line_at(int id) const { return *lines_[static_cast<std::size_t>(id)]; }

    std::optional<int> find_line(const line<K>& l) const {
        for (std::size_t i = 0; i < lines_.size(); ++i)
            if (*lines_[i] == l) return static_cast<int>(i);
        return std::nullopt;
    }

private:
    const instance<K>* inst_;
    std::vector<point<K>> points_;
    std::vector<const line<K>*> lines_;
    incidence inc_;
};

/// The pair extracted from a non-advanceable colouring: the tree's points
/// and the union of its blocking-line records. Self-contained for the
/// verifier: every point must be a joint of the lines, every line must meet
/// at least m of the points.
template <field_kernel K>
struct certificate {
    std::vector<point<K>> points;
    std::vector<line<K>> lines;
    int m = 0;
};

template <field_kernel K>
certificate<K> materialize_certificate(const colouring_problem<K>& prob,
                                       const index_certificate& ic) {
    certificate<K> cert;
    cert.m = ic.m;
    cert.points.reserve(ic.points.size());
    for (int p : ic.points) cert.points.push_back(prob.point_at(p));
    cert.lines.reserve(ic.lines.size());
    for (int l : ic.lines) cert.lines.push_back(prob.line_at(l));
    std::sort(cert.lines.begin(), cert.lines.end(), [](const line<K>& a, const line<K>& b) {
        if (a.family != b.family) return a.family < b.family;
        return a < b;
    });
    return cert;
}

struct colour_options {
    advance_limits limits{};
    geometry_limits geo{};
    insertion_trace* trace = nullptr;
    bool check_preconditions = true;
};

template <field_kernel K>
struct colouring_run {
    std::optional<colour_vec> colours; // aligned with the order of J
    std::optional<certificate<K>> cert;
    std::uint64_t advances = 0;
    std::vector<std::uint64_t> advances_per_insertion;
};

namespace detail {

template <field_kernel K>
void check_colouring_preconditions(const instance<K>& inst, const std::vector<point<K>>& j_order,
                                   const geometry_limits& geo) {
    validate_instance(inst, geo);
    auto g = is_generic(inst, geo);
    if (!g.generic) {
        std::string msg = "instance is not generic at " + point_str(g.witness->at) + " via";
        for (const auto& l : g.witness->lines) msg += " [" + line_str(l) + "]";
        throw non_generic_error(msg);
    }
    std::vector<point<K>> sorted = j_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i - 1] == sorted[i])
            throw validation_error("duplicate point in J: " + point_str(sorted[i]));
    for (const auto& x : j_order)
        if (!is_multijoint(x, inst, geo))
            throw validation_error("point of J is not a multijoint: " + point_str(x));
}

} // namespace detail

/// Incremental construction of an (m+1)-unsaturated colouring of J, taken
/// in the given order. Returns either the colouring or the certificate of
/// the insertion that failed.
template <field_kernel K>
colouring_run<K> colour_multijoints(const instance<K>& inst, const std::vector<point<K>>& j_order,
                                    int m, const colour_options& options = {}) {
    if (m < 0) throw validation_error("the saturation budget m must be nonnegative");
    if (options.check_preconditions)
        detail::check_colouring_preconditions(inst, j_order, options.geo);

    colouring_problem<K> prob(inst, j_order);
    colouring_run<K> run;
    colour_vec colours;
    for (std::size_t k = 0; k < j_order.size(); ++k) {
        const std::size_t first_event = options.trace ? options.trace->events.size() : 0;
        insert_outcome step = insert_point(prob.index(), std::move(colours), m, options.limits,
                                           options.trace);
        if (options.trace)
            for (std::size_t e = first_event; e < options.trace->events.size(); ++e)
                options.trace->events[e].insertion = k;
        run.advances += step.advances;
        run.advances_per_insertion.push_back(step.advances);
        if (step.cert) {
            run.cert = materialize_certificate(prob, *step.cert);
            return run;
        }
        colours = std::move(*step.colours);
    }
    if (find_saturated_line(prob.index(), colours, m))
        throw internal_error("driver returned a saturated colouring");
    run.colours = std::move(colours);
    return run;
}

/// Smallest m >= 0 with m^d >= n.
inline int ceil_root(std::size_t n, int d) {
    int m = 0;
    while (true) {
        std::uint64_t power = 1;
        for (int i = 0; i < d; ++i) power = detail::clamped_mul(power, static_cast<std::uint64_t>(m));
        if (power >= n) return m;
        ++m;
    }
}

template <field_kernel K>
struct auto_run {
    colour_vec colours;
    int m_used = 0;
    std::uint64_t advances = 0;          // advances of the successful run
    std::vector<int> failed_m;           // budgets that produced certificates
};

/// Find a working budget by doubling: start at ceil(|J|^(1/d)) — or at the
/// given override, an experiment knob — and double on every certificate.
/// Guaranteed to stop, since m = |J| always succeeds.
template <field_kernel K>
auto_run<K> colour_auto(const instance<K>& inst, const std::vector<point<K>>& j_order,
                        colour_options options = {}, std::optional<int> initial_m = {}) {
    if (initial_m && *initial_m < 0)
        throw validation_error("the saturation budget m must be nonnegative");
    if (options.check_preconditions) {
        detail::check_colouring_preconditions(inst, j_order, options.geo);
        options.check_preconditions = false;
    }
    auto_run<K> result;
    int m = initial_m.value_or(ceil_root(j_order.size(), inst.dim));
    while (true) {
        auto run = colour_multijoints(inst, j_order, m, options);
        if (run.colours) {
            result.colours = std::move(*run.colours);
            result.m_used = m;
            result.advances = run.advances;
            return result;
        }
        if (m >= static_cast<int>(j_order.size()))
            throw internal_error("colouring failed at m = |J|, which always succeeds");
        result.failed_m.push_back(m);
        m = m == 0 ? 1 : m * 2;
    }
}

/// The density form of a colouring: every point carries mass d in its own
/// colour and 0 in the others.
template <field_kernel K>
struct density_functions {
    int dim = 0;
    std::vector<point<K>> points;
    std::vector<std::vector<long long>> values; // values[i][j-1]: colour-j density at points[i]
};

template <field_kernel K>
density_functions<K> colouring_to_density(const std::vector<point<K>>& j_order,
                                          const colour_vec& colours, int d) {
    if (j_order.size() != colours.size())
        throw validation_error("colouring and point list sizes differ");
    density_functions<K> s;
    s.dim = d;
    s.points = j_order;
    s.values.reserve(colours.size());
    for (int c : colours) {
        std::vector<long long> row(static_cast<std::size_t>(d), 0);
        if (c >= 1 && c <= d) row[c - 1] = d;
        s.values.push_back(std::move(row));
    }
    return s;
}

template <field_kernel K>
struct density_check {
    bool ok = true;
    std::optional<point<K>> point_witness; // pointwise lower bound failed here
    std::optional<line<K>> line_witness;   // per-line sum exceeded the bound here
};

/// Checks the two density inequalities: at every listed point the colour
/// densities average to at least 1, and along every line of family j the
/// colour-j mass is at most the bound.
template <field_kernel K>
density_check<K> verify_density(const density_functions<K>& s, const instance<K>& inst,
                                long long bound) {
    density_check<K> check;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        long long sum = 0;
        for (long long v : s.values[i]) sum += v;
        if (sum < s.dim) {
            check.ok = false;
            check.point_witness = s.points[i];
            return check;
        }
    }
    for (std::size_t j = 0; j < inst.families.size(); ++j) {
        for (const auto& l : inst.families[j]) {
            long long total = 0;
            for (std::size_t i = 0; i < s.points.size(); ++i)
                if (contains(l, s.points[i])) total += s.values[i][j];
            if (total > bound) {
                check.ok = false;
                check.line_witness = l;
                return check;
            }
        }
    }
    return check;
}

} // namespace multijoint
