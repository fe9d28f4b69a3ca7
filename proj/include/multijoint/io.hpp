#pragma once

#include "colouring.hpp"
#include "geometry.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace multijoint {

/// Runtime choice of field, as written in document headers.
struct field_spec {
    enum class kind_t { prime, rational };
    kind_t kind = kind_t::rational;
    std::int64_t p = 0;

    static field_spec parse(std::string_view text) {
        if (text == "rational") return {kind_t::rational, 0};
        constexpr std::string_view prefix = "prime:";
        if (text.substr(0, prefix.size()) == prefix)
            return {kind_t::prime, detail::parse_int64(text.substr(prefix.size()))};
        throw parse_error("unknown field spec: '" + std::string(text) +
                          "' (expected 'prime:<p>' or 'rational')");
    }

    std::string str() const {
        return kind == kind_t::prime ? "prime:" + std::to_string(p) : "rational";
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s));
            return out;
        }
        out.push_back(trim(s.substr(0, pos)));
        s.remove_prefix(pos + 1);
    }
}

/// One non-empty input line, split into its keyword and remainder.
struct record {
    std::string keyword;
    std::string rest;
    int line_no = 0;
};

inline std::vector<record> read_records(std::istream& in) {
    std::vector<record> out;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        auto space = s.find_first_of(" \t");
        if (space == std::string_view::npos) {
            out.push_back({std::string(s), "", line_no});
        } else {
            out.push_back({std::string(s.substr(0, space)), std::string(trim(s.substr(space))),
                           line_no});
        }
    }
    return out;
}

template <field_kernel K>
std::vector<typename K::scalar> parse_coords(const K& field, std::string_view csv, int dim,
                                             int line_no) {
    auto pieces = split(csv, ',');
    if (static_cast<int>(pieces.size()) != dim)
        throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                          " coordinates, got " + std::to_string(pieces.size()));
    std::vector<typename K::scalar> out;
    out.reserve(pieces.size());
    for (auto piece : pieces) out.push_back(field.parse(piece));
    return out;
}

template <field_kernel K>
line<K> parse_family_record(const K& field, const record& r, int dim) {
    auto pieces = split(r.rest, ';');
    if (pieces.size() != 3 || pieces[1].substr(0, 4) != "base" || pieces[2].substr(0, 3) != "dir")
        throw parse_error("line " + std::to_string(r.line_no) +
                          ": expected 'family j ; base v,... ; dir w,...'");
    int family = static_cast<int>(parse_int64(pieces[0]));
    auto base = parse_coords(field, trim(pieces[1].substr(4)), dim, r.line_no);
    auto dir = parse_coords(field, trim(pieces[2].substr(3)), dim, r.line_no);
    return make_line(point<K>{std::move(base)}, std::move(dir), family);
}

struct header {
    field_spec fs;
    int dim = 0;
    std::size_t first_body = 0; // index of the first non-header record
};

inline header parse_header(const std::vector<record>& records, const char* expected_kind) {
    header h;
    bool have_field = false, have_dim = false, have_kind = expected_kind == nullptr;
    std::size_t i = 0;
    for (; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.keyword == "kind") {
            if (!expected_kind || r.rest != expected_kind)
                throw parse_error("line " + std::to_string(r.line_no) + ": unexpected kind '" +
                                  r.rest + "'");
            have_kind = true;
        } else if (r.keyword == "field") {
            h.fs = field_spec::parse(r.rest);
            have_field = true;
        } else if (r.keyword == "dim") {
            h.dim = static_cast<int>(parse_int64(r.rest));
            have_dim = true;
        } else {
            break;
        }
    }
    if (!have_kind) throw parse_error(std::string("missing 'kind ") + expected_kind + "' header");
    if (!have_field) throw parse_error("missing 'field' header");
    if (!have_dim) throw parse_error("missing 'dim' header");
    h.first_body = i;
    return h;
}

} // namespace detail

using any_instance = std::variant<instance<prime_field>, instance<rational_field>>;

template <field_kernel K>
instance<K> read_instance_as(const K& field, const std::vector<detail::record>& records,
                             const detail::header& h, geometry_limits limits = {}) {
    instance<K> inst{field, h.dim, {}, std::nullopt};
    if (h.dim < 2) throw parse_error("dim must be at least 2");
    inst.families.resize(static_cast<std::size_t>(h.dim));
    std::vector<point<K>> points;
    for (std::size_t i = h.first_body; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.keyword == "family") {
            auto l = detail::parse_family_record(field, r, h.dim);
            if (l.family < 1 || l.family > h.dim)
                throw parse_error("line " + std::to_string(r.line_no) + ": family index " +
                                  std::to_string(l.family) + " out of range");
            inst.families[static_cast<std::size_t>(l.family - 1)].push_back(std::move(l));
        } else if (r.keyword == "point") {
            points.push_back(point<K>{detail::parse_coords(field, r.rest, h.dim, r.line_no)});
        } else {
            throw parse_error("line " + std::to_string(r.line_no) + ": unknown record '" +
                              r.keyword + "'");
        }
    }
    if (!points.empty()) inst.points = std::move(points);
    validate_instance(inst, limits);
    return inst;
}

inline any_instance read_instance(std::istream& in, geometry_limits limits = {}) {
    auto records = detail::read_records(in);
    auto h = detail::parse_header(records, nullptr);
    if (h.fs.kind == field_spec::kind_t::prime)
        return read_instance_as(prime_field(h.fs.p), records, h, limits);
    return read_instance_as(rational_field{}, records, h, limits);
}

template <field_kernel K>
void write_instance(std::ostream& out, const instance<K>& inst) {
    out << "field " << inst.field.spec_string() << "\n";
    out << "dim " << inst.dim << "\n";
    for (const auto& family : inst.families)
        for (const auto& l : family) out << line_str(l) << "\n";
    if (inst.points)
        for (const auto& x : *inst.points) {
            out << "point ";
            for (std::size_t i = 0; i < x.coords.size(); ++i)
                out << (i ? "," : "") << x.coords[i].str();
            out << "\n";
        }
}

/// A colouring as written to disk: the coloured points in working order
/// plus the budget and run statistics.
template <field_kernel K>
struct colouring_document {
    int dim = 0;
    std::vector<point<K>> points;
    colour_vec colours;
    int m = 0;
    std::vector<long long> max_own_counts; // per family
    std::uint64_t advances = 0;
};

template <field_kernel K>
void write_colouring(std::ostream& out, const K& field, const colouring_document<K>& doc) {
    out << "kind colouring\n";
    out << "field " << field.spec_string() << "\n";
    out << "dim " << doc.dim << "\n";
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
        out << "point ";
        for (std::size_t c = 0; c < doc.points[i].coords.size(); ++c)
            out << (c ? "," : "") << doc.points[i].coords[c].str();
        out << " ; colour " << doc.colours[i] << "\n";
    }
    out << "m " << doc.m << "\n";
    for (std::size_t j = 0; j < doc.max_own_counts.size(); ++j)
        out << "max-own-count " << j + 1 << " ; " << doc.max_own_counts[j] << "\n";
    out << "advances " << doc.advances << "\n";
}

template <field_kernel K>
colouring_document<K> read_colouring(std::istream& in, const K& field) {
    auto records = detail::read_records(in);
    auto h = detail::parse_header(records, "colouring");
    if (h.fs.str() != field.spec_string())
        throw validation_error("colouring field " + h.fs.str() + " does not match instance field " +
                               field.spec_string());
    colouring_document<K> doc;
    doc.dim = h.dim;
    for (std::size_t i = h.first_body; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.keyword == "point") {
            auto pieces = detail::split(r.rest, ';');
            if (pieces.size() != 2 || pieces[1].substr(0, 6) != "colour")
                throw parse_error("line " + std::to_string(r.line_no) +
                                  ": expected 'point v,... ; colour j'");
            doc.points.push_back(
                point<K>{detail::parse_coords(field, pieces[0], h.dim, r.line_no)});
            int colour = static_cast<int>(detail::parse_int64(detail::trim(pieces[1].substr(6))));
            if (colour < 1 || colour > h.dim + 1)
                throw parse_error("line " + std::to_string(r.line_no) + ": colour " +
                                  std::to_string(colour) + " out of range");
            doc.colours.push_back(colour);
        } else if (r.keyword == "m") {
            doc.m = static_cast<int>(detail::parse_int64(r.rest));
        } else if (r.keyword == "max-own-count") {
            auto pieces = detail::split(r.rest, ';');
            if (pieces.size() != 2)
                throw parse_error("line " + std::to_string(r.line_no) +
                                  ": expected 'max-own-count j ; c'");
            doc.max_own_counts.push_back(detail::parse_int64(pieces[1]));
        } else if (r.keyword == "advances") {
            doc.advances = static_cast<std::uint64_t>(detail::parse_int64(r.rest));
        } else {
            throw parse_error("line " + std::to_string(r.line_no) + ": unknown record '" +
                              r.keyword + "'");
        }
    }
    return doc;
}

template <field_kernel K>
void write_certificate(std::ostream& out, const K& field, int dim, const certificate<K>& cert) {
    out << "kind certificate\n";
    out << "field " << field.spec_string() << "\n";
    out << "dim " << dim << "\n";
    out << "m " << cert.m << "\n";
    for (const auto& x : cert.points) {
        out << "point ";
        for (std::size_t c = 0; c < x.coords.size(); ++c)
            out << (c ? "," : "") << x.coords[c].str();
        out << "\n";
    }
    for (const auto& l : cert.lines) out << line_str(l) << "\n";
}

template <field_kernel K>
certificate<K> read_certificate(std::istream& in, const K& field) {
    auto records = detail::read_records(in);
    auto h = detail::parse_header(records, "certificate");
    if (h.fs.str() != field.spec_string())
        throw validation_error("certificate field " + h.fs.str() +
                               " does not match instance field " + field.spec_string());
    certificate<K> cert;
    for (std::size_t i = h.first_body; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.keyword == "point") {
            cert.points.push_back(point<K>{detail::parse_coords(field, r.rest, h.dim, r.line_no)});
        } else if (r.keyword == "family") {
            cert.lines.push_back(detail::parse_family_record(field, r, h.dim));
        } else if (r.keyword == "m") {
            cert.m = static_cast<int>(detail::parse_int64(r.rest));
        } else {
            throw parse_error("line " + std::to_string(r.line_no) + ": unknown record '" +
                              r.keyword + "'");
        }
    }
    return cert;
}

/// Peek at a document's kind header ("colouring" or "certificate").
inline std::string document_kind(std::istream& in) {
    auto records = detail::read_records(in);
    for (const auto& r : records)
        if (r.keyword == "kind") return r.rest;
    throw parse_error("document has no 'kind' header");
}

} // namespace multijoint
