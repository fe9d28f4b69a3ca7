#include "multijoint/colouring.hpp"
#include "multijoint/generators.hpp"
#include "multijoint/geometry.hpp"
#include "multijoint/io.hpp"
#include "multijoint/oracle.hpp"
#include "multijoint/planar.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace mj = multijoint;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_non_generic = 2;
constexpr int exit_certificate = 3;
constexpr int exit_invalid = 4;

struct budgets {
    mj::geometry_limits geo{};
    mj::advance_limits advance{};
    std::uint64_t reject = 1000;
};

std::optional<std::uint64_t> env_u64(const char* name) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return std::nullopt;
    return static_cast<std::uint64_t>(mj::detail::parse_int64(raw));
}

budgets read_budgets() {
    budgets b;
    if (auto v = env_u64("MULTIJOINT_TUPLE_CAP")) b.geo.tuple_cap = *v;
    if (auto v = env_u64("MULTIJOINT_ADVANCE_CAP")) b.advance.cap = *v;
    if (auto v = env_u64("MULTIJOINT_REJECT_BUDGET")) b.reject = *v;
    return b;
}

mj::any_instance load_instance(const std::string& path, const mj::geometry_limits& geo) {
    std::ifstream in(path);
    if (!in) throw mj::parse_error("cannot open instance file: " + path);
    return mj::read_instance(in, geo);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mj::parse_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mj::parse_error("cannot write file: " + out_path);
    out << text;
}

template <mj::field_kernel K>
std::vector<mj::point<K>> working_points(const mj::instance<K>& inst,
                                         const mj::geometry_limits& geo) {
    if (inst.points) return *inst.points; // file order
    return mj::multijoints(inst, geo);
}

template <mj::field_kernel K>
std::vector<long long> per_family_max_counts(const mj::colouring_problem<K>& prob,
                                             const mj::colour_vec& colours) {
    std::vector<long long> best(static_cast<std::size_t>(prob.inst().dim), 0);
    for (int l = 0; l < prob.line_count(); ++l) {
        auto family = static_cast<std::size_t>(prob.line_at(l).family - 1);
        best[family] = std::max(best[family],
                                static_cast<long long>(own_colour_count(prob.index(), l, colours)));
    }
    return best;
}

struct colour_flags {
    std::optional<int> m;
    std::string algo = "general";
    std::string out_path;
    bool csv = false;
    std::string instance_path;
};

template <mj::field_kernel K>
int run_colour(const mj::instance<K>& inst, const colour_flags& flags, const budgets& b) {
    auto j = working_points(inst, b.geo);
    mj::colouring_problem<K> prob(inst, j);

    mj::colour_vec colours;
    std::optional<mj::certificate<K>> cert;
    int m_used = 0;
    std::uint64_t advances = 0;

    mj::colour_options options;
    options.geo = b.geo;
    options.limits = b.advance;

    if (flags.algo == "planar") {
        colours = mj::two_colour_bijoints(inst, j);
        m_used = mj::planar_bound(j.size());
    } else if (flags.algo == "trivial") {
        colours = mj::trivial_extra_colour(j.size(), inst.dim);
        m_used = 0;
    } else if (flags.m) {
        m_used = *flags.m;
        auto run = mj::colour_multijoints(inst, j, m_used, options);
        advances = run.advances;
        if (run.cert)
            cert = std::move(run.cert);
        else
            colours = std::move(*run.colours);
    } else {
        auto run = mj::colour_auto(inst, j, options);
        m_used = run.m_used;
        advances = run.advances;
        colours = std::move(run.colours);
    }

    const double ratio =
        j.empty() ? 0.0
                  : static_cast<double>(m_used) /
                        std::pow(static_cast<double>(j.size()), 1.0 / inst.dim);

    if (cert) {
        std::ostringstream doc;
        mj::write_certificate(doc, inst.field, inst.dim, *cert);
        emit(doc.str(), flags.out_path);
        if (flags.csv) {
            std::cout << flags.instance_path << "," << flags.algo << "," << inst.dim << ","
                      << j.size() << "," << m_used << ",,," << "certificate\n";
        } else {
            std::cout << "outcome: certificate\n"
                      << "algo: " << flags.algo << "\n"
                      << "dim: " << inst.dim << "\n"
                      << "points: " << j.size() << "\n"
                      << "m: " << m_used << "\n"
                      << "certificate-points: " << cert->points.size() << "\n"
                      << "certificate-lines: " << cert->lines.size() << "\n";
        }
        return exit_certificate;
    }

    auto max_counts = per_family_max_counts(prob, colours);
    mj::colouring_document<K> doc;
    doc.dim = inst.dim;
    doc.points = j;
    doc.colours = colours;
    doc.m = m_used;
    doc.max_own_counts = max_counts;
    doc.advances = advances;
    std::ostringstream text;
    mj::write_colouring(text, inst.field, doc);
    emit(text.str(), flags.out_path);

    long long overall_max = 0;
    for (long long c : max_counts) overall_max = std::max(overall_max, c);
    if (flags.csv) {
        std::cout << flags.instance_path << "," << flags.algo << "," << inst.dim << ","
                  << j.size() << "," << m_used << "," << overall_max << "," << advances << ","
                  << ratio << ",success\n";
    } else {
        std::cout << "outcome: success\n"
                  << "algo: " << flags.algo << "\n"
                  << "dim: " << inst.dim << "\n"
                  << "points: " << j.size() << "\n"
                  << "m-used: " << m_used << "\n";
        for (std::size_t f = 0; f < max_counts.size(); ++f)
            std::cout << "max-own-count[" << f + 1 << "]: " << max_counts[f] << "\n";
        std::cout << "advances: " << advances << "\n"
                  << "ratio: " << ratio << "\n";
        if (flags.algo == "trivial")
            std::cout << "note: baseline using the extra colour " << inst.dim + 1 << "\n";
    }
    return exit_ok;
}

template <mj::field_kernel K>
int run_verify(const mj::instance<K>& inst, const std::string& document_text,
               std::optional<int> m_flag, const budgets& b) {
    std::istringstream sniff(document_text);
    const std::string kind = mj::document_kind(sniff);

    if (kind == "certificate") {
        std::istringstream in(document_text);
        auto cert = mj::read_certificate(in, inst.field);
        if (m_flag) cert.m = *m_flag;
        auto check = mj::verify_certificate(cert, b.geo);
        std::cout << "kind: certificate\n"
                  << "m: " << cert.m << "\n"
                  << "verdict: " << (check.ok ? "valid" : "invalid") << "\n";
        if (!check.ok) {
            std::cout << "violated: " << check.violated << "\n";
            if (check.point_witness)
                std::cout << "witness: " << mj::point_str(*check.point_witness) << "\n";
            if (check.line_witness)
                std::cout << "witness: " << mj::line_str(*check.line_witness) << "\n";
        }
        return check.ok ? exit_ok : exit_invalid;
    }

    if (kind != "colouring") throw mj::parse_error("unknown document kind: " + kind);
    std::istringstream in(document_text);
    auto doc = mj::read_colouring(in, inst.field);
    const int m = m_flag.value_or(doc.m);
    std::cout << "kind: colouring\n"
              << "m: " << m << "\n";

    auto invalid = [&](const std::string& detail) {
        std::cout << "verdict: invalid\n"
                  << "detail: " << detail << "\n";
        return exit_invalid;
    };

    if (doc.dim != inst.dim) return invalid("dimension mismatch");
    for (const auto& x : doc.points)
        if (!mj::is_multijoint(x, inst, b.geo))
            return invalid("coloured point is not a multijoint: " + mj::point_str(x));
    if (inst.points) {
        auto expected = *inst.points;
        auto got = doc.points;
        std::sort(expected.begin(), expected.end());
        std::sort(got.begin(), got.end());
        if (expected != got)
            return invalid("colouring does not cover the instance's point set");
    }

    mj::colouring_problem<K> prob(inst, doc.points);
    if (auto sat = mj::find_saturated_line(prob.index(), doc.colours, m))
        return invalid("line exceeds budget: " + mj::line_str(prob.line_at(sat->line)));

    auto density = mj::colouring_to_density(doc.points, doc.colours, inst.dim);
    auto check = mj::verify_density(density, inst, static_cast<long long>(inst.dim) * m);
    if (!check.ok) {
        if (check.point_witness)
            return invalid("density lower bound fails at " + mj::point_str(*check.point_witness));
        return invalid("density mass exceeds the bound on " + mj::line_str(*check.line_witness));
    }
    std::cout << "verdict: valid\n";
    return exit_ok;
}

template <mj::field_kernel K>
int run_oracle(const mj::instance<K>& inst, const budgets& b) {
    auto j = working_points(inst, b.geo);
    auto result = mj::brute_force_min_saturation(inst, j);
    std::cout << "m-star: " << result.m_star << "\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::cout << "point ";
        for (std::size_t c = 0; c < j[i].coords.size(); ++c)
            std::cout << (c ? "," : "") << j[i].coords[c].str();
        std::cout << " ; colour " << result.witness[i] << "\n";
    }
    return exit_ok;
}

template <mj::field_kernel K>
int run_multijoints(const mj::instance<K>& inst, bool count_only, const budgets& b) {
    auto pts = mj::multijoints(inst, b.geo);
    if (count_only) {
        std::cout << pts.size() << "\n";
        return exit_ok;
    }
    for (const auto& x : pts) {
        std::cout << "point ";
        for (std::size_t c = 0; c < x.coords.size(); ++c)
            std::cout << (c ? "," : "") << x.coords[c].str();
        std::cout << "\n";
    }
    return exit_ok;
}

template <mj::field_kernel K>
int run_generic_check(const mj::instance<K>& inst, const budgets& b) {
    auto result = mj::is_generic(inst, b.geo);
    if (result.generic) {
        std::cout << "verdict: generic\n";
        return exit_ok;
    }
    std::cout << "verdict: non-generic\n"
              << "witness-point: " << mj::point_str(result.witness->at) << "\n";
    for (const auto& l : result.witness->lines)
        std::cout << "witness-line: " << mj::line_str(l) << "\n";
    return exit_non_generic;
}

int run_generate(const std::string& kind, const std::string& field_text, int n, int d,
                 std::uint64_t seed, int lines, const std::string& out_path, const budgets& b) {
    auto fs = mj::field_spec::parse(field_text);
    std::ostringstream text;
    if (kind == "random") {
        if (fs.kind != mj::field_spec::kind_t::prime)
            throw mj::validation_error("random instances need a prime field");
        mj::random_instance_options options;
        options.rejection_budget = b.reject;
        options.geo = b.geo;
        auto inst = mj::random_generic_instance(seed, d, mj::prime_field(fs.p), lines, options);
        mj::write_instance(text, inst);
    } else {
        auto build = [&](auto field) {
            if (kind == "monkey-bar")
                mj::write_instance(text, mj::monkey_bar(field, n, d));
            else if (kind == "tricolour")
                mj::write_instance(text, mj::tricolour_necessity(field, n));
            else
                throw mj::parse_error("unknown generator kind: " + kind);
        };
        if (fs.kind == mj::field_spec::kind_t::prime)
            build(mj::prime_field(fs.p));
        else
            build(mj::rational_field{});
    }
    emit(text.str(), out_path);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"colour multijoints of line families so that no line carries more than m "
                 "points of its own colour"};
    app.require_subcommand(1);

    std::string kind, field_text = "rational", instance_path, document_path, out_path;
    std::string algo = "general";
    int n = 2, d = 2, lines = 3;
    std::uint64_t seed = 0;
    int m_value = -1;
    bool csv = false, count_only = false;

    auto* generate = app.add_subcommand("generate", "write an instance file");
    generate->add_option("kind", kind, "monkey-bar, tricolour or random")->required();
    generate->add_option("--field", field_text, "prime:<p> or rational")->required();
    generate->add_option("--n", n, "grid size N");
    generate->add_option("--d", d, "dimension");
    generate->add_option("--seed", seed, "random seed");
    generate->add_option("--lines", lines, "lines per family (random)");
    generate->add_option("-o,--out", out_path, "output path (stdout when absent)");

    auto* colour = app.add_subcommand("colour", "colour the multijoints of an instance");
    colour->add_option("instance", instance_path, "instance file")->required();
    colour->add_option("--m", m_value, "saturation budget (auto-doubling when absent)");
    colour->add_option("--algo", algo, "general, planar or trivial")
        ->check(CLI::IsMember({"general", "planar", "trivial"}));
    colour->add_option("-o,--out", out_path, "colouring/certificate output path");
    colour->add_flag("--csv", csv, "emit a one-line summary instead of the report");

    auto* verify = app.add_subcommand("verify", "verify a colouring or certificate");
    verify->add_option("instance", instance_path, "instance file")->required();
    verify->add_option("document", document_path, "colouring or certificate file")->required();
    verify->add_option("--m", m_value, "budget override");

    auto* oracle = app.add_subcommand("oracle", "exhaustive minimum saturation");
    oracle->add_option("instance", instance_path, "instance file")->required();

    auto* multijoints_cmd = app.add_subcommand("multijoints", "list or count the multijoints");
    multijoints_cmd->add_option("instance", instance_path, "instance file")->required();
    multijoints_cmd->add_flag("--count", count_only, "print only the count");

    auto* generic = app.add_subcommand("generic-check", "check the genericity hypothesis");
    generic->add_option("instance", instance_path, "instance file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    const budgets b = read_budgets();
    std::optional<int> m_flag;
    if (m_value >= 0) m_flag = m_value;

    try {
        if (generate->parsed())
            return run_generate(kind, field_text, n, d, seed, lines, out_path, b);

        auto inst = load_instance(instance_path, b.geo);
        return std::visit(
            [&](const auto& typed) -> int {
                if (colour->parsed()) {
                    colour_flags flags{m_flag, algo, out_path, csv, instance_path};
                    return run_colour(typed, flags, b);
                }
                if (verify->parsed())
                    return run_verify(typed, slurp(document_path), m_flag, b);
                if (oracle->parsed()) return run_oracle(typed, b);
                if (multijoints_cmd->parsed()) return run_multijoints(typed, count_only, b);
                return run_generic_check(typed, b);
            },
            inst);
    } catch (const mj::non_generic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_non_generic;
    } catch (const mj::internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_usage;
    } catch (const mj::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
