#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hirschlab/embedded.hpp"
#include "hirschlab/hrep.hpp"
#include "hirschlab/polycomp.hpp"
#include "hirschlab/report.hpp"
#include "hirschlab/simplex.hpp"
#include "hirschlab/verify.hpp"

namespace {

using namespace hirschlab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
    bool pretty = false;
    std::size_t jobs = 1;
    std::size_t max_depth = 0;
    double budget = 0;
    bool deep = false;
    std::string file, file2, out;
    std::vector<std::string> max_coeffs, min_coeffs;
    std::vector<std::size_t> only;
    std::size_t inequality = 0;
};

HPolyhedron load_hine(const std::string& path) { return parse_hine(read_text_file(path)); }

QVector parse_vector(const std::vector<std::string>& tokens)
{
    QVector v;
    for (const auto& t : tokens)
        v.push_back(Rational::parse(t));
    return v;
}

void emit(const json& j, const Options& o)
{
    std::cout << j.dump(o.pretty ? 2 : -1) << '\n';
}

void print_claims(const std::vector<ClaimReport>& claims)
{
    for (const auto& c : claims)
        std::printf("%-8s %-32s %9.3fs  %s\n", verdict_name(c.verdict), c.id.c_str(), c.wall_time, c.message.c_str());
    Summary s = summarize(claims);
    std::printf("%zu claims: %zu pass, %zu fail, %zu skipped\n", claims.size(), s.pass, s.fail, s.skipped);
}

int run_claims(const std::vector<ClaimReport>& claims, const RunConfig& config, const Options& o)
{
    json report = make_report(config, claims);
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f)
            throw DataError("cannot write " + o.out);
        f << report.dump(2) << '\n';
        if (!f)
            throw DataError("failed writing " + o.out);
    }
    if (o.pretty)
        print_claims(claims);
    else
        std::cout << report.dump() << '\n';
    return summarize(claims).ok() ? kExitPass : kExitFail;
}

int cmd_lp(const Options& o)
{
    if (o.max_coeffs.empty() == o.min_coeffs.empty())
        throw CLI::ValidationError("lp", "give exactly one of --max or --min");
    HPolyhedron p = load_hine(o.file);
    bool maximize = !o.max_coeffs.empty();
    QVector c = parse_vector(maximize ? o.max_coeffs : o.min_coeffs);
    if (c.size() != p.dim())
        throw DimensionError("objective has " + std::to_string(c.size()) + " coefficients, polyhedron dimension is " +
                             std::to_string(p.dim()));
    LPOutcome outcome = lp_solve(LPProblem{maximize ? Sense::Maximize : Sense::Minimize, c, p});
    emit(outcome_to_json(p, outcome), o);
    return kExitPass;
}

int cmd_vertices(const Options& o)
{
    HPolyhedron p = load_hine(o.file);
    auto vertices = enumerate_vertices(p, o.budget > 0 ? Deadline(std::chrono::duration<double>(o.budget)) : Deadline());
    if (o.pretty) {
        for (const auto& v : vertices) {
            for (std::size_t i = 0; i < v.point.size(); ++i)
                std::cout << (i ? " " : "") << v.point[i].str();
            std::cout << '\n';
        }
        std::cout << vertices.size() << " vertices\n";
        return kExitPass;
    }
    json list = json::array();
    for (const auto& v : vertices)
        list.push_back(vertex_to_json(p, v));
    emit(json{{"count", vertices.size()}, {"vertices", std::move(list)}}, o);
    return kExitPass;
}

int cmd_diameter(const Options& o)
{
    HPolyhedron p = load_hine(o.file);
    Deadline deadline = o.budget > 0 ? Deadline(std::chrono::duration<double>(o.budget)) : Deadline();
    PolytopeGraph g = build_graph(p, enumerate_vertices(p, deadline), deadline);
    json j{{"vertices", g.vertices.size()}, {"edges", g.num_edges()}};
    if (o.max_depth > 0) {
        // Early exit: only decide whether every pair is within max_depth.
        bool within = true;
        for (std::size_t s = 0; s < g.vertices.size() && within; ++s) {
            deadline.check("diameter", s);
            for (auto d : bfs_distances(g, s, o.max_depth))
                if (d == kUnreached) {
                    within = false;
                    break;
                }
        }
        j["max_depth"] = o.max_depth;
        j["diameter_at_most_max_depth"] = within;
    } else {
        j["diameter"] = diameter(g, o.jobs, deadline);
    }
    if (o.pretty) {
        for (auto& [k, v] : j.items())
            std::cout << k << ": " << v.dump() << '\n';
        return kExitPass;
    }
    emit(j, o);
    return kExitPass;
}

int cmd_check_cube(const Options& o)
{
    CubeSpec c = parse_cube(read_text_file(o.file));
    CubeVerdict v = is_combinatorial_cube(c);
    emit(cube_verdict_to_json(c, v), o);
    return v.is_cube ? kExitPass : kExitFail;
}

int cmd_check_bounded(const Options& o)
{
    HPolyhedron p = load_hine(o.file);
    BoundednessResult b = is_bounded(p);
    emit(boundedness_to_json(p, b), o);
    return b.bounded ? kExitPass : kExitFail;
}

int cmd_check_equal(const Options& o)
{
    HPolyhedron a = load_hine(o.file);
    HPolyhedron b = load_hine(o.file2);
    EqualityResult e = polyhedra_equal(a, b);
    json j{{"equal", e.equal},
           {"a_from_b", detail::implications_to_json(b, a, e.p_from_q)},
           {"b_from_a", detail::implications_to_json(a, b, e.q_from_p)}};
    if (e.witness)
        j["witness"] = to_json(*e.witness);
    emit(j, o);
    return e.equal ? kExitPass : kExitFail;
}

int cmd_verify_siegel(const Options& o)
{
    if (o.deep && !(o.budget > 0))
        throw CLI::ValidationError("--deep", "needs --budget <secs> greater than zero");
    RunConfig config;
    config.only = {o.inequality};
    config.deep = o.deep;
    config.budget_seconds = o.budget;
    config.jobs = o.jobs;
    config.validate();
    Verifier v(DataSource::embedded(), o.jobs);
    auto claims = v.verify_dataset(o.inequality);
    if (o.deep)
        claims.push_back(v.verify_deep_dataset(o.inequality, o.budget));
    return run_claims(claims, config, o);
}

int cmd_verify_all(const Options& o)
{
    if (o.deep && !(o.budget > 0))
        throw CLI::ValidationError("--deep", "needs --budget <secs> greater than zero");
    RunConfig config{o.only, o.deep, o.budget, o.jobs, o.out};
    config.validate();
    Verifier v(DataSource::embedded(), o.jobs);
    return run_claims(v.verify_all(config), config, o);
}

int cmd_audit(const Options& o)
{
    json report;
    try {
        report = json::parse(read_text_file(o.file));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what());
    }
    AuditResult a = audit_report(report, DataSource::embedded());
    json j{{"ok", a.ok()}, {"claims_checked", a.claims_checked},
           {"certificates_checked", a.certificates_checked}, {"failures", a.failures}};
    emit(j, o);
    return a.ok() ? kExitPass : kExitFail;
}

int cmd_export_data(const Options& o)
{
    std::filesystem::create_directories(o.file);
    auto write = [&](const std::string& name) {
        std::ofstream f(std::filesystem::path(o.file) / name, std::ios::binary);
        f << data_file(name);
        if (!f)
            throw DataError("cannot write " + name);
    };
    write("N.hine");
    for (std::size_t j : published_indices())
        write(cube_file_name(j));
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact polyhedral computations and verification of the Siegel counterexamples"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_flag("--pretty", o.pretty, "Human-readable output instead of JSON");

    auto jobs = [&](CLI::App* sub) {
        sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    };
    auto budget = [&](CLI::App* sub) {
        sub->add_option("--budget", o.budget, "Wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
    };

    auto* lp = app.add_subcommand("lp", "Solve max or min c.x over a .hine polyhedron");
    auto* max_opt = lp->add_option("--max", o.max_coeffs, "Objective coefficients to maximize");
    lp->add_option("--min", o.min_coeffs, "Objective coefficients to minimize")->excludes(max_opt);
    lp->add_option("--file", o.file, "Input .hine file")->required();

    auto* vertices = app.add_subcommand("vertices", "Enumerate the vertices of a bounded polyhedron");
    vertices->add_option("file", o.file, "Input .hine file")->required();
    budget(vertices);

    auto* diam = app.add_subcommand("diameter", "Graph diameter of a bounded polyhedron");
    diam->add_option("file", o.file, "Input .hine file")->required();
    diam->add_option("--max-depth", o.max_depth, "Only decide whether the diameter is at most this value");
    jobs(diam);
    budget(diam);

    auto* cube = app.add_subcommand("check-cube", "Test whether a slab system is a combinatorial cube");
    cube->add_option("file", o.file, "Input .cube file")->required();

    auto* bounded = app.add_subcommand("check-bounded", "Decide boundedness with certificates");
    bounded->add_option("file", o.file, "Input .hine file")->required();

    auto* equal = app.add_subcommand("check-equal", "Decide equality of two polyhedra by mutual implication");
    equal->add_option("a", o.file, "First .hine file")->required();
    equal->add_option("b", o.file2, "Second .hine file")->required();

    auto* siegel = app.add_subcommand("verify-siegel", "Verify one published construction");
    siegel->add_option("--inequality", o.inequality, "Removed inequality index j")->required();
    siegel->add_flag("--deep", o.deep, "Also run the budgeted Hirsch check on H_j");
    siegel->add_option("--out", o.out, "Write the JSON report to this path");
    budget(siegel);
    jobs(siegel);

    auto* all = app.add_subcommand("verify-all", "Verify the removable set and every published construction");
    all->add_option("--only", o.only, "Comma-separated dataset indices")->delimiter(',');
    all->add_flag("--deep", o.deep, "Add budgeted diameter checks for N and each H_j");
    all->add_option("--out", o.out, "Write the JSON report to this path");
    budget(all);
    jobs(all);

    auto* audit = app.add_subcommand("audit", "Re-check every certificate of a verify report by substitution");
    audit->add_option("report", o.file, "Report JSON written by verify-all --out")->required();

    auto* export_data = app.add_subcommand("export-data", "Write the embedded data files to a directory");
    export_data->add_option("dir", o.file, "Target directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*lp) return cmd_lp(o);
        if (*vertices) return cmd_vertices(o);
        if (*diam) return cmd_diameter(o);
        if (*cube) return cmd_check_cube(o);
        if (*bounded) return cmd_check_bounded(o);
        if (*equal) return cmd_check_equal(o);
        if (*siegel) return cmd_verify_siegel(o);
        if (*all) return cmd_verify_all(o);
        if (*audit) return cmd_audit(o);
        if (*export_data) return cmd_export_data(o);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const hirschlab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
