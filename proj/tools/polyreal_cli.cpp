// polyreal: realizability checks for polytope incidence relations.
//
// Exit codes: 0 success, 1 rejected or failed verification, 2 inconclusive,
// 3 input error. Reports go to stdout as JSON (default) or flat text.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polyreal/polyreal.hpp"

using namespace polyreal;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, Rejected = 1, Inconclusive = 2, InputError = 3 };

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::optional<Index> d;
    double fill = 1.0;
    double margin = 0.1;
    std::size_t restarts = 32;
    std::size_t iters = 2000;
    std::uint64_t seed = 0;
    double rank_tol = kDefaultRankTol;
    double eq_tol = 1e-7;
    double slack_tol = 1e-7;
    double det_zero_tol = 1e-8;
    std::size_t flag_cap = kDefaultFlagCap;
    std::string format = "json";
    std::string out;
    std::string direction = "polytope-to-cone";
    std::string kind = "cone";
    std::string form = "euclidean";
    std::string phi_path;
    std::vector<std::size_t> ideal;  // 1-based on the command line
};

struct Outcome {
    int code = Ok;
    json report;
};

void validate(const RunConfig& c)
{
    for (auto [name, v] : {std::pair{"--rank-tol", c.rank_tol}, {"--eq-tol", c.eq_tol}, {"--slack-tol", c.slack_tol},
                           {"--det-zero-tol", c.det_zero_tol}})
        if (!(v > 0))
            throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
    if (c.d && *c.d < 1)
        throw Error(ErrorCode::InvalidArgument, "--d must be at least 1");
}

json tolerances(const RunConfig& c)
{
    return {{"rank_tol", c.rank_tol}, {"eq_tol", c.eq_tol}, {"slack_tol", c.slack_tol}, {"det_zero_tol", c.det_zero_tol}};
}

FillTolerances fill_tolerances(const RunConfig& c) { return {c.eq_tol, c.slack_tol}; }

GramianOptions gramian_options(const RunConfig& c)
{
    GramianOptions o;
    o.rank_tol = c.rank_tol;
    o.det_zero_tol = c.det_zero_tol;
    o.seed = c.seed;
    o.flag_cap = c.flag_cap;
    return o;
}

json matrix_json(const Matrix& m)
{
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c) == 0.0 ? 0.0 : m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Without --out, matrices are embedded in the report instead of written.
void emit_matrices(const RunConfig& c, json& report, const std::vector<std::pair<std::string, Matrix>>& mats)
{
    if (c.out.empty()) {
        for (const auto& [name, m] : mats)
            report["matrices"][name] = matrix_json(m);
        return;
    }
    std::filesystem::create_directories(c.out);
    for (const auto& [name, m] : mats) {
        const auto path = (std::filesystem::path(c.out) / (name + ".csv")).string();
        write_matrix(path, m);
        report["written"].push_back(path);
    }
}

void emit_matrix_file(const RunConfig& c, json& report, const std::string& key, const Matrix& m)
{
    if (c.out.empty()) {
        report[key] = matrix_json(m);
        return;
    }
    write_matrix(c.out, m);
    report["written"].push_back(c.out);
}

Index resolve_d(const RunConfig& c, const IncidenceRelation& rel)
{
    if (c.d)
        return *c.d;
    auto lat = build_maxbiclique_lattice(rel);
    if (!lat.graded() || *lat.rank() < 2)
        throw Error(ErrorCode::InvalidArgument, "--d is required when the lattice does not fix a dimension");
    return static_cast<Index>(*lat.rank()) - 1;
}

json violations_json(const FillCheck& check, std::size_t limit = 20)
{
    json out = json::array();
    for (std::size_t k = 0; k < check.violations.size() && k < limit; ++k) {
        const auto& v = check.violations[k];
        out.push_back({{"facet", v.facet + 1}, {"vertex", v.vertex + 1}, {"value", v.value}, {"incident", v.incident}});
    }
    return out;
}

json fill_json(const FillCheck& check)
{
    json j{{"ok", check.ok}, {"max_eq_error", check.max_eq_error}};
    j["min_slack"] = std::isfinite(check.min_slack) ? json(check.min_slack) : json(nullptr);
    j["violation_count"] = check.violations.size();
    j["violations"] = violations_json(check);
    return j;
}

json combinatorics_json(const CombinatorialReport& rep)
{
    json conds = json::array();
    auto add = [&](GateCondition g, std::optional<bool> v) {
        if (v)
            conds.push_back({{"name", to_string(g)}, {"passed", *v}});
    };
    add(GateCondition::Degenerate, rep.degeneracy ? std::optional(false) : std::optional(true));
    if (!rep.degeneracy)
        add(GateCondition::Graded, rep.graded);
    add(GateCondition::Rank, rep.rank_matches);
    add(GateCondition::Diamond, rep.diamond);
    add(GateCondition::FlagConnected, rep.flag_connected);
    add(GateCondition::Irreducibles, rep.irreducibles);
    json j{{"passed", rep.passed()}, {"conditions", conds}};
    j["failure"] = rep.failure ? json(to_string(*rep.failure)) : json(nullptr);
    j["reason"] = rep.reason;
    j["lattice"] = {{"size", rep.lattice_size}, {"graded", rep.graded}};
    j["lattice"]["rank"] = rep.rank ? json(*rep.rank) : json(nullptr);
    j["lattice"]["rank_profile"] = rep.rank_profile;
    return j;
}

json gramian_json(const GramianReport& rep)
{
    json conds = json::array();
    for (const auto& c : rep.conditions)
        conds.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"passed", rep.ok()},
            {"conditions", conds},
            {"pairs_total", rep.pairs_total},
            {"pairs_checked", rep.pairs_checked},
            {"sampled", rep.sampled}};
}

BilinearForm form_for(const RunConfig& c, Index dim)
{
    if (!c.phi_path.empty()) {
        BilinearForm phi(read_matrix(c.phi_path));
        if (phi.dim() != dim)
            throw Error(ErrorCode::DimensionMismatch, "form is " + std::to_string(phi.dim()) + "x"
                                                          + std::to_string(phi.dim()) + ", expected d + 1 = "
                                                          + std::to_string(dim));
        return phi;
    }
    if (c.form == "euclidean")
        return BilinearForm::euclidean(dim);
    if (c.form == "lorentzian")
        return BilinearForm::lorentzian(dim);
    throw Error(ErrorCode::InvalidArgument, "unknown form '" + c.form + "'");
}

Outcome cmd_check(const RunConfig& c)
{
    auto rel = read_relation(c.inputs.at(0));
    auto rep = combinatorial_gate(rel, c.d);
    Outcome o{rep.passed() ? Ok : Rejected, {}};
    o.report["verdict"] = rep.passed() ? "pass" : "rejected";
    o.report["combinatorics"] = combinatorics_json(rep);
    return o;
}

Outcome cmd_realize(const RunConfig& c)
{
    auto rel = read_relation(c.inputs.at(0));
    RealizeOptions opts;
    opts.margin = c.margin;
    opts.max_restarts = c.restarts;
    opts.max_iters = c.iters;
    opts.seed = c.seed;
    opts.rank_tol = c.rank_tol;
    opts.tolerances = fill_tolerances(c);
    auto v = realizability_check(rel, c.d, opts);

    Outcome o;
    o.report["verdict"] = to_string(v.kind);
    o.report["d"] = v.d;
    o.report["combinatorics"] = combinatorics_json(v.combinatorics);
    if (v.kind == VerdictKind::CombinatoriallyRejected) {
        o.code = Rejected;
        return o;
    }
    o.report["realization_space_dimension"] = v.realization_space_dim;
    o.report["solver"] = {{"found", v.completion.found},
                          {"margin", c.margin},
                          {"seed", c.seed},
                          {"restarts_run", v.completion.restarts_run},
                          {"winning_restart", v.completion.found ? json(v.completion.restart) : json(nullptr)},
                          {"iterations", v.completion.iterations},
                          {"best_residual", v.best_residual},
                          {"residual_history", v.completion.residual_history}};
    if (v.kind == VerdictKind::Inconclusive) {
        o.code = Inconclusive;
        return o;
    }
    const auto& real = *v.realization;
    auto cert = verify_certificate(rel, real, v.m, opts);
    o.report["certificate"] = {{"ok", cert.ok},
                               {"rank", numeric_rank(v.m, c.rank_tol)},
                               {"fill", fill_json(cert.pattern)}};
    o.report["certificate"]["grunbaum"] = cert.grunbaum ? json(*cert.grunbaum) : json(nullptr);
    if (!cert.ok) {
        o.report["verdict"] = to_string(VerdictKind::Inconclusive);
        o.report["certificate"]["reason"] = cert.reason;
        o.code = Inconclusive;
        return o;
    }
    // One row per facet in H.csv and one row per vertex in W.csv, so M = H W^T.
    emit_matrices(c, o.report, {{"M", v.m}, {"H", real.h.transpose()}, {"W", real.w.transpose()}});
    return o;
}

Outcome cmd_verify(const RunConfig& c)
{
    auto rel = read_relation(c.inputs.at(0));
    auto m = read_matrix(c.inputs.at(1));
    const Index d = resolve_d(c, rel);
    const Index expected = c.fill == 0.0 ? d + 1 : d;
    auto pattern = check_filled_incidence(m, rel, c.fill, fill_tolerances(c));
    const auto rank = numeric_rank(m, c.rank_tol);

    Outcome o;
    const bool ok = pattern.ok && rank == expected;
    o.code = ok ? Ok : Rejected;
    o.report["verdict"] = ok ? "pass" : "fail";
    o.report["d"] = d;
    o.report["fill"] = c.fill;
    o.report["rank"] = {{"ok", rank == expected}, {"value", rank}, {"expected", expected}};
    o.report["pattern"] = fill_json(pattern);
    json diag = json::array();
    if (rank != expected)
        diag.push_back("numeric rank " + std::to_string(rank) + ", expected " + std::to_string(expected));
    for (const auto& v : pattern.violations)
        diag.push_back("(" + std::to_string(v.facet + 1) + "," + std::to_string(v.vertex + 1) + ") = " + show(v.value)
                       + (v.incident ? " should equal the fill" : " should lie below the fill"));
    o.report["diagnostics"] = diag;
    o.report["tolerances"] = tolerances(c);
    return o;
}

Outcome cmd_convert(const RunConfig& c)
{
    auto m = read_matrix(c.inputs.at(0));
    Outcome o;
    o.report["direction"] = c.direction;
    Matrix out;
    if (c.direction == "polytope-to-cone") {
        out = polytope_to_cone_matrix(m, c.rank_tol);
    } else if (c.direction == "cone-to-polytope") {
        ConeToPolytopeOptions opts;
        opts.rank_tol = c.rank_tol;
        out = cone_to_polytope_matrix(m, opts);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown direction '" + c.direction + "'");
    }
    o.report["verdict"] = "ok";
    o.report["input_rank"] = numeric_rank(m, c.rank_tol);
    o.report["output_rank"] = numeric_rank(out, c.rank_tol);
    emit_matrix_file(c, o.report, "matrix", out);
    return o;
}

Outcome cmd_gale(const RunConfig& c)
{
    auto m = read_matrix(c.inputs.at(0));
    GaleDual g;
    if (c.kind == "cone")
        g = gale_dual_cone(m, c.rank_tol);
    else if (c.kind == "polytope")
        g = gale_dual_polytope(m, c.rank_tol);
    else
        throw Error(ErrorCode::InvalidArgument, "unknown kind '" + c.kind + "'");
    Outcome o;
    o.report["verdict"] = "ok";
    o.report["kind"] = c.kind;
    o.report["rank"] = g.rank;
    o.report["generators"] = m.cols();
    o.report["dual_dimension"] = g.basis.cols();
    o.report["trivial"] = g.trivial;
    o.report["basis"] = "trailing right singular vectors in index order";
    if (!g.trivial) {
        // One row per generator: its coordinates in the null-space basis.
        emit_matrix_file(c, o.report, "vectors", g.coordinates.transpose());
    }
    return o;
}

struct GramianInputs {
    IncidenceRelation rel;
    Matrix g;
    Index d = 0;
};

GramianInputs read_gramian_inputs(const RunConfig& c)
{
    GramianInputs in{read_relation(c.inputs.at(0)), read_matrix(c.inputs.at(1)), 0};
    in.d = resolve_d(c, in.rel);
    return in;
}

Outcome gramian_outcome(const GramianReport& rep, Index d, const RunConfig& c)
{
    Outcome o{rep.ok() ? Ok : Rejected, {}};
    o.report["verdict"] = rep.ok() ? "pass" : "fail";
    o.report["d"] = d;
    o.report["gramian"] = gramian_json(rep);
    o.report["tolerances"] = tolerances(c);
    return o;
}

Outcome cmd_gramian_verify(const RunConfig& c)
{
    auto in = read_gramian_inputs(c);
    GramianCandidate cand{in.g, form_for(c, in.d + 1), in.rel, in.d};
    return gramian_outcome(verify_gramian_conditions(cand, gramian_options(c)), in.d, c);
}

Outcome cmd_gramian_realize(const RunConfig& c)
{
    auto in = read_gramian_inputs(c);
    GramianCandidate cand{in.g, form_for(c, in.d + 1), in.rel, in.d};
    const auto opts = gramian_options(c);
    auto o = gramian_outcome(verify_gramian_conditions(cand, opts), in.d, c);
    if (o.code != Ok)
        return o;
    auto cone = realize_cone_from_gramian(cand, opts, fill_tolerances(c));
    auto pattern = check_filled_incidence(cone.n, in.rel, 0.0, fill_tolerances(c));
    const double reproduced = max_abs(gramian_of_cone(cone.h, cand.phi) - in.g);
    o.report["cone"] = {{"fill", fill_json(pattern)},
                        {"rank", numeric_rank(cone.n, c.rank_tol)},
                        {"sign_flipped", cone.sign_flipped},
                        {"gramian_max_error", reproduced}};
    if (!pattern.ok) {
        o.report["verdict"] = "fail";
        o.code = Rejected;
        return o;
    }
    emit_matrices(c, o.report, {{"N", cone.n}, {"H", cone.h.transpose()}, {"W", cone.w.transpose()}});
    return o;
}

Outcome cmd_spherical_verify(const RunConfig& c)
{
    auto in = read_gramian_inputs(c);
    return gramian_outcome(verify_spherical_conditions(in.rel, in.g, in.d, gramian_options(c)), in.d, c);
}

Outcome cmd_hyperbolic_verify(const RunConfig& c)
{
    auto in = read_gramian_inputs(c);
    std::vector<std::size_t> ideal;
    for (auto j : c.ideal) {
        if (j < 1)
            throw Error(ErrorCode::InvalidArgument, "--ideal takes 1-based vertex indices");
        ideal.push_back(j - 1);
    }
    auto o = gramian_outcome(verify_hyperbolic_conditions(in.rel, ideal, in.g, in.d, gramian_options(c)), in.d, c);
    o.report["ideal"] = c.ideal;
    return o;
}

int exit_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::FlagCapExceeded:
    case ErrorCode::CapExceeded:
        return Inconclusive;
    case ErrorCode::NotGraded:
    case ErrorCode::NotDiamond:
    case ErrorCode::NotBipartite:
    case ErrorCode::NoExtraFacet:
    case ErrorCode::NotPsd:
    case ErrorCode::SignatureMismatch:
    case ErrorCode::RankMismatch:
    case ErrorCode::RankAnomaly:
    case ErrorCode::NoPositiveScaling:
    case ErrorCode::LightlikeNormal:
    case ErrorCode::PatternViolation:
    case ErrorCode::NotInRange:
        return Rejected;
    default:
        return InputError;
    }
}

void flatten(const json& j, const std::string& prefix, std::ostream& os)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t k = 0; k < j.size(); ++k)
            flatten(j[k], prefix + "[" + std::to_string(k) + "]", os);
    } else if (j.is_string()) {
        os << prefix << ": " << j.get<std::string>() << "\n";
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

void print(const json& report, const std::string& format)
{
    if (format == "text")
        flatten(report, "", std::cout);
    else
        std::cout << report.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polyreal: realizability of polytope incidence relations"};
    app.require_subcommand(1);
    RunConfig cfg;
    Index d_arg = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--d", d_arg, "Polytope dimension (default: lattice rank - 1)")->check(CLI::PositiveNumber);
        sub->add_option("--rank-tol", cfg.rank_tol, "Relative singular value cutoff");
        sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--seed", cfg.seed, "Seed for restarts and sampling");
    };
    auto fill_tols = [&](CLI::App* sub) {
        sub->add_option("--eq-tol", cfg.eq_tol, "Tolerance on incident entries");
        sub->add_option("--slack-tol", cfg.slack_tol, "Required gap below the fill elsewhere");
    };
    auto gram = [&](CLI::App* sub, bool with_form) {
        sub->add_option("relation", cfg.inputs, "Relation JSON and Gramian CSV")->expected(2)->required();
        sub->add_option("--flag-cap", cfg.flag_cap, "Maximum number of flags enumerated");
        sub->add_option("--det-zero-tol", cfg.det_zero_tol, "Relative band for vanishing determinants");
        if (with_form) {
            auto* form = sub->add_option("--form", cfg.form, "Named form")->check(CLI::IsMember({"euclidean", "lorentzian"}));
            sub->add_option("--phi", cfg.phi_path, "Form matrix CSV")->excludes(form);
        }
    };

    auto* check = app.add_subcommand("check", "Lattice conditions of a relation");
    check->add_option("relation", cfg.inputs, "Relation JSON")->expected(1)->required();
    common(check);

    auto* realize = app.add_subcommand("realize", "Find a realization of a relation");
    realize->add_option("relation", cfg.inputs, "Relation JSON")->expected(1)->required();
    realize->add_option("--margin", cfg.margin, "Off-relation target is 1 - margin");
    realize->add_option("--restarts", cfg.restarts, "Maximum restarts");
    realize->add_option("--iters", cfg.iters, "Iterations per restart");
    realize->add_option("--out", cfg.out, "Directory for M.csv, H.csv and W.csv");
    common(realize);
    fill_tols(realize);

    auto* verify = app.add_subcommand("verify", "Check a filled incidence matrix");
    verify->add_option("relation", cfg.inputs, "Relation JSON and matrix CSV")->expected(2)->required();
    verify->add_option("--fill", cfg.fill, "Fill value on the relation");
    common(verify);
    fill_tols(verify);

    auto* convert = app.add_subcommand("convert", "Between polytope (fill 1) and cone (fill 0) matrices");
    convert->add_option("matrix", cfg.inputs, "Matrix CSV")->expected(1)->required();
    convert->add_option("--direction", cfg.direction)->check(CLI::IsMember({"polytope-to-cone", "cone-to-polytope"}));
    convert->add_option("--out", cfg.out, "Output CSV");
    common(convert);

    auto* gale = app.add_subcommand("gale", "Gale dual vectors of a cone or polytope matrix");
    gale->add_option("matrix", cfg.inputs, "Matrix CSV")->expected(1)->required();
    gale->add_option("--kind", cfg.kind)->check(CLI::IsMember({"cone", "polytope"}));
    gale->add_option("--out", cfg.out, "Output CSV, one row per generator");
    common(gale);

    auto* gverify = app.add_subcommand("gramian-verify", "Gramian conditions for a cone under a form");
    gram(gverify, true);
    common(gverify);

    auto* grealize = app.add_subcommand("gramian-realize", "Cone realization from a Gramian");
    gram(grealize, true);
    grealize->add_option("--out", cfg.out, "Directory for N.csv, H.csv and W.csv");
    common(grealize);
    fill_tols(grealize);

    auto* spherical = app.add_subcommand("spherical-verify", "Gramian conditions for a spherical polytope");
    gram(spherical, false);
    common(spherical);

    auto* hyperbolic = app.add_subcommand("hyperbolic-verify", "Gramian conditions for a hyperbolic polytope");
    gram(hyperbolic, false);
    hyperbolic->add_option("--ideal", cfg.ideal, "Ideal vertices, 1-based")->delimiter(',');
    common(hyperbolic);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return InputError;
    }

    auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub->count("--d"))
        cfg.d = d_arg;

    Outcome o;
    try {
        validate(cfg);
        if (sub == check)
            o = cmd_check(cfg);
        else if (sub == realize)
            o = cmd_realize(cfg);
        else if (sub == verify)
            o = cmd_verify(cfg);
        else if (sub == convert)
            o = cmd_convert(cfg);
        else if (sub == gale)
            o = cmd_gale(cfg);
        else if (sub == gverify)
            o = cmd_gramian_verify(cfg);
        else if (sub == grealize)
            o = cmd_gramian_realize(cfg);
        else if (sub == spherical)
            o = cmd_spherical_verify(cfg);
        else
            o = cmd_hyperbolic_verify(cfg);
    } catch (const Error& e) {
        o.code = exit_for(e.code());
        o.report = json::object();
        o.report["verdict"] = o.code == InputError ? "input-error" : o.code == Rejected ? "rejected" : "inconclusive";
        o.report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        std::cerr << "polyreal " << cfg.command << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        o.code = InputError;
        o.report = {{"verdict", "input-error"}, {"error", {{"code", "exception"}, {"message", e.what()}}}};
        std::cerr << "polyreal " << cfg.command << ": " << e.what() << "\n";
    }

    json report{{"command", cfg.command}, {"inputs", cfg.inputs}, {"exit_code", o.code}};
    for (auto it = o.report.begin(); it != o.report.end(); ++it)
        report[it.key()] = it.value();
    print(report, cfg.format);
    return o.code;
}
