#include "mbp/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "mbp/disk.hpp"

namespace mbp {

namespace {

// Shared pieces of every report.
Json report_head(const JobConfig& cfg, const Json& inputs) {
    Json r;
    r["suite"] = cfg.command;
    r["inputs"] = inputs;
    r["tolerances"] = to_json(cfg.tolerances);
    r["seed"] = cfg.seed;
    return r;
}

Json polar_grid_json(const PolarGrid& g) {
    return {{"n_r", g.n_r()},
            {"n_theta", g.n_theta()},
            {"r_max", g.r_max()},
            {"stretch_end", g.stretch_end()},
            {"h", g.spacing()}};
}

PolarGrid polar_grid(const GridSpec& s) { return PolarGrid(s.n_r, s.n_theta, s.r_max); }

// Polar grids store the centre once per angle; export it once.
std::string polar_csv(const PolarGrid& g, const std::vector<double>& values, std::vector<char> keep) {
    std::vector<Complex> nodes(g.size());
    for (int i = 0; i < g.n_r(); ++i) {
        for (int j = 0; j < g.n_theta(); ++j) {
            nodes[g.index(i, j)] = g.node(i, j);
            if (i == 0 && j > 0) {
                keep[g.index(i, j)] = 0;
            }
        }
    }
    return grid_csv(nodes, values, keep);
}

RiemannMap riemann_map_from_json(const Json& j) {
    const std::string kind = j.value("kind", std::string("identity"));
    if (kind == "identity") {
        return RiemannMap::identity();
    }
    if (kind == "scaled_disk") {
        if (!j.contains("radius") || !j["radius"].is_number()) {
            throw DomainError("scaled_disk map needs a numeric radius");
        }
        return RiemannMap::scaled_disk(j["radius"].get<double>());
    }
    if (kind == "mobius") {
        return RiemannMap::mobius(complex_from_json(j.at("a")), complex_from_json(j.at("b")),
                                  complex_from_json(j.at("c")), complex_from_json(j.at("d")));
    }
    throw DomainError("unknown map kind \"" + kind + "\"");
}

struct Outcome {
    Json report;
    bool pass;
};

Outcome cmd_solve(const JobConfig& cfg, const Json& in) {
    const CriticalSet c = critical_set_from_json(in);
    const SolveReport s = solve_maximal(c, cfg.tolerances);
    Json r = report_head(cfg, in);
    r.update(to_json(s));
    const bool pass = s.roundtrip_error <= cfg.tolerances.roundtrip_tol;
    return {r, pass};
}

Outcome cmd_critpoints(const JobConfig& cfg, const Json& in) {
    const FiniteBlaschke b = blaschke_from_json(in);
    const CriticalSet found = critical_points(b, cfg.tolerances.merge_tol);
    Json r = report_head(cfg, in);
    r.update(to_json(found));
    bool pass = true;
    if (in.contains("requested")) {
        const CriticalSet want = critical_set_from_json(in["requested"]);
        try {
            const double d = critical_set_distance(want, found);
            r["roundtrip_error"] = d;
            pass = d <= cfg.tolerances.roundtrip_tol;
        } catch (const OrderMismatchError& e) {
            r["roundtrip_error"] = nullptr;
            r["mismatch"] = e.what();
            pass = false;
        }
    }
    return {r, pass};
}

Outcome cmd_metric(const JobConfig& cfg, const Json& in, std::string& csv) {
    const FiniteBlaschke b = blaschke_from_json(in);
    const PolarGrid g = polar_grid(cfg.grid);
    const DensityField lambda = pullback_density(b, g);
    const double ratio = ahlfors_check(lambda);
    Json r = report_head(cfg, in);
    r["grid"] = polar_grid_json(g);
    r["ahlfors_ratio"] = ratio;
    r["zero_set"] = to_json(lambda.zero_set);
    csv = polar_csv(g, lambda.values, std::vector<char>(g.size(), 1));
    return {r, ratio <= 1.0 + 1e-9};
}

Outcome cmd_curvature(const JobConfig& cfg, const Json& in, std::string& csv) {
    const FiniteBlaschke b = blaschke_from_json(in);
    const PolarGrid g = polar_grid(cfg.grid);
    const CurvatureField k = discrete_curvature(pullback_density(b, g));
    const double h = g.spacing();
    const double dev = k.max_deviation_from(-4.0);
    Json r = report_head(cfg, in);
    r["grid"] = polar_grid_json(g);
    r["max_deviation"] = dev;
    r["deviation_over_h2"] = dev / (h * h);
    r["bound"] = 10.0 * h * h;
    r["defined_nodes"] = k.defined_count();
    csv = polar_csv(g, k.values, k.defined);
    return {r, dev <= 10.0 * h * h};
}

Outcome cmd_pde_oracle(const JobConfig& cfg, const Json& in, std::string& csv) {
    const FiniteBlaschke b = blaschke_from_json(in);
    const OracleResult o = oracle_solve(b, cfg.grid.r, cfg.grid.n);
    const PdeSolution& s = o.solution;
    const double h = s.problem.h();
    Json r = report_head(cfg, in);
    r["grid"] = {{"n", cfg.grid.n}, {"r", cfg.grid.r}, {"h", h}};
    r["deviation"] = o.deviation;
    r["deviation_over_h2"] = o.deviation / (h * h);
    r["bound"] = 5.0 * h * h;
    r["residual_norm"] = s.residual_norm;
    r["newton_iters"] = s.newton_iters;
    std::vector<Complex> nodes;
    std::vector<double> values;
    for (int j = 0; j < s.problem.n; ++j) {
        for (int i = 0; i < s.problem.n; ++i) {
            if (s.unknown[s.index(i, j)]) {
                nodes.push_back(s.problem.node(i, j));
                values.push_back(s.density(i, j));
            }
        }
    }
    csv = grid_csv(nodes, values, std::vector<char>(nodes.size(), 1));
    return {r, o.deviation <= 5.0 * h * h};
}

Outcome cmd_verify_extremal(const JobConfig& cfg, const Json& in) {
    const CriticalSet c = critical_set_from_json(in);
    const SolveReport s = solve_maximal(c, cfg.tolerances);
    const ExtremalityReport e =
        extremality_suite(c, s.solution, random_competitor_specs(c, cfg.competitors, cfg.seed), cfg.tolerances);
    Json r = report_head(cfg, in);
    r["solution"] = to_json(s.solution);
    r["functional"] = e.functional;
    r["margin"] = e.worst_margin;
    r["evaluated"] = e.evaluated;
    r["skipped"] = e.skipped;
    r["violations"] = e.violations;
    r["samples"] = e.skip_reasons;
    return {r, e.pass()};
}

Outcome cmd_verify_boundary(const JobConfig& cfg, const Json& in) {
    const FiniteBlaschke b = blaschke_from_json(in);
    std::vector<BoundaryProbe> probes;
    if (cfg.zeta) {
        probes.push_back({unimodular(*cfg.zeta), cfg.radii});
    } else {
        probes = boundary_probes(critical_points(b, cfg.tolerances.merge_tol), 8, cfg.radii);
    }
    Json samples = Json::array();
    bool pass = true;
    double worst = 0.0;
    for (const auto& p : probes) {
        const BoundarySamples s = boundary_quotient(b, p);
        samples.push_back({{"direction", to_json(s.direction)},
                           {"radii", s.radii},
                           {"quotients", s.quotients},
                           {"fitted_k", s.fitted_k},
                           {"monotone", s.monotone}});
        for (std::size_t k = 0; k < s.radii.size(); ++k) {
            const double q = s.quotients[k];
            pass = pass && q > 0.0 && q <= 1.0 + 1e-12;
            if (s.radii[k] >= 0.999) {
                worst = std::max(worst, std::abs(q - 1.0));
                pass = pass && std::abs(q - 1.0) <= 1e-3;
            }
        }
    }
    const PhiReport phi = phi_boundary_bound(b, circle_samples(4096));
    Json r = report_head(cfg, in);
    r["samples"] = samples;
    r["deviation"] = worst;
    r["phi"] = {{"min_re", phi.min_re}, {"max_re", phi.max_re}, {"max_abs_im", phi.max_abs_im}, {"pass", phi.pass()}};
    return {r, pass && phi.pass()};
}

Outcome cmd_compose(const JobConfig& cfg, const Json& in) {
    const FiniteBlaschke outer = blaschke_from_json(in.at("outer"));
    const FiniteBlaschke inner = blaschke_from_json(in.at("inner"));
    const SemigroupReport s = semigroup_check(inner, outer, cfg.tolerances);
    Json r = report_head(cfg, in);
    r["composite"] = to_json(s.composite);
    r["composite_critical"] = to_json(s.composite_critical);
    r["resolve"] = to_json(s.resolve.solution);
    r["deviation"] = s.match.error;
    r["automorphism"] = {{"rotation", to_json(s.match.t.rotation())}, {"center", to_json(s.match.t.center())}};
    r["dominance"] = {s.dominance_forward, s.dominance_backward};
    return {r, s.pass(cfg.tolerances.roundtrip_tol)};
}

Outcome cmd_union(const JobConfig& cfg, const Json& in) {
    const CriticalSet c1 = critical_set_from_json(in.at("c1"));
    const CriticalSet c2 = critical_set_from_json(in.at("c2"));
    const double c = in.value("c", 0.5);
    const UnionReport u = union_suite(c1, c2, c, polar_grid(cfg.grid), cfg.tolerances);
    Json r = report_head(cfg, in);
    r["alpha"] = u.alpha;
    r["h"] = u.h;
    r["zero_set"] = to_json(u.expected_zeros);
    r["zero_set_ok"] = u.zero_set_ok;
    r["max_stencil_curvature"] = u.max_stencil_curvature;
    r["closed_form_gap"] = u.closed_form_gap;
    r["direct"] = to_json(u.direct.solution);
    r["direct_functional"] = u.direct.functional_value;
    return {r, u.pass()};
}

Outcome cmd_converge(const JobConfig& cfg, const Json& in) {
    const std::vector<CriticalPoint> pts = critical_points_from_json(in);
    const int n_max = std::min<int>(cfg.n_max, static_cast<int>(pts.size()));
    const TruncationReport t = truncation_sequence(pts, n_max, cfg.tolerances);
    std::vector<double> functionals;
    for (const auto& s : t.solves) {
        functionals.push_back(s.functional_value);
    }
    // sup_differences[k] compares B_{k+1} with B_{k+2}; n >= 3 starts at index 2.
    bool sup_monotone = true;
    for (std::size_t k = 3; k < t.sup_differences.size(); ++k) {
        sup_monotone = sup_monotone && t.sup_differences[k] < t.sup_differences[k - 1];
    }
    Json r = report_head(cfg, in);
    r["functionals"] = functionals;
    r["sup_differences"] = t.sup_differences;
    r["functional_nonincreasing"] = t.functional_nonincreasing;
    r["sup_monotone_from_3"] = sup_monotone;
    return {r, t.functional_nonincreasing && sup_monotone};
}

Outcome cmd_transplant(const JobConfig& cfg, const Json& in) {
    const RiemannMap map = riemann_map_from_json(in.value("map", Json::object()));
    const std::vector<CriticalPoint> pts = critical_points_from_json(in);
    const Transplant t = transplant(pts, map, cfg.tolerances);
    const std::vector<CriticalPoint> found = t.critical_points();
    double err = 0.0;
    bool pass = found.size() == pts.size();
    for (const auto& want : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : found) {
            if (f.multiplicity == want.multiplicity) {
                best = std::min(best, std::abs(f.point - want.point));
            }
        }
        err = std::max(err, best);
    }
    pass = pass && err <= cfg.tolerances.roundtrip_tol;
    Json r = report_head(cfg, in);
    r["disk_solution"] = to_json(t.disk_solve.solution);
    r["derivative_at_0"] = to_json(t.derivative(0.0));
    r["critical_points"] = to_json(found);
    r["deviation"] = err;
    return {r, pass};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw DomainError("not a number: \"" + s + "\"");
    }
    return v;
}

int parse_int(const std::string& s) {
    const double v = parse_double(s);
    if (v != std::floor(v)) {
        throw DomainError("not an integer: \"" + s + "\"");
    }
    return static_cast<int>(v);
}

}  // namespace

const std::vector<std::string>& cli_commands() {
    static const std::vector<std::string> names{"solve",          "critpoints",      "metric",  "curvature",
                                                "pde-oracle",     "verify-extremal", "verify-boundary",
                                                "compose",        "union",           "converge",
                                                "transplant"};
    return names;
}

void JobConfig::validate() const {
    const auto& names = cli_commands();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
        throw DomainError("unknown command \"" + command + "\"");
    }
    if (input_path.empty()) {
        throw DomainError("an input file is required");
    }
    if (grid.n_r < 3 || grid.n_theta < 4 || grid.n < 5) {
        throw DomainError("grid sizes must be positive (n_r >= 3, n_theta >= 4, n >= 5)");
    }
    if (!(grid.r_max > 0.0 && grid.r_max < 1.0) || !(grid.r > 0.0 && grid.r < 1.0)) {
        throw DomainError("grid radii must lie in (0, 1)");
    }
    if (competitors < 1 || n_max < 1) {
        throw DomainError("competitor count and n_max must be positive");
    }
    tolerances.validate();
}

void apply_grid_override(const std::string& text, GridSpec& grid) {
    const auto parts = split(text, ',');
    if (parts.size() == 3) {
        grid.n_r = parse_int(parts[0]);
        grid.n_theta = parse_int(parts[1]);
        grid.r_max = parse_double(parts[2]);
    } else if (parts.size() == 2) {
        grid.n = parse_int(parts[0]);
        grid.r = parse_double(parts[1]);
    } else {
        throw DomainError("--grid expects n_r,n_theta,r_max or n,r");
    }
}

void apply_tol_override(const std::string& text, HomotopyConfig& cfg) {
    for (const auto& item : split(text, ',')) {
        const auto kv = split(item, '=');
        if (kv.size() != 2) {
            throw DomainError("--tol expects key=value pairs");
        }
        const double v = parse_double(kv[1]);
        if (kv[0] == "newton_tol") {
            cfg.newton_tol = v;
        } else if (kv[0] == "roundtrip_tol") {
            cfg.roundtrip_tol = v;
        } else if (kv[0] == "merge_tol") {
            cfg.merge_tol = v;
        } else {
            throw DomainError("unknown tolerance \"" + kv[0] + "\"");
        }
    }
}

void apply_job_json(const Json& job, JobConfig& cfg) {
    if (!job.is_object()) {
        throw DomainError("job file must hold a JSON object");
    }
    auto get_string = [&](const char* key, std::string& dst) {
        if (job.contains(key)) {
            if (!job[key].is_string()) {
                throw DomainError(std::string("\"") + key + "\" must be a string");
            }
            dst = job[key].get<std::string>();
        }
    };
    get_string("command", cfg.command);
    get_string("input_path", cfg.input_path);
    get_string("output_path", cfg.output_path);
    get_string("csv_path", cfg.csv_path);
    if (job.contains("grid")) {
        const Json& g = job["grid"];
        cfg.grid.n_r = g.value("n_r", cfg.grid.n_r);
        cfg.grid.n_theta = g.value("n_theta", cfg.grid.n_theta);
        cfg.grid.r_max = g.value("r_max", cfg.grid.r_max);
        cfg.grid.n = g.value("n", cfg.grid.n);
        cfg.grid.r = g.value("r", cfg.grid.r);
    }
    if (job.contains("tolerances")) {
        const Json& t = job["tolerances"];
        cfg.tolerances.newton_tol = t.value("newton_tol", cfg.tolerances.newton_tol);
        cfg.tolerances.roundtrip_tol = t.value("roundtrip_tol", cfg.tolerances.roundtrip_tol);
    }
    cfg.seed = job.value("seed", cfg.seed);
    cfg.competitors = job.value("competitors", cfg.competitors);
    cfg.n_max = job.value("n_max", cfg.n_max);
    if (job.contains("radii")) {
        cfg.radii = job["radii"].get<std::vector<double>>();
    }
    if (job.contains("zeta")) {
        cfg.zeta = complex_from_json(job["zeta"]);
    }
}

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        const Json in = read_json_file(cfg.input_path);
        std::string csv;
        Outcome o;
        const std::string& c = cfg.command;
        if (c == "solve") {
            o = cmd_solve(cfg, in);
        } else if (c == "critpoints") {
            o = cmd_critpoints(cfg, in);
        } else if (c == "metric") {
            o = cmd_metric(cfg, in, csv);
        } else if (c == "curvature") {
            o = cmd_curvature(cfg, in, csv);
        } else if (c == "pde-oracle") {
            o = cmd_pde_oracle(cfg, in, csv);
        } else if (c == "verify-extremal") {
            o = cmd_verify_extremal(cfg, in);
        } else if (c == "verify-boundary") {
            o = cmd_verify_boundary(cfg, in);
        } else if (c == "compose") {
            o = cmd_compose(cfg, in);
        } else if (c == "union") {
            o = cmd_union(cfg, in);
        } else if (c == "converge") {
            o = cmd_converge(cfg, in);
        } else {
            o = cmd_transplant(cfg, in);
        }
        o.report["pass"] = o.pass;
        if (!csv.empty()) {
            if (cfg.csv_path.empty()) {
                throw DomainError("this command writes grid values; pass --csv");
            }
            write_text_file(cfg.csv_path, csv);
            o.report["csv"] = cfg.csv_path;
        }
        const std::string text = dump_json(o.report) + "\n";
        if (cfg.output_path.empty()) {
            out << text;
        } else {
            write_text_file(cfg.output_path, text);
        }
        return o.pass ? kExitPass : kExitVerifyFail;
    } catch (const JsonInputError& e) {
        err << cfg.input_path << ": " << e.what() << "\n";
        return kExitBadInput;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const Json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Maximal Blaschke products with prescribed critical sets"};
    JobConfig cfg;
    std::string command, config_path, grid, tol, zeta, radii;
    std::uint64_t seed = 0;
    int competitors = 0, n_max = 0;
    app.add_option("command", command, "one of: solve critpoints metric curvature pde-oracle verify-extremal "
                                       "verify-boundary compose union converge transplant");
    app.add_option("-i,--input", cfg.input_path, "input JSON");
    app.add_option("-o,--output", cfg.output_path, "report JSON (default: stdout)");
    app.add_option("--csv", cfg.csv_path, "grid values as re,im,value");
    app.add_option("--config", config_path, "JSON job file; command-line flags win");
    app.add_option("--seed", seed, "seed for randomized suites");
    app.add_option("--grid", grid, "n_r,n_theta,r_max (polar) or n,r (PDE)");
    app.add_option("--tol", tol, "newton_tol=..,roundtrip_tol=..,merge_tol=..");
    app.add_option("--competitors", competitors, "competitors per critical set");
    app.add_option("--n-max", n_max, "longest prefix for converge");
    app.add_option("--zeta", zeta, "probe direction re,im for verify-boundary");
    app.add_option("--radii", radii, "comma separated probe radii");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitBadInput;
    }
    try {
        if (!config_path.empty()) {
            apply_job_json(read_json_file(config_path), cfg);
        }
        if (!command.empty()) {
            cfg.command = command;
        }
        if (app.count("--seed") > 0) {
            cfg.seed = seed;
        }
        if (app.count("--competitors") > 0) {
            cfg.competitors = competitors;
        }
        if (app.count("--n-max") > 0) {
            cfg.n_max = n_max;
        }
        if (!grid.empty()) {
            apply_grid_override(grid, cfg.grid);
        }
        if (!tol.empty()) {
            apply_tol_override(tol, cfg.tolerances);
        }
        if (!zeta.empty()) {
            const auto parts = split(zeta, ',');
            if (parts.size() != 2) {
                throw DomainError("--zeta expects re,im");
            }
            cfg.zeta = Complex(parse_double(parts[0]), parse_double(parts[1]));
        }
        if (!radii.empty()) {
            cfg.radii.clear();
            for (const auto& p : split(radii, ',')) {
                cfg.radii.push_back(parse_double(p));
            }
        }
    } catch (const JsonInputError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    }
    return run(cfg, std::cout, std::cerr);
}

}  // namespace mbp
