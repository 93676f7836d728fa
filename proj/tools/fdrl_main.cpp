// Command-line front end: simulate scenarios, transform observations to
// p-values, aggregate them, run the FDR / FDR_L procedures, analyze the
// identification limit alpha_inf, score masks against truth, and sweep
// replicates. Every run writes a manifest JSON sufficient to reproduce its
// outputs byte for byte.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdrl/io.hpp"
#include "fdrl/pipeline.hpp"
#include "fdrl/version.hpp"

using namespace fdrl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- parsing

double parse_signal_height(const std::string& text) {
    if (text.rfind("log", 0) == 0) return std::log(std::stod(text.substr(3)));
    return std::stod(text);
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) dims.push_back(std::stoi(part));
    validate_dims(dims);
    return dims;
}

BorderPolicy parse_border(const std::string& text) {
    if (text == "truncate") return BorderPolicy::truncate;
    if (text == "mirror") return BorderPolicy::mirror;
    throw invalid_spec_error("unknown border policy: " + text);
}

NeighborhoodSpec parse_neighborhood(const std::string& text, const std::string& border,
                                    const std::vector<int>& dims) {
    const BorderPolicy policy = parse_border(border);
    if (text == "auto")
        return dims.size() == 3 ? NeighborhoodSpec::cross7(policy)
                                : NeighborhoodSpec::cross5(policy);
    if (text == "cross5") return NeighborhoodSpec::cross5(policy);
    if (text == "cross7") return NeighborhoodSpec::cross7(policy);
    if (text.rfind("knn:", 0) == 0) return NeighborhoodSpec::nearest(std::stoi(text.substr(4)));
    if (text.rfind("radius:", 0) == 0)
        return NeighborhoodSpec::ball(std::stod(text.substr(7)), policy);
    throw invalid_spec_error("unknown neighborhood spec: " + text);
}

FilterKind parse_filter(const std::string& text) {
    if (text == "median") return FilterKind::median;
    if (text == "mean") return FilterKind::mean;
    throw invalid_spec_error("unknown filter: " + text);
}

Method parse_method(const std::string& text) {
    if (text == "1") return Method::method1;
    if (text == "1n") return Method::method1_normal;
    if (text == "2") return Method::method2;
    if (text == "beta") return Method::beta;
    throw invalid_spec_error("unknown method: " + text);
}

struct ModelFlags {
    std::string family = "exp";
    std::string c_text = "log8";
    double sigma = 1.0;
    double df0 = 3.0, df1 = 3.0;

    DistModel build() const {
        const double c = parse_signal_height(c_text);
        if (family == "exp") return DistModel::exponential_shift(c);
        if (family == "normal") return DistModel::normal(c, sigma);
        if (family == "t") return DistModel::student_t(c, df0, df1);
        throw invalid_spec_error("unknown model family: " + family);
    }
};

Scenario build_scenario(const std::string& name, const std::string& c_text,
                        const std::string& dims_text) {
    std::vector<int> dims;
    if (!dims_text.empty()) dims = parse_dims(dims_text);
    if (name == "example1") return Scenario::example1(dims.empty() ? std::vector<int>{258, 258} : dims);
    if (name == "example2") return Scenario::example2(dims.empty() ? std::vector<int>{258, 258} : dims);
    if (name == "example3") return Scenario::example3(dims.empty() ? std::vector<int>{258, 258} : dims);
    if (name == "exp")
        return Scenario::exponential(parse_signal_height(c_text),
                                     dims.empty() ? std::vector<int>{50, 50} : dims);
    throw invalid_spec_error("unknown scenario: " + name);
}

// ---------------------------------------------------------------- output

void write_manifest(const fs::path& where, const std::string& command, const json& config) {
    json manifest{{"command", command}, {"version", fdrl::version}, {"config", config}};
    atomic_write_text(where, manifest.dump(2) + "\n");
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw invalid_spec_error("cannot create output directory: " + dir.string());
}

void write_procedure_outputs(const fs::path& out_dir, const FdrCurve& curve,
                             const Lattice& field) {
    write_curve_csv(out_dir / "curve.csv", curve);
    atomic_write_text(out_dir / "summary.json", curve_summary_json(curve).dump(2) + "\n");
    RejectionMask mask = reject(field, curve.t_alpha);
    write_mask(out_dir / "mask.bin", mask);
    write_mask_csv(out_dir / "mask.csv", mask);
    if (mask.dims.size() == 2) write_mask_pgm(out_dir / "mask.pgm", mask);
}

std::string alpha_inf_table(const std::vector<std::string>& c_labels,
                            const std::vector<LipReport>& reports) {
    std::ostringstream out;
    auto row = [&](const std::string& head, auto value_of) {
        out << head;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " %9.4f", value_of(reports[i]));
            out << buf;
        }
        out << '\n';
    };
    out << "C            ";
    for (const auto& label : c_labels) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %9s", label.c_str());
        out << buf;
    }
    out << '\n';
    row("alpha_inf    ", [](const LipReport& r) { return r.alpha_inf_fdr; });
    row("alpha_inf_L  ", [](const LipReport& r) { return r.alpha_inf_fdrl; });
    row("endurance    ", [](const LipReport& r) { return r.endurance_fdr; });
    row("endurance_L  ", [](const LipReport& r) { return r.endurance_fdrl; });
    return out.str();
}

// ---------------------------------------------------------------- commands

struct CommonFlags {
    double alpha = 0.05;
    double lambda = 0.1;
    std::string neighborhood = "auto";
    std::string border = "truncate";
    std::string filter = "median";
    std::string method = "1";
    std::uint64_t seed = 1;
    int reps = 1;
    std::string out_dir = "out";
};

int cmd_simulate(const std::string& scenario_name, const std::string& c_text,
                 const std::string& dims_text, std::uint64_t seed, const std::string& out_dir) {
    Scenario scenario = build_scenario(scenario_name, c_text, dims_text);
    auto [y, truth] = generate(scenario, seed);
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_lattice(dir / "Y.lat", y);
    write_mask(dir / "truth.mask", truth);
    write_manifest(dir / "manifest.json", "simulate",
                   json{{"scenario", scenario_name},
                        {"C", c_text},
                        {"dims", scenario.dims},
                        {"seed", seed}});
    return 0;
}

int cmd_pvalues(const std::string& in, const std::string& out, const ModelFlags& model) {
    Lattice y = read_lattice(in);
    Lattice p = pvalues_one_sided(y, model.build());
    write_lattice(out, p);
    write_manifest(fs::path(out + ".manifest.json"), "pvalues",
                   json{{"in", in},
                        {"out", out},
                        {"model", model.family},
                        {"C", model.c_text},
                        {"sigma", model.sigma},
                        {"df0", model.df0},
                        {"df1", model.df1}});
    return 0;
}

int cmd_aggregate(const std::string& in, const std::string& out, const CommonFlags& flags) {
    Lattice p = read_lattice(in);
    auto spec = parse_neighborhood(flags.neighborhood, flags.border, p.dims);
    auto nbrs = build_neighborhoods(p.dims, spec);
    Lattice pstar = aggregate(p, nbrs, parse_filter(flags.filter));
    write_lattice(out, pstar);
    write_manifest(fs::path(out + ".manifest.json"), "aggregate",
                   json{{"in", in},
                        {"out", out},
                        {"neighborhood", flags.neighborhood},
                        {"border", flags.border},
                        {"filter", flags.filter}});
    return 0;
}

int cmd_fdr(const std::string& in, const CommonFlags& flags) {
    Lattice p = read_lattice(in);
    FdrCurve curve = fdr_curve(p, flags.lambda, flags.alpha);
    ensure_dir(flags.out_dir);
    const fs::path dir(flags.out_dir);
    write_procedure_outputs(dir, curve, p);
    write_manifest(dir / "manifest.json", "fdr",
                   json{{"in", in}, {"alpha", flags.alpha}, {"lambda", flags.lambda}});
    return 0;
}

int cmd_fdrl(const std::string& in, const std::string& p_path, const CommonFlags& flags,
             std::optional<double> n0_lambda, std::size_t mc_draws) {
    Lattice pstar = read_lattice(in);
    const Method method = parse_method(flags.method);
    auto spec = parse_neighborhood(flags.neighborhood, flags.border, pstar.dims);
    auto nbrs = build_neighborhoods(pstar.dims, spec);

    NullCdf gstar = NullCdf::uniform();
    switch (method) {
        case Method::method1:
            gstar = method1_ghat(pstar);
            break;
        case Method::method1_normal:
            gstar = NullCdf::normal_approx(nbrs.nominal_k);
            break;
        case Method::method2: {
            if (p_path.empty())
                throw invalid_spec_error("--method 2 requires --p with the original p-values");
            Lattice p = read_lattice(p_path);
            Method2Options opts;
            opts.reps = flags.reps;
            opts.n0_lambda = n0_lambda;
            gstar = method2_ghat(p, pstar, nbrs, flags.lambda, flags.seed, opts);
            break;
        }
        case Method::beta:
            gstar = nbrs.nominal_k % 2 == 1
                        ? NullCdf::beta_analytic(nbrs.nominal_k)
                        : mc_median_null_cdf(nbrs.nominal_k, mc_draws, flags.seed);
            break;
    }

    FdrCurve curve = fdrl_curve(pstar, flags.lambda, flags.alpha, gstar);
    ensure_dir(flags.out_dir);
    const fs::path dir(flags.out_dir);
    write_procedure_outputs(dir, curve, pstar);
    atomic_write_text(dir / "gstar.json", null_cdf_to_json(gstar).dump() + "\n");
    write_manifest(dir / "manifest.json", "fdrl",
                   json{{"in", in},
                        {"p", p_path},
                        {"alpha", flags.alpha},
                        {"lambda", flags.lambda},
                        {"n0_lambda", n0_lambda ? json(*n0_lambda) : json(nullptr)},
                        {"neighborhood", flags.neighborhood},
                        {"border", flags.border},
                        {"method", flags.method},
                        {"seed", flags.seed},
                        {"reps", flags.reps},
                        {"mc_draws", mc_draws},
                        {"method1_fallback", gstar.method1_fallback}});
    return 0;
}

int cmd_alpha_inf(const ModelFlags& model, std::vector<std::string> c_values, double lambda,
                  double pi0, int k, bool numeric, int grid_points, bool table,
                  const std::string& out_dir) {
    if (c_values.empty()) c_values.push_back(model.c_text);
    std::vector<LipReport> reports;
    json out = json::array();
    for (const auto& c_text : c_values) {
        ModelFlags m = model;
        m.c_text = c_text;
        LipReport rep;
        if (!numeric && m.family == "exp" && k == 5) {
            rep = alpha_inf_exponential_report(parse_signal_height(c_text), lambda, pi0);
        } else {
            GridSpec grid;
            grid.points = grid_points;
            rep = alpha_inf_numeric(m.build(), lambda, pi0, k, grid);
        }
        reports.push_back(rep);
        json entry = lip_report_to_json(rep);
        entry["C"] = c_text;
        out.push_back(entry);
    }
    const std::string text = alpha_inf_table(c_values, reports);
    if (table)
        std::cout << text;
    else
        std::cout << (out.size() == 1 ? out[0].dump(2) : out.dump(2)) << "\n";
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        const fs::path dir(out_dir);
        atomic_write_text(dir / "alpha_inf.json", out.dump(2) + "\n");
        atomic_write_text(dir / "table.txt", text);
        write_manifest(dir / "manifest.json", "alpha-inf",
                       json{{"model", model.family},
                            {"C", c_values},
                            {"lambda", lambda},
                            {"pi0", pi0},
                            {"k", k},
                            {"numeric", numeric},
                            {"grid_points", grid_points}});
    }
    return 0;
}

int cmd_score(const std::string& mask_path, const std::string& truth_path,
              const std::string& out) {
    RejectionMask mask = read_mask(mask_path);
    TruthMask truth = read_mask(truth_path);
    const json j = metrics_to_json(metrics(mask, truth));
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) atomic_write_text(out, j.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& scenario_name, const std::string& c_text,
              const std::string& dims_text, const CommonFlags& flags,
              std::vector<double> alphas, std::optional<double> n0_lambda, int jobs,
              bool emit_masks) {
    SweepConfig cfg;
    cfg.scenario = build_scenario(scenario_name, c_text, dims_text);
    cfg.seed = flags.seed;
    cfg.replicates = flags.reps;
    if (!alphas.empty()) cfg.alphas = std::move(alphas);
    cfg.lambda = flags.lambda;
    cfg.n0_lambda = n0_lambda;
    cfg.neighborhood = parse_neighborhood(flags.neighborhood, flags.border, cfg.scenario.dims);
    cfg.filter = parse_filter(flags.filter);
    cfg.method = parse_method(flags.method);
    cfg.jobs = jobs;
    cfg.keep_masks = emit_masks;

    auto rows = run_sweep(cfg);
    ensure_dir(flags.out_dir);
    const fs::path dir(flags.out_dir);
    atomic_write_text(dir / "metrics.csv", sweep_csv(cfg, rows));
    if (emit_masks) {
        ensure_dir(dir / "masks");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
                std::ostringstream base;
                base << "rep" << r << "_alpha" << cfg.alphas[a];
                write_mask(dir / "masks" / (base.str() + "_fdr.bin"), rows[r].fdr[a].mask);
                write_mask(dir / "masks" / (base.str() + "_fdrl.bin"), rows[r].fdrl[a].mask);
            }
        }
    }
    write_manifest(dir / "manifest.json", "sweep",
                   json{{"scenario", scenario_name},
                        {"C", c_text},
                        {"dims", cfg.scenario.dims},
                        {"seed", flags.seed},
                        {"reps", flags.reps},
                        {"alphas", cfg.alphas},
                        {"lambda", flags.lambda},
                        {"n0_lambda", n0_lambda ? json(*n0_lambda) : json(nullptr)},
                        {"neighborhood", flags.neighborhood},
                        {"border", flags.border},
                        {"filter", flags.filter},
                        {"method", flags.method},
                        {"jobs", jobs},
                        {"emit_masks", emit_masks}});
    return 0;
}

int emit_error(const std::string& kind, const std::string& message, int code) {
    json err{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FDR_L multiple testing for spatially structured p-values"};
    app.require_subcommand(1);

    CommonFlags flags;
    ModelFlags model;
    std::string scenario_name = "exp", dims_text, in_path, p_path, out_path, mask_path,
                truth_path, score_out;
    std::vector<std::string> c_values;
    std::vector<double> alphas;
    double pi0 = 0.84;
    int k = 5, grid_points = 10000, jobs = 1;
    std::size_t mc_draws = 200000;
    bool numeric = false, table = false, emit_masks = false;
    std::string alpha_inf_out_dir;
    std::optional<double> n0_lambda;
    double n0_lambda_raw = -1.0;

    auto add_model_flags = [&](CLI::App* cmd, bool with_c) {
        cmd->add_option("--model", model.family, "model family: exp|normal|t");
        if (with_c)
            cmd->add_option("--C", model.c_text,
                            "signal height, a number or logN (e.g. log8)");
        cmd->add_option("--sigma", model.sigma, "alternative std dev (normal model)");
        cmd->add_option("--df0", model.df0, "null degrees of freedom (t model)");
        cmd->add_option("--df1", model.df1, "alternative degrees of freedom (t model)");
    };
    auto add_neighborhood_flags = [&](CLI::App* cmd) {
        cmd->add_option("--neighborhood", flags.neighborhood,
                        "cross5|cross7|knn:K|radius:R (default by dimensionality)");
        cmd->add_option("--border", flags.border, "truncate|mirror");
    };

    auto* simulate = app.add_subcommand("simulate", "generate a scenario: Y + truth mask");
    simulate->add_option("--scenario", scenario_name, "example1|example2|example3|exp");
    simulate->add_option("--C", model.c_text, "exponential signal height");
    simulate->add_option("--dims", dims_text, "override dims, e.g. 50x50 or 8x8x8");
    simulate->add_option("--seed", flags.seed, "rng seed");
    simulate->add_option("--out-dir", flags.out_dir, "output directory");

    auto* pvalues = app.add_subcommand("pvalues", "transform observations to p-values");
    pvalues->add_option("--in", in_path, "input Y lattice")->required();
    pvalues->add_option("--out", out_path, "output p lattice")->required();
    add_model_flags(pvalues, true);

    auto* agg = app.add_subcommand("aggregate", "locally aggregate p-values");
    agg->add_option("--in", in_path, "input p lattice")->required();
    agg->add_option("--out", out_path, "output p* lattice")->required();
    add_neighborhood_flags(agg);
    agg->add_option("--filter", flags.filter, "median|mean");

    auto* fdr_cmd = app.add_subcommand("fdr", "conventional FDR procedure");
    fdr_cmd->add_option("--in", in_path, "input p lattice")->required();
    fdr_cmd->add_option("--alpha", flags.alpha, "control level");
    fdr_cmd->add_option("--lambda", flags.lambda, "tuning constant");
    fdr_cmd->add_option("--out-dir", flags.out_dir, "output directory");

    auto* fdrl_cmd = app.add_subcommand("fdrl", "FDR_L procedure on aggregated p*-values");
    fdrl_cmd->add_option("--in", in_path, "input p* lattice")->required();
    fdrl_cmd->add_option("--p", p_path, "original p lattice (required for --method 2)");
    fdrl_cmd->add_option("--alpha", flags.alpha, "control level");
    fdrl_cmd->add_option("--lambda", flags.lambda, "tuning constant");
    fdrl_cmd->add_option("--n0-lambda", n0_lambda_raw,
                         "lambda for the n0 step of method 2 (defaults to --lambda)");
    add_neighborhood_flags(fdrl_cmd);
    fdrl_cmd->add_option("--method", flags.method, "1|1n|2|beta");
    fdrl_cmd->add_option("--seed", flags.seed, "seed for method 2 resampling");
    fdrl_cmd->add_option("--reps", flags.reps, "method 2 resampling repetitions");
    fdrl_cmd->add_option("--mc-draws", mc_draws, "draws for the even-k Monte Carlo null");
    fdrl_cmd->add_option("--out-dir", flags.out_dir, "output directory");

    auto* ainf = app.add_subcommand("alpha-inf", "identification limit analysis");
    add_model_flags(ainf, false);
    ainf->add_option("--C", c_values, "signal heights (repeatable)")
        ->take_all()
        ->force_callback();
    ainf->add_option("--lambda", flags.lambda, "tuning constant");
    ainf->add_option("--pi0", pi0, "limiting null proportion");
    ainf->add_option("--k", k, "neighborhood size (odd)");
    ainf->add_flag("--numeric", numeric, "force the numeric grid path");
    ainf->add_option("--grid-points", grid_points, "numeric grid resolution");
    ainf->add_flag("--table", table, "print a text table instead of JSON");
    ainf->add_option("--out-dir", alpha_inf_out_dir, "also write artifacts here");

    auto* score = app.add_subcommand("score", "confusion metrics of a mask against truth");
    score->add_option("--mask", mask_path, "rejection mask file")->required();
    score->add_option("--truth", truth_path, "truth mask file")->required();
    score->add_option("--out", score_out, "also write the JSON report here");

    auto* sweep = app.add_subcommand("sweep", "replicates x alpha grid -> metrics CSV");
    sweep->add_option("--scenario", scenario_name, "example1|example2|example3|exp");
    sweep->add_option("--C", model.c_text, "exponential signal height");
    sweep->add_option("--dims", dims_text, "override dims");
    sweep->add_option("--reps", flags.reps, "number of replicates");
    sweep->add_option("--alpha", alphas, "control levels (repeatable)");
    sweep->add_option("--lambda", flags.lambda, "tuning constant");
    sweep->add_option("--n0-lambda", n0_lambda_raw, "method 2 n0-step lambda");
    add_neighborhood_flags(sweep);
    sweep->add_option("--filter", flags.filter, "median|mean");
    sweep->add_option("--method", flags.method, "1|1n|2|beta");
    sweep->add_option("--seed", flags.seed, "base seed; replicate r uses seed+r");
    sweep->add_option("--jobs", jobs, "parallel replicate workers");
    sweep->add_flag("--emit-masks", emit_masks, "write per-replicate masks");
    sweep->add_option("--out-dir", flags.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::stringstream ss;
        ss << e.what();
        return emit_error("bad-config", ss.str(), 2);
    }

    if (n0_lambda_raw >= 0.0) n0_lambda = n0_lambda_raw;

    try {
        if (simulate->parsed())
            return cmd_simulate(scenario_name, model.c_text, dims_text, flags.seed,
                                flags.out_dir);
        if (pvalues->parsed()) return cmd_pvalues(in_path, out_path, model);
        if (agg->parsed()) return cmd_aggregate(in_path, out_path, flags);
        if (fdr_cmd->parsed()) return cmd_fdr(in_path, flags);
        if (fdrl_cmd->parsed()) return cmd_fdrl(in_path, p_path, flags, n0_lambda, mc_draws);
        if (ainf->parsed())
            return cmd_alpha_inf(model, c_values, flags.lambda, pi0, k, numeric, grid_points,
                                 table, alpha_inf_out_dir);
        if (score->parsed()) return cmd_score(mask_path, truth_path, score_out);
        if (sweep->parsed())
            return cmd_sweep(scenario_name, model.c_text, dims_text, flags, alphas, n0_lambda,
                             jobs, emit_masks);
    } catch (const dims_mismatch_error& e) {
        return emit_error("dims-mismatch", e.what(), 3);
    } catch (const degenerate_null_error& e) {
        return emit_error("degenerate-null", e.what(), 4);
    } catch (const invalid_spec_error& e) {
        return emit_error("bad-config", e.what(), 2);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what(), 1);
    }
    return emit_error("bad-config", "no subcommand", 2);
}
