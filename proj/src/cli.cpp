#include "icalab/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace icalab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    json cfg;
    try {
        cfg = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
    return cfg;
}

void reject_unknown_keys(const json& cfg, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : cfg.items()) {
        (void)value;
        if (!allowed.contains(key))
            throw ConfigError("config: unknown key '" + key + "'");
    }
}

void check_schema_version(const json& cfg) {
    if (cfg.contains("schema_version") && cfg["schema_version"].get<int>() != 1)
        throw ConfigError("config: unsupported schema_version (expected 1)");
}

void prepare_out_dir(const CliCommon& opts) {
    const fs::path dir(opts.out_dir);
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir))
            throw ConfigError("output path exists and is not a directory: " + opts.out_dir);
        if (!fs::is_empty(dir) && !opts.overwrite)
            throw ConfigError("output directory '" + opts.out_dir +
                              "' is not empty; pass --overwrite to reuse it");
    } else {
        fs::create_directories(dir);
    }
}

void write_manifest(const CliCommon& opts, const std::string& command,
                    const std::string& preset, const std::vector<std::uint64_t>& seeds,
                    const std::vector<std::string>& files) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = opts.config_path;
    manifest["preset"] = preset;
    manifest["out_dir"] = opts.out_dir;
    manifest["seeds"] = seeds;
    manifest["tool_version"] = kToolVersion;
    json hashes = json::object();
    for (const auto& name : files)
        hashes[name] = file_hash_hex((fs::path(opts.out_dir) / name).string());
    manifest["files"] = hashes;
    // The manifest is written last so it always describes completed artifacts.
    std::ofstream f(fs::path(opts.out_dir) / "manifest.json");
    f << manifest.dump(2) << "\n";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_records_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream f(path);
    f << "experiment,preset,d,k,delta,n,T,seed,eps_maxform,eps_permform,final_loss,failed\n";
    for (const auto& r : records) {
        f << r.experiment << ',' << r.preset << ',' << r.d << ',' << r.k << ','
          << fmt(r.delta) << ',' << r.n << ',' << r.t_budget << ',' << r.seed << ','
          << fmt(r.eps_maxform) << ',' << fmt(r.eps_permform) << ',' << fmt(r.final_loss)
          << ',' << (r.failed ? 1 : 0) << "\n";
    }
}

// Wallclock lives in its own file: run timings are inherently non-reproducible
// and would break the byte-identical rerun guarantee of the records CSV.
void write_timings_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream f(path);
    f << "experiment,n,T,seed,wallclock_sec\n";
    for (const auto& r : records)
        f << r.experiment << ',' << r.n << ',' << r.t_budget << ',' << r.seed << ','
          << fmt(r.wallclock_sec) << "\n";
}

void write_plot_data(const std::string& path, const std::vector<double>& xs,
                     const std::vector<double>& ys, const std::vector<double>& yerr) {
    std::ofstream f(path);
    f << "x,y,y_err\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        f << fmt(xs[i]) << ',' << fmt(ys[i]) << ',' << fmt(i < yerr.size() ? yerr[i] : 0.0)
          << "\n";
}

HarnessConfig harness_from(const json& cfg, const CliCommon& opts) {
    HarnessConfig hc;
    if (cfg.contains("preset")) hc.preset = cfg["preset"].get<std::string>();
    if (opts.preset) hc.preset = *opts.preset;
    preset(hc.preset);  // validates the name early
    if (cfg.contains("d")) hc.d = cfg["d"].get<std::size_t>();
    if (cfg.contains("delta")) {
        hc.delta = cfg["delta"].get<double>();
        if (!(hc.delta > 0.0)) throw ConfigError("config: field 'delta' must be positive");
    }
    if (cfg.contains("seeds")) hc.n_seeds = cfg["seeds"].get<std::size_t>();
    if (cfg.contains("master_seed")) hc.master_seed = cfg["master_seed"].get<std::uint64_t>();
    if (opts.seed) hc.master_seed = *opts.seed;
    if (cfg.contains("jobs")) hc.jobs = cfg["jobs"].get<std::size_t>();
    if (opts.jobs) hc.jobs = *opts.jobs;
    hc.desk_scale = opts.desk_scale || (cfg.contains("desk_scale") && cfg["desk_scale"].get<bool>());
    if (cfg.contains("eval_n")) hc.eval_n = cfg["eval_n"].get<std::size_t>();
    if (cfg.contains("pilot_n")) hc.pilot_n = cfg["pilot_n"].get<std::size_t>();
    if (cfg.contains("perturb_scale")) hc.perturb_scale = cfg["perturb_scale"].get<double>();
    return hc;
}

const std::set<std::string> kCommonExperimentKeys = {
    "schema_version", "preset", "d", "delta", "seeds", "master_seed", "jobs",
    "desk_scale", "eval_n", "pilot_n", "perturb_scale"};

std::vector<double> seed_std_errs(const ScalingRun& run) {
    std::vector<double> out;
    for (const auto& row : run.eps) {
        const double sd = std::sqrt(variance_of(row));
        out.push_back(row.size() > 1 ? sd / std::sqrt(static_cast<double>(row.size())) : 0.0);
    }
    return out;
}

}  // namespace

std::string file_hash_hex(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("file_hash_hex: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[8192];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        const std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!f) break;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

int cmd_generate(const CliCommon& opts) {
    const json cfg = load_config(opts.config_path);
    check_schema_version(cfg);
    reject_unknown_keys(cfg, {"schema_version", "d", "k", "n", "delta", "seed", "model",
                              "mixing"});
    for (const char* req : {"d", "k", "n"})
        if (!cfg.contains(req))
            throw ConfigError(std::string("config: missing required field '") + req + "'");
    const std::size_t d = cfg["d"].get<std::size_t>();
    const std::size_t k = cfg["k"].get<std::size_t>();
    const std::size_t n = cfg["n"].get<std::size_t>();
    const double delta = cfg.contains("delta") ? cfg["delta"].get<double>() : 1.0;
    if (!(delta > 0.0)) throw ConfigError("config: field 'delta' must be positive");
    std::uint64_t seed = cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 1;
    if (opts.seed) seed = *opts.seed;
    const std::string model_kind =
        cfg.contains("model") ? cfg["model"].get<std::string>() : "modulated";
    const std::string mixing_kind =
        cfg.contains("mixing") ? cfg["mixing"].get<std::string>() : "orthogonal";

    prepare_out_dir(opts);
    const Rng root(seed);
    SourceModel model;
    if (model_kind == "modulated")
        model = modulated_source_model(d, k, delta, root.split("source-model"));
    else if (model_kind == "grid")
        model = grid_source_model(d, k, delta);
    else
        throw ConfigError("config: field 'model' must be 'modulated' or 'grid'");
    MixingNetwork mix;
    if (mixing_kind == "orthogonal")
        mix = make_mixing_orthogonal(d, root.split("mixing"));
    else if (mixing_kind == "gaussian")
        mix = make_mixing(d, root.split("mixing"));
    else
        throw ConfigError("config: field 'mixing' must be 'orthogonal' or 'gaussian'");
    const Dataset ds = generate(model, mix, n, root.split("data"));

    save_dataset_binary(ds, (fs::path(opts.out_dir) / "dataset.bin").string());
    save_dataset_csv(ds, (fs::path(opts.out_dir) / "dataset.csv").string());
    write_manifest(opts, "generate", "", {seed}, {"dataset.bin", "dataset.csv"});
    std::cout << "generated n=" << n << " d=" << d << " k=" << k
              << " delta=" << diversity(model) << " -> " << opts.out_dir << "\n";
    return 0;
}

namespace {

int experiment_precision(const json& cfg, const CliCommon& opts) {
    reject_unknown_keys(cfg, [] {
        auto s = kCommonExperimentKeys;
        s.insert("n_grid");
        return s;
    }());
    HarnessConfig hc = harness_from(cfg, opts);
    std::vector<std::size_t> n_grid = {500, 1000, 2000, 5000, 10000};
    if (cfg.contains("n_grid")) n_grid = cfg["n_grid"].get<std::vector<std::size_t>>();
    prepare_out_dir(opts);
    auto [run, fit] = exp_precision(hc, n_grid);

    write_records_csv((fs::path(opts.out_dir) / "records.csv").string(), run.records);
    write_timings_csv((fs::path(opts.out_dir) / "timings.csv").string(), run.records);
    write_plot_data((fs::path(opts.out_dir) / "plot_precision.csv").string(), run.grid,
                    run.seed_means(), seed_std_errs(run));
    json out;
    out["experiment"] = "precision";
    out["preset"] = hc.preset;
    out["alpha"] = fit.slope;
    out["log_c"] = fit.intercept;
    out["r2"] = fit.r2;
    out["theory_alpha"] = -0.5;
    std::ofstream((fs::path(opts.out_dir) / "fit.json")) << out.dump(2) << "\n";
    write_manifest(opts, "experiment precision", hc.preset, run.seeds,
                   {"records.csv", "timings.csv", "plot_precision.csv", "fit.json"});
    std::cout << "precision: alpha=" << fit.slope << " r2=" << fit.r2 << "\n";
    return 0;
}

int experiment_min_n(const std::string& name, const json& cfg, const CliCommon& opts) {
    reject_unknown_keys(cfg, [&] {
        auto s = kCommonExperimentKeys;
        s.insert({"d_grid", "delta_grid", "target_eps", "n_lo", "n_hi", "tol_n"});
        return s;
    }());
    HarnessConfig hc = harness_from(cfg, opts);
    const double target = cfg.contains("target_eps") ? cfg["target_eps"].get<double>() : 0.10;
    const std::size_t n_lo = cfg.contains("n_lo") ? cfg["n_lo"].get<std::size_t>() : 500;
    const std::size_t n_hi = cfg.contains("n_hi") ? cfg["n_hi"].get<std::size_t>() : 20000;
    const double tol_n = cfg.contains("tol_n") ? cfg["tol_n"].get<double>() : 0.10;

    prepare_out_dir(opts);
    ScalingRun run;
    FitSummary fit;
    if (name == "dimension") {
        std::vector<std::size_t> d_grid = {5, 10, 15, 20};
        if (cfg.contains("d_grid")) d_grid = cfg["d_grid"].get<std::vector<std::size_t>>();
        std::tie(run, fit) = exp_dimension(hc, d_grid, target, n_lo, n_hi, tol_n);
    } else {
        std::vector<double> delta_grid = {0.5, 1.0, 2.0, 4.0};
        if (cfg.contains("delta_grid"))
            delta_grid = cfg["delta_grid"].get<std::vector<double>>();
        std::tie(run, fit) = exp_diversity(hc, delta_grid, target, n_lo, n_hi, tol_n);
    }

    prepare_out_dir(opts);
    write_records_csv((fs::path(opts.out_dir) / "records.csv").string(), run.records);
    write_timings_csv((fs::path(opts.out_dir) / "timings.csv").string(), run.records);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < run.grid.size(); ++i) {
        xs.push_back(name == "dimension" ? run.grid[i] : 1.0 / run.grid[i]);
        ys.push_back(run.eps[i][0]);
    }
    const std::string plot_name = "plot_" + name + ".csv";
    write_plot_data((fs::path(opts.out_dir) / plot_name).string(), xs, ys, {});
    json out;
    out["experiment"] = name;
    out["preset"] = hc.preset;
    out["target_eps"] = target;
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["r2"] = fit.r2;
    out["min_n"] = ys;
    out["unreachable"] = json::array();
    for (std::size_t i = 0; i < run.grid.size(); ++i)
        if (run.eps[i][0] < 0.0) out["unreachable"].push_back(run.grid[i]);
    std::ofstream((fs::path(opts.out_dir) / "fit.json")) << out.dump(2) << "\n";
    write_manifest(opts, "experiment " + name, hc.preset, run.seeds,
                   {"records.csv", "timings.csv", plot_name, "fit.json"});
    std::cout << name << ": slope=" << fit.slope << " r2=" << fit.r2 << "\n";
    return 0;
}

int experiment_sgd(const json& cfg, const CliCommon& opts) {
    reject_unknown_keys(cfg, [] {
        auto s = kCommonExperimentKeys;
        s.insert({"n", "t_grid"});
        return s;
    }());
    HarnessConfig hc = harness_from(cfg, opts);
    const std::size_t n = cfg.contains("n") ? cfg["n"].get<std::size_t>() : 5000;
    std::vector<std::size_t> t_grid = {1000, 5000, 10000, 20000};
    if (cfg.contains("t_grid")) t_grid = cfg["t_grid"].get<std::vector<std::size_t>>();
    prepare_out_dir(opts);
    const SgdResult res = exp_sgd(hc, n, t_grid);

    write_records_csv((fs::path(opts.out_dir) / "records.csv").string(), res.run.records);
    write_timings_csv((fs::path(opts.out_dir) / "timings.csv").string(), res.run.records);
    write_plot_data((fs::path(opts.out_dir) / "plot_sgd.csv").string(), res.run.grid,
                    res.run.seed_means(), seed_std_errs(res.run));
    json out;
    out["experiment"] = "sgd";
    out["preset"] = hc.preset;
    out["n"] = n;
    out["cv_stable"] = res.cv;
    std::ofstream((fs::path(opts.out_dir) / "fit.json")) << out.dump(2) << "\n";
    write_manifest(opts, "experiment sgd", hc.preset, res.run.seeds,
                   {"records.csv", "timings.csv", "plot_sgd.csv", "fit.json"});
    std::cout << "sgd: cv=" << res.cv << "\n";
    return 0;
}

int experiment_diagnostics(const json& cfg, const CliCommon& opts) {
    reject_unknown_keys(cfg, [] {
        auto s = kCommonExperimentKeys;
        s.insert("n_grid");
        return s;
    }());
    HarnessConfig hc = harness_from(cfg, opts);
    std::vector<std::size_t> n_grid = {2000, 10000};
    if (cfg.contains("n_grid")) n_grid = cfg["n_grid"].get<std::vector<std::size_t>>();
    prepare_out_dir(opts);
    const std::vector<TrendReport> trends = exp_diagnostics(hc, n_grid);

    json out;
    out["experiment"] = "diagnostics";
    out["n_min"] = n_grid.front();
    out["n_max"] = n_grid.back();
    for (const auto& t : trends) {
        out[t.name] = {{"value_at_nmin", t.value_at_nmin},
                       {"value_at_nmax", t.value_at_nmax},
                       {"decreasing", t.decreasing}};
        std::cout << t.name << ": " << t.value_at_nmin << " -> " << t.value_at_nmax
                  << (t.decreasing ? " (decreasing)" : " (not decreasing)") << "\n";
    }
    std::ofstream((fs::path(opts.out_dir) / "diagnostics.json")) << out.dump(2) << "\n";
    write_manifest(opts, "experiment diagnostics", hc.preset, {},
                   {"diagnostics.json"});
    return 0;
}

int experiment_calibrate(const json& cfg, const CliCommon& opts) {
    reject_unknown_keys(cfg, {"schema_version", "d", "delta", "confidence_delta", "grid",
                              "bootstrap_b", "master_seed"});
    if (!cfg.contains("grid"))
        throw ConfigError("config: calibrate requires a 'grid' of [n, eps] pairs");
    const std::size_t d = cfg.contains("d") ? cfg["d"].get<std::size_t>() : 10;
    const double delta = cfg.contains("delta") ? cfg["delta"].get<double>() : 1.0;
    const double conf =
        cfg.contains("confidence_delta") ? cfg["confidence_delta"].get<double>() : 0.05;
    const std::size_t b =
        cfg.contains("bootstrap_b") ? cfg["bootstrap_b"].get<std::size_t>() : 1000;
    std::uint64_t seed =
        cfg.contains("master_seed") ? cfg["master_seed"].get<std::uint64_t>() : 12345;
    if (opts.seed) seed = *opts.seed;
    std::vector<std::pair<std::size_t, double>> grid;
    for (const auto& row : cfg["grid"])
        grid.emplace_back(row.at(0).get<std::size_t>(), row.at(1).get<double>());
    const CalibrationResult res = calibrate_constant(d, delta, conf, grid, b, seed);

    prepare_out_dir(opts);
    json out;
    out["experiment"] = "calibrate";
    out["c_hat"] = res.c_hat;
    out["c_practical"] = res.c_practical;
    out["ci"] = {res.ci_lo, res.ci_hi};
    out["bootstrap_b"] = res.b;
    out["d"] = res.d;
    out["delta"] = res.delta;
    out["confidence_delta"] = res.delta_confidence;
    std::ofstream((fs::path(opts.out_dir) / "calibration.json")) << out.dump(2) << "\n";
    write_manifest(opts, "experiment calibrate", "", {seed}, {"calibration.json"});
    std::cout << "calibrate: c_hat=" << res.c_hat << " ci=[" << res.ci_lo << ", "
              << res.ci_hi << "]\n";
    return 0;
}

}  // namespace

int cmd_experiment(const std::string& name, const CliCommon& opts) {
    const json cfg = load_config(opts.config_path);
    check_schema_version(cfg);
    if (name == "precision") return experiment_precision(cfg, opts);
    if (name == "dimension" || name == "diversity") return experiment_min_n(name, cfg, opts);
    if (name == "sgd") return experiment_sgd(cfg, opts);
    if (name == "diagnostics") return experiment_diagnostics(cfg, opts);
    if (name == "calibrate") return experiment_calibrate(cfg, opts);
    throw ConfigError(
        "unknown experiment '" + name +
        "'; valid names: precision, dimension, diversity, sgd, diagnostics, calibrate");
}

int cmd_verify(bool inject_gradient_fault) {
    int failures = 0;
    auto report = [&failures](const std::string& name, bool ok, double measured,
                              double tolerance) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << " (measured " << measured
                  << ", tolerance " << tolerance << ")\n";
        if (!ok) ++failures;
    };

    // Gradient check: full GCL-through-encoder loss vs central differences.
    {
        Rng rng(42);
        Rng init = rng.split("enc");
        Encoder enc = Encoder::init({4, 16, 16, 4}, InitScheme::He, init);
        GclHead head = GclHead::init(6, 4, init);
        for (double& v : head.log_var.data()) v = 0.3 * init.normal();
        Matrix x(8, 4);
        std::vector<std::size_t> u(8);
        for (std::size_t i = 0; i < 8; ++i) {
            u[i] = i % 6;
            for (std::size_t j = 0; j < 4; ++j) x(i, j) = init.normal();
        }
        ForwardCache cache;
        Rng drop = rng.split("drop");
        const Matrix y = enc.forward_train(x, drop, cache);
        const LossBatch lb = gcl_loss(head, y, u);
        ParamGrad g = enc.backward(cache, lb.dy);
        if (inject_gradient_fault)
            for (auto& dw : g.dw)
                for (std::size_t i = 0; i < dw.size(); ++i) dw.data()[i] *= 1.01;

        double worst = 0.0;
        const double h = 1e-5;
        Rng pick = rng.split("pick");
        for (int c = 0; c < 25; ++c) {
            const std::size_t l = static_cast<std::size_t>(pick.below(enc.weights().size()));
            const std::size_t i = static_cast<std::size_t>(pick.below(enc.weights()[l].size()));
            double& w = enc.weights()[l].data()[i];
            const double keep = w;
            w = keep + h;
            const double lp = gcl_loss(head, enc.forward(x), u).mean;
            w = keep - h;
            const double lm = gcl_loss(head, enc.forward(x), u).mean;
            w = keep;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = g.dw[l].data()[i];
            const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
            worst = std::max(worst, rel);
        }
        report("gradient-check", worst < 1e-5, worst, 1e-5);
    }

    // Closed-form KL vs Monte Carlo on a random 3-category model.
    {
        Rng rng(7);
        const SourceModel m = modulated_source_model(4, 3, 1.5, rng);
        const double closed = diversity(m);
        // Identify the minimizing pair, then Monte-Carlo its KL.
        std::size_t bu = 0, bv = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m.k; ++a)
            for (std::size_t b = 0; b < m.k; ++b) {
                if (a == b) continue;
                const double kl =
                    gaussian_kl_diag(m.means[a], m.stds[a], m.means[b], m.stds[b]);
                if (kl < best) {
                    best = kl;
                    bu = a;
                    bv = b;
                }
            }
        Rng mc = rng.split("mc");
        double acc = 0.0;
        const std::size_t nmc = 1000000;
        for (std::size_t i = 0; i < nmc; ++i) {
            double lp = 0.0, lq = 0.0;
            for (std::size_t j = 0; j < m.d; ++j) {
                const double z = m.means[bu][j] + m.stds[bu][j] * mc.normal();
                const double a = (z - m.means[bu][j]) / m.stds[bu][j];
                const double b = (z - m.means[bv][j]) / m.stds[bv][j];
                lp += -0.5 * a * a - std::log(m.stds[bu][j]);
                lq += -0.5 * b * b - std::log(m.stds[bv][j]);
            }
            acc += lp - lq;
        }
        const double mc_est = acc / static_cast<double>(nmc);
        const double rel = std::abs(mc_est - closed) / closed;
        report("kl-monte-carlo", rel < 0.02, rel, 0.02);
    }

    // Permutation-form MCC vs exhaustive enumeration, d = 4.
    {
        Rng rng(11);
        Matrix y(200, 4), z(200, 4);
        for (double& v : y.data()) v = rng.normal();
        for (std::size_t i = 0; i < 200; ++i)
            for (std::size_t j = 0; j < 4; ++j) z(i, j) = 0.5 * y(i, j) + rng.normal();
        const double fast = mcc(y, z, MccVariant::PermutationForm).mcc;
        const Matrix corr = abs_correlation(y, z);
        std::vector<std::size_t> perm = {0, 1, 2, 3};
        double brute = 0.0;
        do {
            double s = 0.0;
            for (std::size_t i = 0; i < 4; ++i) s += corr(i, perm[i]);
            brute = std::max(brute, s / 4.0);
        } while (std::next_permutation(perm.begin(), perm.end()));
        const double diff = std::abs(fast - brute);
        report("mcc-brute-force", diff < 1e-12, diff, 1e-12);
    }

    // Fano identity: KL = d mu^2 / 2 = delta exactly.
    {
        const auto family = fano_family(4, 2.0);
        double worst = 0.0;
        for (const auto& inst : family) {
            worst = std::max(worst, std::abs(inst.closed_form_kl() - 2.0));
            const SourceModel m = inst.as_source_model();
            worst = std::max(worst, std::abs(gaussian_kl_diag(m.means[1], m.stds[1],
                                                              m.means[0], m.stds[0]) -
                                             2.0));
        }
        report("fano-identity", worst == 0.0, worst, 0.0);
    }

    return failures == 0 ? 0 : 1;
}

int cmd_plan(std::size_t d, double delta, double target_eps) {
    const std::size_t n = plan_sample_size(d, delta, target_eps);
    std::cout << "planned sample size: n = " << n << " (d=" << d << ", delta=" << delta
              << ", target eps=" << target_eps << ")\n";
    return 0;
}

}  // namespace icalab
