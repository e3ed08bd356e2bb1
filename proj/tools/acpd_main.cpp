// Command-line front end: synthetic case generation, single registrations,
// multi-seed benchmarks, and the degree-continuation ablation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acpd/cpd_baseline.hpp"
#include "acpd/engine.hpp"
#include "acpd/normalize.hpp"
#include "acpd/point_io.hpp"
#include "acpd/synth.hpp"
#include "acpd/threads.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace acpd;

namespace {

// A run counts as failed when coordinates go non-finite, the internal residual
// blows past 10x its initial value, or the engine reports a degenerate fit.
constexpr double kDivergenceFactor = 10.0;

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

struct ModelSpec {
    std::string kind;  // "builtin" | "file"
    std::string name;  // builtin shape name
    Index count = 500;
    std::uint64_t seed = 42;
    std::string path;

    static ModelSpec parse(const std::string& text) {
        ModelSpec spec;
        if (text.rfind("builtin:", 0) == 0) {
            spec.kind = "builtin";
            std::string rest = text.substr(8);
            const auto first = rest.find(':');
            spec.name = rest.substr(0, first);
            if (first != std::string::npos) {
                rest = rest.substr(first + 1);
                const auto second = rest.find(':');
                spec.count = std::stoll(rest.substr(0, second));
                if (second != std::string::npos) {
                    spec.seed = std::stoull(rest.substr(second + 1));
                }
            }
        } else {
            spec.kind = "file";
            spec.path = text;
        }
        return spec;
    }

    PointSet load() const {
        if (kind == "builtin") return sample_shape(name, count, seed);
        return read_point_file(path);
    }

    json to_json() const {
        if (kind == "builtin") {
            return {{"kind", "builtin"}, {"name", name}, {"count", count}, {"seed", seed}};
        }
        return {{"kind", "file"}, {"path", path}};
    }

    static ModelSpec from_json(const json& j) {
        ModelSpec spec;
        spec.kind = j.at("kind").get<std::string>();
        if (spec.kind == "builtin") {
            spec.name = j.at("name").get<std::string>();
            spec.count = j.at("count").get<Index>();
            spec.seed = j.at("seed").get<std::uint64_t>();
        } else {
            spec.path = j.at("path").get<std::string>();
        }
        return spec;
    }

    std::string label() const {
        if (kind == "builtin") {
            return name + ":" + std::to_string(count) + ":" + std::to_string(seed);
        }
        return fs::path(path).filename().string();
    }
};

struct CaseSpec {
    ModelSpec model;
    std::string generator;  // analytic2d | analytic3d | bumpblend3d
    SynthParams params;
    std::string method = "analytic-cpd";  // or "cpd"
};

struct CaseData {
    PointSet fixed;   // deformed model (registration target)
    PointSet moving;  // original model
};

// The moving set is the original model; the fixed set is its deformed image.
CaseData generate_case(const CaseSpec& spec) {
    const PointSet model = spec.model.load();
    CaseData data;
    data.moving = model;
    if (spec.generator == "analytic2d" || spec.generator == "analytic3d") {
        const int dim = (spec.generator == "analytic2d") ? 2 : 3;
        detail::require(model.dim() == dim,
                        "generator " + spec.generator + " needs a " + std::to_string(dim) +
                            "D model, got " + std::to_string(model.dim()) + "D");
        const AnalyticMap truth =
            random_analytic_deformation(dim, spec.params.analytic_order, spec.params);
        data.fixed = truth.apply(model);
    } else if (spec.generator == "bumpblend3d") {
        detail::require(model.dim() == 3, "generator bumpblend3d needs a 3D model");
        const BumpBlendField field = make_bump_blend_field(model, spec.params);
        data.fixed = apply_bump_blend(field, model);
    } else {
        throw std::invalid_argument("unknown generator '" + spec.generator + "'");
    }
    return data;
}

json synth_manifest(const CaseSpec& spec, const CaseData& data, const std::string& fixed_name,
                    const std::string& moving_name) {
    auto [nf, nm, t] = normalize_pair(data.fixed, data.moving);
    return {
        {"generator", spec.generator},
        {"seed", spec.params.seed},
        {"params",
         {{"gamma0", spec.params.gamma0},
          {"gammaq", spec.params.gamma_q},
          {"order", spec.params.analytic_order}}},
        {"model", spec.model.to_json()},
        {"files", {{"fixed", fixed_name}, {"moving", moving_name}}},
        {"points", data.moving.size()},
        {"dim", data.moving.dim()},
        {"initial_rmse_normalized", rmse(nf, nm)},
    };
}

CaseSpec case_from_manifest(const json& m) {
    CaseSpec spec;
    spec.generator = m.at("generator").get<std::string>();
    spec.params.seed = m.at("seed").get<std::uint64_t>();
    spec.params.gamma0 = m.at("params").at("gamma0").get<double>();
    spec.params.gamma_q = m.at("params").at("gammaq").get<double>();
    spec.params.analytic_order = m.at("params").at("order").get<int>();
    spec.model = ModelSpec::from_json(m.at("model"));
    return spec;
}

struct MethodConfig {
    EngineConfig engine;
    CpdConfig cpd;
};

struct RunRecord {
    std::string case_id;
    std::uint64_t seed = 0;
    std::string method;
    double initial_rmse = 0.0;  // normalized frame
    double final_rmse = 0.0;    // normalized frame, best state
    double final_rmse_original = 0.0;
    int iterations = 0;
    std::string stop_reason;
    double elapsed_s = 0.0;
    bool failed = false;
    std::string failure;
    json trace = json::array();
    PointSet registered;  // original units
};

json record_to_json(const RunRecord& r) {
    return {
        {"case_id", r.case_id},
        {"seed", r.seed},
        {"method", r.method},
        {"initial_rmse", finite_or_null(r.initial_rmse)},
        {"final_rmse", finite_or_null(r.final_rmse)},
        {"final_rmse_original", finite_or_null(r.final_rmse_original)},
        {"iterations", r.iterations},
        {"stop_reason", r.stop_reason},
        {"elapsed_s", r.elapsed_s},
        {"failed", r.failed},
        {"failure", r.failure},
        {"trace", r.trace},
    };
}

json trace_to_json(const RegistrationTrace& trace) {
    json rows = json::array();
    for (const IterationRecord& it : trace.iterations) {
        json row = {
            {"t", it.t},
            {"q_raw", it.q_raw},
            {"q_used", it.q_used},
            {"sigma2", finite_or_null(it.sigma2)},
            {"e_soft", finite_or_null(it.e_soft)},
            {"elapsed_s", it.elapsed_s},
        };
        if (it.external_rmse.has_value()) row["external_rmse"] = finite_or_null(*it.external_rmse);
        rows.push_back(row);
    }
    return rows;
}

// Registration on a normalized pair; records errors in the normalized frame and
// exports the denormalized best configuration.
RunRecord run_registration(const PointSet& fixed_raw, const PointSet& moving_raw,
                           const std::string& method, const MethodConfig& cfg, bool ordered) {
    auto [fixed, moving, transform] = normalize_pair(fixed_raw, moving_raw);

    RunRecord record;
    record.method = method;
    record.initial_rmse = ordered ? rmse(fixed, moving) : std::nan("");

    const auto start = std::chrono::steady_clock::now();
    RegistrationResult result;
    try {
        if (method == "analytic-cpd") {
            EngineConfig engine = cfg.engine;
            engine.record_external_rmse = ordered;
            result = register_points(fixed, moving, engine);
        } else if (method == "cpd") {
            CpdConfig baseline = cfg.cpd;
            baseline.record_external_rmse = ordered;
            result = cpd_register(fixed, moving, baseline);
        } else {
            throw std::invalid_argument("unknown method '" + method + "'");
        }
    } catch (const FitDegeneracyError& e) {
        record.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        record.failed = true;
        record.failure = std::string("degenerate fit: ") + e.what();
        record.final_rmse = std::nan("");
        record.final_rmse_original = std::nan("");
        record.registered = moving_raw;
        return record;
    }
    record.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const RegistrationTrace& trace = result.trace;
    record.iterations = static_cast<int>(trace.iterations.size());
    record.stop_reason = to_string(trace.stop_reason);
    record.trace = trace_to_json(trace);
    record.registered = denormalize(result.best, transform);
    record.final_rmse = ordered ? rmse(fixed, result.best) : trace.best_score;
    record.final_rmse_original =
        ordered ? rmse(fixed_raw, record.registered) : std::nan("");

    if (!result.best.all_finite() || trace.stop_reason == StopReason::diverged) {
        record.failed = true;
        record.failure = "non-finite coordinates";
    } else {
        for (const IterationRecord& it : trace.iterations) {
            if (!std::isfinite(it.e_soft) ||
                it.e_soft > kDivergenceFactor * trace.e_soft_init) {
                record.failed = true;
                record.failure = "internal residual diverged";
                break;
            }
        }
    }
    return record;
}

void write_json(const fs::path& path, const json& value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << value.dump(2) << '\n';
}

struct Stats {
    double mean = 0.0, stddev = 0.0, median = 0.0;
};

Stats summarize(std::vector<double> values) {
    Stats s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    s.median = (values.size() % 2 == 1) ? values[mid]
                                        : 0.5 * (values[mid - 1] + values[mid]);
    return s;
}

std::string fmt6(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// subcommand: synth

struct SynthOptions {
    std::string model = "builtin:blobs3d:500:42";
    std::string generator = "bumpblend3d";
    std::uint64_t seed = 1;
    double gamma0 = -1.0;  // generator defaults unless overridden
    double gammaq = -1.0;
    int order = 2;
    std::string manifest_in;
    std::string out_dir = "synth_out";
};

int cmd_synth(const SynthOptions& opt) {
    CaseSpec spec;
    if (!opt.manifest_in.empty()) {
        std::ifstream in(opt.manifest_in);
        if (!in) throw std::runtime_error("cannot read manifest " + opt.manifest_in);
        spec = case_from_manifest(json::parse(in));
    } else {
        spec.model = ModelSpec::parse(opt.model);
        spec.generator = opt.generator;
        spec.params.seed = opt.seed;
        spec.params.analytic_order = opt.order;
        if (opt.generator != "bumpblend3d") spec.params.gamma0 = 0.2;
        if (opt.gamma0 >= 0.0) spec.params.gamma0 = opt.gamma0;
        if (opt.gammaq >= 0.0) spec.params.gamma_q = opt.gammaq;
    }

    const CaseData data = generate_case(spec);
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    write_point_file(dir / "fixed.txt", data.fixed);
    write_point_file(dir / "moving.txt", data.moving);
    write_json(dir / "manifest.json", synth_manifest(spec, data, "fixed.txt", "moving.txt"));
    std::cout << "wrote " << (dir / "fixed.txt").string() << ", moving.txt, manifest.json ("
              << data.moving.size() << " points, dim " << data.moving.dim() << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: register

struct RegisterOptions {
    std::string fixed_path;
    std::string moving_path;
    std::string method = "analytic-cpd";
    std::string out_dir = "register_out";
    int t_max = 55;
    int q_max = 10;
    double w = 0.1;
    double tol = 1e-8;
    double lambda = 2.0;
    double beta = 2.0;
    int ordered = -1;  // -1 auto, 0 off, 1 on
};

MethodConfig method_config(const RegisterOptions& opt) {
    MethodConfig cfg;
    cfg.engine.t_max = opt.t_max;
    cfg.engine.q_max = opt.q_max;
    cfg.engine.w = opt.w;
    cfg.engine.tol = opt.tol;
    cfg.cpd.lambda = opt.lambda;
    cfg.cpd.beta = opt.beta;
    cfg.cpd.w = opt.w;
    cfg.cpd.tol = opt.tol;
    return cfg;
}

// Ordered correspondences hold for synth output: equal cardinality plus an
// adjacent manifest naming both files.
bool detect_ordered(const fs::path& fixed_path, const fs::path& moving_path,
                    const PointSet& fixed, const PointSet& moving) {
    if (fixed.size() != moving.size()) return false;
    const fs::path manifest = fixed_path.parent_path() / "manifest.json";
    if (!fs::exists(manifest)) return false;
    try {
        std::ifstream in(manifest);
        const json m = json::parse(in);
        return m.at("files").at("fixed").get<std::string>() == fixed_path.filename().string() &&
               m.at("files").at("moving").get<std::string>() == moving_path.filename().string();
    } catch (const std::exception&) {
        return false;
    }
}

int cmd_register(const RegisterOptions& opt) {
    const PointSet fixed = read_point_file(opt.fixed_path);
    const PointSet moving = read_point_file(opt.moving_path);
    detail::require(fixed.dim() == moving.dim(), "register: dimension mismatch between inputs");

    const bool ordered = (opt.ordered >= 0)
                             ? (opt.ordered == 1)
                             : detect_ordered(opt.fixed_path, opt.moving_path, fixed, moving);

    RunRecord record = run_registration(fixed, moving, opt.method, method_config(opt), ordered);
    record.case_id = fs::path(opt.fixed_path).filename().string();

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    write_point_file(dir / "registered.txt", record.registered);
    write_json(dir / "run_record.json", record_to_json(record));

    std::cout << record.method << ": " << record.iterations << " iterations, stop "
              << record.stop_reason << ", " << fmt6(record.elapsed_s) << " s\n";
    if (ordered) {
        std::cout << "rmse initial " << fmt6(record.initial_rmse) << " -> final "
                  << fmt6(record.final_rmse) << " (normalized frame)\n";
    } else {
        std::cout << "internal residual (best E_soft) " << fmt6(record.final_rmse)
                  << " (unordered inputs: external RMSE unavailable)\n";
    }
    if (record.failed) {
        std::cout << "warning: run classified as failed (" << record.failure << ")\n";
    }
    return record.failed ? 2 : 0;
}

// ---------------------------------------------------------------------------
// subcommand: bench

struct BenchOptions {
    std::vector<std::string> models;
    std::string generator = "bumpblend3d";
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<std::string> methods = {"analytic-cpd", "cpd"};
    std::string out_dir = "bench_out";
    RegisterOptions reg;  // shared config overrides
    double gamma0 = -1.0;
    double gammaq = -1.0;
    int order = 2;
};

int cmd_bench(const BenchOptions& opt) {
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    json records = json::array();
    // model label -> method -> per-seed values
    std::vector<std::string> model_labels;
    std::map<std::string, std::map<std::string, std::vector<double>>> errors, times;

    for (const std::string& model_text : opt.models) {
        CaseSpec base;
        base.model = ModelSpec::parse(model_text);
        base.generator = opt.generator;
        base.params.analytic_order = opt.order;
        if (opt.generator != "bumpblend3d") base.params.gamma0 = 0.2;
        if (opt.gamma0 >= 0.0) base.params.gamma0 = opt.gamma0;
        if (opt.gammaq >= 0.0) base.params.gamma_q = opt.gammaq;
        const std::string label = base.model.label();
        model_labels.push_back(label);

        for (const std::uint64_t seed : opt.seeds) {
            CaseSpec spec = base;
            spec.params.seed = seed;
            CaseData data;
            try {
                data = generate_case(spec);
            } catch (const std::exception& e) {
                std::cerr << "case " << label << " seed " << seed << ": generation failed: "
                          << e.what() << "\n";
                continue;
            }
            for (const std::string& method : opt.methods) {
                RunRecord record;
                try {
                    record = run_registration(data.fixed, data.moving, method,
                                              method_config(opt.reg), true);
                } catch (const std::exception& e) {
                    record.failed = true;
                    record.failure = e.what();
                }
                record.case_id = label;
                record.seed = seed;
                record.method = method;
                records.push_back(record_to_json(record));
                if (!record.failed) {
                    errors[label][method].push_back(record.final_rmse);
                    times[label][method].push_back(record.elapsed_s);
                }
                std::cout << label << " seed " << seed << " " << method << ": rmse "
                          << fmt6(record.final_rmse) << ", " << fmt6(record.elapsed_s) << " s"
                          << (record.failed ? " [failed: " + record.failure + "]" : "") << "\n";
            }
        }
    }

    write_json(dir / "records.json", records);

    std::ofstream csv(dir / "summary.csv");
    csv << "model,method,runs,rmse_mean,rmse_std,rmse_median,time_mean,time_std,time_median\n";
    std::cout << "\nmodel  method  runs  rmse(mean+-std, median)  time(mean+-std, median)\n";
    for (const std::string& label : model_labels) {
        for (const std::string& method : opt.methods) {
            const Stats e = summarize(errors[label][method]);
            const Stats t = summarize(times[label][method]);
            const std::size_t runs = errors[label][method].size();
            csv << label << ',' << method << ',' << runs << ',' << fmt6(e.mean) << ','
                << fmt6(e.stddev) << ',' << fmt6(e.median) << ',' << fmt6(t.mean) << ','
                << fmt6(t.stddev) << ',' << fmt6(t.median) << '\n';
            std::cout << label << "  " << method << "  " << runs << "  " << fmt6(e.mean)
                      << " +- " << fmt6(e.stddev) << ", " << fmt6(e.median) << "  "
                      << fmt6(t.mean) << " +- " << fmt6(t.stddev) << ", " << fmt6(t.median)
                      << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: ablate

struct AblateOptions {
    std::string model = "builtin:blobs3d:500:42";
    std::string generator = "bumpblend3d";
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<std::string> strategies = {"fixed1", "fixed2", "fixed5", "fixed10", "cont"};
    std::string out_dir = "ablate_out";
    int t_max = 100;
    int q_max = 10;
    double w = 0.1;
    double gamma0 = -1.0;
    double gammaq = -1.0;
};

EngineConfig strategy_config(const std::string& strategy, const AblateOptions& opt) {
    EngineConfig cfg;
    cfg.t_max = opt.t_max;
    cfg.w = opt.w;
    if (strategy == "cont" || strategy == "continuation") {
        cfg.q_max = opt.q_max;
        return cfg;
    }
    if (strategy.rfind("fixed", 0) == 0) {
        cfg.fixed_order = true;
        cfg.q_max = std::stoi(strategy.substr(5));
        return cfg;
    }
    throw std::invalid_argument("unknown strategy '" + strategy + "'");
}

int cmd_ablate(const AblateOptions& opt) {
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    json records = json::array();
    std::map<std::string, std::vector<double>> errors, times;
    std::map<std::string, int> failures;

    CaseSpec base;
    base.model = ModelSpec::parse(opt.model);
    base.generator = opt.generator;
    if (opt.gamma0 >= 0.0) base.params.gamma0 = opt.gamma0;
    if (opt.gammaq >= 0.0) base.params.gamma_q = opt.gammaq;

    for (const std::uint64_t seed : opt.seeds) {
        CaseSpec spec = base;
        spec.params.seed = seed;
        const CaseData data = generate_case(spec);
        for (const std::string& strategy : opt.strategies) {
            MethodConfig cfg;
            cfg.engine = strategy_config(strategy, opt);
            RunRecord record;
            try {
                record = run_registration(data.fixed, data.moving, "analytic-cpd", cfg, true);
            } catch (const std::exception& e) {
                record.failed = true;
                record.failure = e.what();
            }
            record.case_id = base.model.label() + "/" + strategy;
            record.seed = seed;
            records.push_back(record_to_json(record));
            if (record.failed) {
                failures[strategy] += 1;
            } else {
                errors[strategy].push_back(record.final_rmse);
                times[strategy].push_back(record.elapsed_s);
            }
            std::cout << strategy << " seed " << seed << ": "
                      << (record.failed ? "FAILED (" + record.failure + ")"
                                        : "rmse " + fmt6(record.final_rmse))
                      << "\n";
        }
    }

    write_json(dir / "records.json", records);
    std::ofstream csv(dir / "ablation.csv");
    csv << "strategy,successes,failures,rmse_mean,rmse_std,time_mean\n";
    std::cout << "\nstrategy  failures  rmse over successes (mean +- std)  time mean\n";
    for (const std::string& strategy : opt.strategies) {
        const Stats e = summarize(errors[strategy]);
        const Stats t = summarize(times[strategy]);
        csv << strategy << ',' << errors[strategy].size() << ',' << failures[strategy] << ','
            << fmt6(e.mean) << ',' << fmt6(e.stddev) << ',' << fmt6(t.mean) << '\n';
        std::cout << strategy << "  " << failures[strategy] << "/"
                  << failures[strategy] + static_cast<int>(errors[strategy].size()) << "  "
                  << fmt6(e.mean) << " +- " << fmt6(e.stddev) << "  " << fmt6(t.mean) << " s\n";
    }
    return 0;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        seeds.push_back(std::stoull(text.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-rigid point-set registration with analytic-map M-steps"};
    app.require_subcommand(1);

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "generate a synthetic registration case");
    synth->add_option("--model", synth_opt.model,
                      "builtin:<name>[:count[:seed]] or a point file path");
    synth->add_option("--generator", synth_opt.generator, "analytic2d | analytic3d | bumpblend3d");
    synth->add_option("--seed", synth_opt.seed, "deformation seed");
    synth->add_option("--gamma0", synth_opt.gamma0, "baseline coefficient range");
    synth->add_option("--gammaq", synth_opt.gammaq, "quadratic perturbation range");
    synth->add_option("--order", synth_opt.order, "order of the analytic generators");
    synth->add_option("--manifest", synth_opt.manifest_in, "regenerate from a manifest");
    synth->add_option("--out", synth_opt.out_dir, "output directory");

    RegisterOptions reg_opt;
    auto* reg = app.add_subcommand("register", "register a moving point set onto a fixed one");
    reg->add_option("fixed", reg_opt.fixed_path, "fixed point file")->required();
    reg->add_option("moving", reg_opt.moving_path, "moving point file")->required();
    reg->add_option("--method", reg_opt.method, "analytic-cpd | cpd");
    reg->add_option("--out", reg_opt.out_dir, "output directory");
    reg->add_option("--tmax", reg_opt.t_max, "maximum iterations");
    reg->add_option("--qmax", reg_opt.q_max, "maximum analytic order");
    reg->add_option("--w", reg_opt.w, "outlier weight");
    reg->add_option("--tol", reg_opt.tol, "convergence tolerance");
    reg->add_option("--lambda", reg_opt.lambda, "cpd regularization weight");
    reg->add_option("--beta", reg_opt.beta, "cpd kernel width");
    reg->add_flag_callback("--ordered", [&reg_opt] { reg_opt.ordered = 1; },
                           "treat inputs as index-aligned");
    reg->add_flag_callback("--no-ordered", [&reg_opt] { reg_opt.ordered = 0; },
                           "force unordered evaluation");

    BenchOptions bench_opt;
    std::string bench_seeds = "1,2,3,4,5";
    std::string bench_methods = "analytic-cpd,cpd";
    auto* bench = app.add_subcommand("bench", "multi-model multi-seed benchmark grid");
    bench->add_option("--model", bench_opt.models, "model spec (repeatable)")->required();
    bench->add_option("--generator", bench_opt.generator, "deformation generator");
    bench->add_option("--seeds", bench_seeds, "comma-separated seed list");
    bench->add_option("--methods", bench_methods, "comma-separated method list");
    bench->add_option("--out", bench_opt.out_dir, "output directory");
    bench->add_option("--tmax", bench_opt.reg.t_max, "maximum iterations");
    bench->add_option("--qmax", bench_opt.reg.q_max, "maximum analytic order");
    bench->add_option("--w", bench_opt.reg.w, "outlier weight");
    bench->add_option("--tol", bench_opt.reg.tol, "convergence tolerance");
    bench->add_option("--gamma0", bench_opt.gamma0, "generator coefficient range");
    bench->add_option("--gammaq", bench_opt.gammaq, "quadratic perturbation range");
    bench->add_option("--order", bench_opt.order, "order of the analytic generators");

    AblateOptions abl_opt;
    std::string abl_seeds = "1,2,3,4,5";
    std::string abl_strategies = "fixed1,fixed2,fixed5,fixed10,cont";
    auto* abl = app.add_subcommand("ablate", "degree-strategy ablation on one model");
    abl->add_option("--model", abl_opt.model, "model spec");
    abl->add_option("--generator", abl_opt.generator, "deformation generator");
    abl->add_option("--seeds", abl_seeds, "comma-separated seed list");
    abl->add_option("--strategies", abl_strategies, "fixed<q> and/or cont");
    abl->add_option("--out", abl_opt.out_dir, "output directory");
    abl->add_option("--tmax", abl_opt.t_max, "shared iteration budget");
    abl->add_option("--qmax", abl_opt.q_max, "continuation maximum order");
    abl->add_option("--w", abl_opt.w, "outlier weight");
    abl->add_option("--gamma0", abl_opt.gamma0, "generator coefficient range");
    abl->add_option("--gammaq", abl_opt.gammaq, "quadratic perturbation range");

    CLI11_PARSE(app, argc, argv);

    try {
        (void)configured_thread_count();  // validate ACPD_THREADS early
        if (*synth) return cmd_synth(synth_opt);
        if (*reg) return cmd_register(reg_opt);
        if (*bench) {
            bench_opt.seeds = parse_seed_list(bench_seeds);
            bench_opt.methods.clear();
            std::size_t pos = 0;
            while (pos < bench_methods.size()) {
                const auto comma = bench_methods.find(',', pos);
                bench_opt.methods.push_back(bench_methods.substr(pos, comma - pos));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return cmd_bench(bench_opt);
        }
        if (*abl) {
            abl_opt.seeds = parse_seed_list(abl_seeds);
            abl_opt.strategies.clear();
            std::size_t pos = 0;
            while (pos < abl_strategies.size()) {
                const auto comma = abl_strategies.find(',', pos);
                abl_opt.strategies.push_back(abl_strategies.substr(pos, comma - pos));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return cmd_ablate(abl_opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
