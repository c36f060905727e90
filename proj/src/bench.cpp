#include "armae/bench.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace armae {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

double now_seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct RunRecord {
    std::string algorithm;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    double time_s = 0.0;
    std::size_t rules = 0;
    double avg_support = 0.0;
    double avg_confidence = 0.0;
    double support_positive_fraction = 0.0;
    std::optional<double> coverage;
    std::string rules_file;
    std::string error;
};

void write_rules_file(const std::string& path, const RuleSet& rs,
                      const std::vector<std::string>& names) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    write_rules_jsonl(out, rs, names);
}

TrainConfig train_from_json(const json& j, TrainConfig base = {}) {
    base.learning_rate = j.value("learning_rate", base.learning_rate);
    base.adam_beta1 = j.value("adam_beta1", base.adam_beta1);
    base.adam_beta2 = j.value("adam_beta2", base.adam_beta2);
    base.adam_epsilon = j.value("adam_epsilon", base.adam_epsilon);
    base.batch_size = j.value("batch_size", base.batch_size);
    base.max_epochs = j.value("max_epochs", base.max_epochs);
    base.loss_delta_threshold = j.value("loss_delta_threshold", base.loss_delta_threshold);
    base.seed = j.value("seed", base.seed);
    return base;
}

}  // namespace

BinaryMatrix load_dataset(const std::string& path, const std::string& format,
                          bool has_header) {
    if (format == "binary") return load_binary_csv(path);
    if (format == "categorical") return load_categorical_csv(path, has_header);
    throw std::invalid_argument("unknown dataset format: " + format);
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(in);

    ExperimentConfig cfg;
    const auto& ds = j.at("dataset");
    cfg.dataset_path = ds.at("path").get<std::string>();
    cfg.dataset_format = ds.value("format", cfg.dataset_format);
    cfg.has_header = ds.value("has_header", cfg.has_header);
    cfg.algorithms = j.value("algorithms", cfg.algorithms);
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.base_seed = j.value("base_seed", cfg.base_seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (const char* env = std::getenv("ARMAE_OUT_DIR");
        env && !j.contains("output_dir"))
        cfg.output_dir = env;

    if (j.contains("armae")) {
        const auto& a = j["armae"];
        cfg.armae.rules_per_consequent =
            a.value("rules_per_consequent", cfg.armae.rules_per_consequent);
        cfg.armae.max_antecedent = a.value("max_antecedent", cfg.armae.max_antecedent);
        cfg.armae.similarity_threshold =
            a.value("similarity_threshold", cfg.armae.similarity_threshold);
        if (a.contains("train")) cfg.train = train_from_json(a["train"], cfg.train);
    }
    if (j.contains("fpgrowth")) {
        const auto& f = j["fpgrowth"];
        cfg.fpgrowth.min_support = f.value("min_support", cfg.fpgrowth.min_support);
        cfg.fpgrowth.min_confidence =
            f.value("min_confidence", cfg.fpgrowth.min_confidence);
        cfg.fpgrowth.max_antecedent =
            f.value("max_antecedent", cfg.fpgrowth.max_antecedent);
    }
    if (j.contains("nsgaii")) {
        const auto& n = j["nsgaii"];
        cfg.nsga.population = n.value("population", cfg.nsga.population);
        cfg.nsga.crossover_rate = n.value("crossover_rate", cfg.nsga.crossover_rate);
        cfg.nsga.mutation_rate = n.value("mutation_rate", cfg.nsga.mutation_rate);
        cfg.nsga.archive_capacity =
            n.value("archive_capacity", cfg.nsga.archive_capacity);
        cfg.nsga.improvement_threshold =
            n.value("improvement_threshold", cfg.nsga.improvement_threshold);
        cfg.nsga.max_generations =
            n.value("max_generations", cfg.nsga.max_generations);
    }
    return cfg;
}

Report run_experiment(const ExperimentConfig& cfg) {
    const BinaryMatrix data =
        load_dataset(cfg.dataset_path, cfg.dataset_format, cfg.has_header);
    const auto& names = data.item_names();
    fs::create_directories(cfg.output_dir);

    const bool want_fp = cfg.algorithms == "all" || cfg.algorithms == "fpgrowth";
    const bool want_armae = cfg.algorithms == "all" || cfg.algorithms == "armae";
    const bool want_nsga = cfg.algorithms == "all" || cfg.algorithms == "nsgaii";

    Report report;
    std::vector<RunRecord> runs;
    std::optional<RuleSet> reference;

    if (want_fp) {
        RunRecord rec;
        rec.algorithm = "fpgrowth";
        rec.seed = 0;
        try {
            // deterministic, so the reference set is cached per (dataset, thresholds)
            const fs::path cache_dir = fs::path(cfg.output_dir) / "cache";
            fs::create_directories(cache_dir);
            std::ostringstream key;
            key << std::hex << fnv1a_file(cfg.dataset_path) << "_"
                << cfg.fpgrowth.min_support << "_" << cfg.fpgrowth.min_confidence
                << "_" << cfg.fpgrowth.max_antecedent;
            const fs::path rules_path = cache_dir / ("fpgrowth_" + key.str() + ".jsonl");
            const fs::path meta_path = cache_dir / ("fpgrowth_" + key.str() + ".meta.json");

            RuleSet rs;
            if (fs::exists(rules_path) && fs::exists(meta_path)) {
                std::ifstream rin(rules_path);
                rs = read_rules_jsonl(rin, names);
                std::ifstream min(meta_path);
                rec.time_s = json::parse(min).at("time_s").get<double>();
            } else {
                const auto t0 = std::chrono::steady_clock::now();
                rs = fpgrowth_mine(data, cfg.fpgrowth.min_support,
                                   cfg.fpgrowth.min_confidence,
                                   cfg.fpgrowth.max_antecedent);
                rec.time_s = now_seconds_since(t0);
                write_rules_file(rules_path.string(), rs, names);
                std::ofstream mout(meta_path);
                mout << json{{"time_s", rec.time_s}}.dump() << '\n';
            }
            const RuleSetSummary s = summarize(rs);
            rec.rules = s.count;
            rec.avg_support = s.avg_support;
            rec.avg_confidence = s.avg_confidence;
            rec.support_positive_fraction = s.fraction_support_positive;
            rec.rules_file = rules_path.string();
            reference = std::move(rs);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        runs.push_back(std::move(rec));
    }

    auto stochastic_runs = [&](const std::string& algo,
                               auto&& run_one) {
        for (std::size_t r = 0; r < cfg.repetitions; ++r) {
            RunRecord rec;
            rec.algorithm = algo;
            rec.run_index = r;
            rec.seed = cfg.base_seed + r;
            try {
                const auto t0 = std::chrono::steady_clock::now();
                RuleSet rs = run_one(rec.seed);
                rec.time_s = now_seconds_since(t0);
                const RuleSetSummary s = summarize(rs);
                rec.rules = s.count;
                rec.avg_support = s.avg_support;
                rec.avg_confidence = s.avg_confidence;
                rec.support_positive_fraction = s.fraction_support_positive;
                if (reference) rec.coverage = coverage(rs, *reference);
                const fs::path path = fs::path(cfg.output_dir) /
                                      (algo + "_run" + std::to_string(r) + ".jsonl");
                write_rules_file(path.string(), rs, names);
                rec.rules_file = path.string();
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            runs.push_back(std::move(rec));
        }
    };

    if (want_armae) {
        stochastic_runs("armae", [&](std::uint64_t seed) {
            TrainConfig tc = cfg.train;
            tc.seed = seed;
            return full_pipeline(data, tc, cfg.armae).rules;
        });
    }
    if (want_nsga) {
        stochastic_runs("nsgaii", [&](std::uint64_t seed) {
            NsgaConfig nc = cfg.nsga;
            nc.seed = seed;
            return evolve(data, nc).archive;
        });
    }

    // aggregate per algorithm over successful runs
    for (const auto& rec : runs) {
        auto& ar = report.algorithms[rec.algorithm];
        if (!rec.error.empty()) {
            ar.errors.push_back(rec.error);
            continue;
        }
        ar.runs += 1;
        ar.time_s += rec.time_s;
        ar.rules += static_cast<double>(rec.rules);
        ar.avg_support += rec.avg_support;
        ar.avg_confidence += rec.avg_confidence;
        ar.support_positive_fraction += rec.support_positive_fraction;
        if (rec.coverage) ar.coverage = ar.coverage.value_or(0.0) + *rec.coverage;
    }
    for (auto& [_, ar] : report.algorithms) {
        if (ar.runs == 0) continue;
        const double n = static_cast<double>(ar.runs);
        ar.time_s /= n;
        ar.rules /= n;
        ar.avg_support /= n;
        ar.avg_confidence /= n;
        ar.support_positive_fraction /= n;
        if (ar.coverage) ar.coverage = *ar.coverage / n;
    }

    // per-run artifacts alongside the aggregate report
    ordered_json runs_json = ordered_json::array();
    for (const auto& rec : runs) {
        ordered_json rj;
        rj["algorithm"] = rec.algorithm;
        rj["run_index"] = rec.run_index;
        rj["seed"] = rec.seed;
        if (rec.error.empty()) {
            rj["time_s"] = rec.time_s;
            rj["rules"] = rec.rules;
            rj["avg_support"] = rec.avg_support;
            rj["avg_confidence"] = rec.avg_confidence;
            rj["support_positive_fraction"] = rec.support_positive_fraction;
            if (rec.coverage) rj["coverage"] = *rec.coverage;
            rj["rules_file"] = rec.rules_file;
        } else {
            rj["error"] = rec.error;
        }
        runs_json.push_back(std::move(rj));
    }
    std::ofstream runs_out(fs::path(cfg.output_dir) / "runs.json");
    runs_out << runs_json.dump(2) << '\n';

    std::ofstream jout(fs::path(cfg.output_dir) / "report.json");
    write_report_json(jout, report);
    std::ofstream tout(fs::path(cfg.output_dir) / "report.txt");
    write_report_text(tout, report);
    return report;
}

void write_report_json(std::ostream& out, const Report& report) {
    ordered_json j;
    for (const auto& [name, ar] : report.algorithms) {
        ordered_json aj;
        aj["time_s"] = ar.time_s;
        aj["rules"] = ar.rules;
        aj["avg_support"] = ar.avg_support;
        aj["avg_confidence"] = ar.avg_confidence;
        aj["support_positive_fraction"] = ar.support_positive_fraction;
        if (ar.coverage) aj["coverage"] = *ar.coverage;
        if (!ar.errors.empty()) aj["errors"] = ar.errors;
        j[name] = std::move(aj);
    }
    out << j.dump(2) << '\n';
}

void write_report_text(std::ostream& out, const Report& report) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %10s %10s %10s\n",
                  "algorithm", "time_s", "rules", "support", "confidence",
                  "supp>0", "coverage");
    out << line;
    for (const auto& [name, ar] : report.algorithms) {
        std::string cov = ar.coverage ? [&] {
            char b[32];
            std::snprintf(b, sizeof(b), "%10.4f", *ar.coverage);
            return std::string(b);
        }() : std::string(10, ' ').replace(9, 1, "-");
        std::snprintf(line, sizeof(line), "%-10s %10.3f %10.1f %10.4f %10.4f %10.4f %s\n",
                      name.c_str(), ar.time_s, ar.rules, ar.avg_support,
                      ar.avg_confidence, ar.support_positive_fraction, cov.c_str());
        out << line;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"ARM-AE association rule mining toolkit"};
    app.require_subcommand(1);

    // mine
    auto* mine_cmd = app.add_subcommand("mine", "Run one miner on one dataset");
    std::string algo = "armae", data_path, data_format = "binary", out_path;
    std::string trace_path, log_path;
    bool no_header = false;
    std::uint64_t seed = 0;
    double min_support = 0.01, min_confidence = 0.01, similarity = 0.5;
    std::size_t max_antecedent = 2, rules_per_consequent = 2;
    TrainConfig train_cfg;
    NsgaConfig nsga_cfg;
    mine_cmd->add_option("--algo", algo, "armae | fpgrowth | nsgaii")
        ->check(CLI::IsMember({"armae", "fpgrowth", "nsgaii"}));
    mine_cmd->add_option("--data", data_path, "dataset CSV")->required();
    mine_cmd->add_option("--format", data_format, "binary | categorical")
        ->check(CLI::IsMember({"binary", "categorical"}));
    mine_cmd->add_flag("--no-header", no_header, "categorical CSV has no header row");
    mine_cmd->add_option("--out", out_path, "rules output file (default stdout)");
    mine_cmd->add_option("--seed", seed, "random seed");
    mine_cmd->add_option("--min-support", min_support, "FP-Growth minimum support");
    mine_cmd->add_option("--min-confidence", min_confidence,
                         "FP-Growth minimum confidence");
    mine_cmd->add_option("--max-antecedent", max_antecedent,
                         "maximum antecedent size (M)");
    mine_cmd->add_option("--rules-per-consequent", rules_per_consequent,
                         "rules per consequent (N)");
    mine_cmd->add_option("--similarity", similarity, "similarity threshold (L)");
    mine_cmd->add_option("--lr", train_cfg.learning_rate, "learning rate");
    mine_cmd->add_option("--batch-size", train_cfg.batch_size, "batch size");
    mine_cmd->add_option("--max-epochs", train_cfg.max_epochs, "epoch cap");
    mine_cmd->add_option("--loss-threshold", train_cfg.loss_delta_threshold,
                         "loss-plateau stopping threshold");
    mine_cmd->add_option("--population", nsga_cfg.population, "NSGAII population");
    mine_cmd->add_option("--archive-capacity", nsga_cfg.archive_capacity,
                         "NSGAII archive capacity");
    mine_cmd->add_option("--trace", trace_path, "write ARM-AE mining trace JSON");
    mine_cmd->add_option("--log", log_path, "write NSGAII per-generation CSV");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a full experiment");
    std::string config_path, bench_out;
    bench_cmd->add_option("--config", config_path, "experiment config JSON")->required();
    bench_cmd->add_option("--out", bench_out, "output directory override");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Emit a synthetic dataset");
    SyntheticSpec spec;
    std::vector<std::string> plants;
    std::string synth_out;
    synth_cmd->add_option("--rows", spec.rows, "row count")->required();
    synth_cmd->add_option("--items", spec.items, "item count")->required();
    synth_cmd->add_option("--plant", plants,
                          "planted pair a:c:p (repeatable)");
    synth_cmd->add_option("--density", spec.background_density,
                          "background density");
    synth_cmd->add_option("--seed", spec.seed, "random seed");
    synth_cmd->add_option("--out", synth_out, "output CSV (default stdout)");

    // score
    auto* score_cmd = app.add_subcommand("score", "Re-score a rule file");
    std::string rules_path, score_data, score_format = "binary", score_out;
    bool score_no_header = false;
    score_cmd->add_option("--rules", rules_path, "rules JSON-lines file")->required();
    score_cmd->add_option("--data", score_data, "dataset CSV")->required();
    score_cmd->add_option("--format", score_format, "binary | categorical")
        ->check(CLI::IsMember({"binary", "categorical"}));
    score_cmd->add_flag("--no-header", score_no_header,
                        "categorical CSV has no header row");
    score_cmd->add_option("--out", score_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*mine_cmd) {
            const BinaryMatrix data = load_dataset(data_path, data_format, !no_header);
            RuleSet rs;
            if (algo == "fpgrowth") {
                rs = fpgrowth_mine(data, min_support, min_confidence, max_antecedent);
            } else if (algo == "armae") {
                train_cfg.seed = seed;
                ArmAeConfig mc;
                mc.rules_per_consequent = rules_per_consequent;
                mc.max_antecedent = max_antecedent;
                mc.similarity_threshold = similarity;
                MiningTrace trace;
                rs = full_pipeline(data, train_cfg, mc,
                                   trace_path.empty() ? nullptr : &trace)
                         .rules;
                if (!trace_path.empty()) {
                    std::ofstream tout(trace_path);
                    write_trace_json(tout, trace, data.item_names());
                }
            } else {
                nsga_cfg.seed = seed;
                EvolveResult res = evolve(data, nsga_cfg);
                rs = std::move(res.archive);
                if (!log_path.empty()) {
                    std::ofstream lout(log_path);
                    lout << "generation,avg_support,avg_confidence,archive_size\n";
                    for (const auto& g : res.log) {
                        nlohmann::json s = g.archive_avg_support,
                                       c = g.archive_avg_confidence;
                        lout << g.generation << ',' << s.dump() << ',' << c.dump()
                             << ',' << g.archive_size << '\n';
                    }
                }
            }
            if (out_path.empty()) {
                write_rules_jsonl(std::cout, rs, data.item_names());
            } else {
                write_rules_file(out_path, rs, data.item_names());
            }
        } else if (*bench_cmd) {
            ExperimentConfig cfg = load_experiment_config(config_path);
            if (!bench_out.empty()) cfg.output_dir = bench_out;
            run_experiment(cfg);
        } else if (*synth_cmd) {
            for (const std::string& p : plants) {
                PlantedPair pair{};
                if (std::sscanf(p.c_str(), "%u:%u:%lf", &pair.antecedent,
                                &pair.consequent, &pair.probability) != 3)
                    throw std::invalid_argument("bad --plant spec: " + p);
                spec.planted_pairs.push_back(pair);
            }
            const BinaryMatrix m = generate_synthetic(spec);
            if (synth_out.empty()) {
                write_binary_csv(std::cout, m);
            } else {
                write_binary_csv(synth_out, m);
            }
        } else if (*score_cmd) {
            const BinaryMatrix data =
                load_dataset(score_data, score_format, !score_no_header);
            std::ifstream rin(rules_path);
            if (!rin) throw std::runtime_error("cannot open file: " + rules_path);
            const RuleSet loaded = read_rules_jsonl(rin, data.item_names());
            const RuleSet scored = score_rules(data, loaded);
            if (score_out.empty()) {
                write_rules_jsonl(std::cout, scored, data.item_names());
            } else {
                write_rules_file(score_out, scored, data.item_names());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace armae
