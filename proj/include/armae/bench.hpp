#pragma once

#include <map>
#include <optional>
#include <string>

#include "armae/armae.hpp"
#include "armae/fpgrowth.hpp"
#include "armae/nsgaii.hpp"

namespace armae {

struct FpGrowthParams {
    double min_support = 0.01;
    double min_confidence = 0.01;
    std::size_t max_antecedent = 2;
};

struct ExperimentConfig {
    std::string dataset_path;
    std::string dataset_format = "binary";  // "binary" | "categorical"
    bool has_header = true;
    std::string algorithms = "all";  // "armae" | "fpgrowth" | "nsgaii" | "all"
    TrainConfig train;
    ArmAeConfig armae;
    FpGrowthParams fpgrowth;
    NsgaConfig nsga;
    std::size_t repetitions = 10;
    std::string output_dir = ".";
    std::uint64_t base_seed = 0;
};

ExperimentConfig load_experiment_config(const std::string& path);

struct AlgorithmReport {
    double time_s = 0.0;          // mean over runs
    double rules = 0.0;           // mean rule count
    double avg_support = 0.0;
    double avg_confidence = 0.0;
    double support_positive_fraction = 0.0;
    std::optional<double> coverage;  // vs the FP-Growth reference
    std::size_t runs = 0;
    std::vector<std::string> errors;
};

struct Report {
    std::map<std::string, AlgorithmReport> algorithms;
};

Report run_experiment(const ExperimentConfig& cfg);

void write_report_json(std::ostream& out, const Report& report);
void write_report_text(std::ostream& out, const Report& report);

BinaryMatrix load_dataset(const std::string& path, const std::string& format,
                          bool has_header);

int cli_main(int argc, char** argv);

}  // namespace armae
