#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bll/diagnostics.hpp"
#include "bll/experiments.hpp"
#include "bll/integrator.hpp"
#include "bll/model.hpp"

namespace bll {

struct GridSpec {
    int dim = 1;
    int points = 64;
    double length = 6.283185307179586;  // 2 pi
};

enum class InitKind { Appendix3D, Appendix2D, Manufactured, Checkpoint };

struct InitSpec {
    InitKind kind = InitKind::Manufactured;
    int n = 1;                   // appendix families
    double level = 1.0;          // B (3D) or A (2D); also the run's pbar
    double f_scale = 0.0;        // appendix2d; 0 picks the default
    std::uint64_t seed = 0;      // manufactured
    double amplitude = 0.05;     // manufactured
    std::string path;            // checkpoint
};

struct OutputSpec {
    std::string csv_path = "report.csv";
    std::string jsonl_path = "report.jsonl";
    long checkpoint_every = 0;  // steps; 0 disables
    std::string checkpoint_path = "checkpoint.bin";
};

struct SweepSpec {
    std::vector<double> epsilons;
    double t_probe = 1.0;
};

struct ScalingSpec {
    Family family = Family::Appendix3D;
    std::vector<int> n_list{4, 8, 16, 32};
    GridPolicy policy;
};

struct RunConfig {
    GridSpec grid;
    ModelParams params;
    InitSpec init;
    StepperConfig stepper;
    GNConstants gn;
    OutputSpec outputs;
    SweepSpec sweep;
    ScalingSpec scaling;
};

/// Strict JSON config: unknown keys and wrong types are ParseErrors, and all
/// invariant violations are gathered into one ValidationError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& config);

GridPtr make_grid(const GridSpec& spec);
/// Builds the initial state the config asks for (loading a checkpoint if needed).
State make_initial_state(const RunConfig& config);

constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const State& state, const RunConfig& config, const std::string& path);
std::pair<State, RunConfig> load_checkpoint(const std::string& path);

/// Fixed CSV header; 3D swaps the E/D columns for the kappa/N ledger.
std::string csv_header(int dim);
std::string csv_row(const EnergyReport& r);
std::string report_json(const EnergyReport& r);

std::string sweep_json(const SweepResult& r);
std::string sweep_csv(const SweepResult& r);
std::string decay_json(const DecayResult& r);
std::string decay_csv(const DecayResult& r);
std::string scaling_json(const ScalingTable& t);
std::string scaling_csv(const ScalingTable& t);
std::string checks_json(const std::vector<CheckResult>& checks);

/// Streams EnergyReports to a CSV file and a JSONL file.
class ReportWriter {
public:
    ReportWriter(const std::string& csv_path, const std::string& jsonl_path, int dim);
    void write(const EnergyReport& r);

private:
    std::ofstream csv_, jsonl_;
};

/// Writes text to path atomically through a temporary sibling.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bll
