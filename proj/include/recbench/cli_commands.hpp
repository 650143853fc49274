#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "recbench/eval.hpp"
#include "recbench/scorer.hpp"
#include "recbench/synth.hpp"

namespace recbench::cli {

// Resolved options per subcommand (flag > config file > default resolution
// happens in the CLI front end). Each command writes its outputs plus a
// manifest.json that fully determines the run.

struct PrepOptions {
    std::filesystem::path input;
    std::filesystem::path out_dir;
    std::string delimiter = "\t";
    bool has_header = false;
    std::string columns = "0,1,2"; // user,item,timestamp field positions
    int min_count = 5;
    bool single_pass = false;
    int max_len = 50;
};

struct TrainOptions {
    std::filesystem::path dataset_dir;
    std::filesystem::path out_checkpoint;
    std::string model = "pop";
    models::ScorerSpec spec_overrides() const;
    int embed_dim = 64;
    int hidden_dim = 64;
    int n_heads = 1;
    double dropout = 0.2;
    double markov_alpha = 0.01;
    double lr = 1e-3;
    int batch_size = 256;
    int max_epochs = 200;
    int patience = 10;
    uint64_t seed = 2024;
    int eval_k = 10;
    bool quiet = false;
};

struct EvalOptions {
    std::filesystem::path dataset_dir;
    std::optional<std::filesystem::path> checkpoint;
    std::optional<std::filesystem::path> dump_in;
    std::filesystem::path out_report;
    std::string split = "test";
    std::vector<int> ks = {5, 10};
    bool mask_last = false;
    bool exclude_gt_equals_last = false;
    bool mask_history = false;
    std::optional<std::filesystem::path> dump_out;
    std::string dump_mode = "scores"; // scores | topm
    int topm = 50;
    std::string label; // column label; defaults to the model kind
};

struct ReportOptions {
    std::vector<std::filesystem::path> reports;
    std::string format = "markdown"; // tsv | markdown | json
    std::optional<std::filesystem::path> out; // stdout when absent
};

struct SimulateOptions {
    synth::SynthConfig config;
    std::filesystem::path out;
};

struct GradcheckOptions {
    std::string model = "gru"; // gru | attn
    int catalog_size = 6;
    int prefix_len = 4;
    int embed_dim = 4;
    int hidden_dim = 4;
    int n_heads = 1;
    uint64_t seed = 2024;
    double eps = 1e-5;
    double threshold = 1e-4;
};

int cmd_prep(const PrepOptions& options, std::ostream& out);
int cmd_train(const TrainOptions& options, std::ostream& out);
int cmd_eval(const EvalOptions& options, std::ostream& out);
int cmd_report(const ReportOptions& options, std::ostream& out);
int cmd_simulate(const SimulateOptions& options, std::ostream& out);
int cmd_gradcheck(const GradcheckOptions& options, std::ostream& out);

} // namespace recbench::cli
