#include <iostream>

#include <CLI11.hpp>

#include "recbench/cli_commands.hpp"
#include "recbench/errors.hpp"
#include "recbench/version.hpp"

using namespace recbench;

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

int main(int argc, char** argv) {
    CLI::App app{"recbench - recency-bias evaluation workbench for sequential recommenders"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.set_config("--config", "", "Plain-text key=value config file (flags win over it)");
    app.require_subcommand(1);

    cli::PrepOptions prep;
    CLI::App* prep_cmd = app.add_subcommand(
        "prep", "Ingest raw interactions, k-core filter, split leave-one-out");
    prep_cmd->add_option("--input", prep.input, "Raw TSV/CSV interaction file")->required();
    prep_cmd->add_option("--out", prep.out_dir, "Output dataset directory")->required();
    prep_cmd->add_option("--delimiter", prep.delimiter, "Field delimiter (default tab)");
    prep_cmd->add_flag("--has-header", prep.has_header, "Skip the first line");
    prep_cmd->add_option("--columns", prep.columns,
                         "user,item,timestamp field positions (default 0,1,2)");
    prep_cmd->add_option("--min-count", prep.min_count, "k-core threshold (default 5)");
    prep_cmd->add_flag("--single-pass", prep.single_pass,
                       "One filtering round instead of the fixpoint iteration");
    prep_cmd->add_option("--max-len", prep.max_len, "Maximum session prefix length (default 50)");

    cli::TrainOptions train;
    CLI::App* train_cmd = app.add_subcommand("train", "Fit a scorer on a prepared dataset");
    train_cmd->add_option("--dataset", train.dataset_dir, "Prepared dataset directory")
        ->required();
    train_cmd->add_option("--out", train.out_checkpoint, "Checkpoint output path")->required();
    train_cmd->add_option("--model", train.model, "pop | markov | gru | attn")->required();
    train_cmd->add_option("--embed-dim", train.embed_dim, "Embedding dimension (default 64)");
    train_cmd->add_option("--hidden-dim", train.hidden_dim, "Hidden/FFN dimension (default 64)");
    train_cmd->add_option("--heads", train.n_heads, "Attention heads (default 1)");
    train_cmd->add_option("--dropout", train.dropout, "Dropout probability (default 0.2)");
    train_cmd->add_option("--markov-alpha", train.markov_alpha,
                          "Additive smoothing (default 0.01)");
    train_cmd->add_option("--lr", train.lr, "Adam learning rate (default 1e-3)");
    train_cmd->add_option("--batch-size", train.batch_size, "Mini-batch size (default 256)");
    train_cmd->add_option("--max-epochs", train.max_epochs, "Epoch cap (default 200)");
    train_cmd->add_option("--patience", train.patience,
                          "Early-stopping patience in epochs (default 10)");
    train_cmd->add_option("--seed", train.seed, "RNG seed (default 2024)");
    train_cmd->add_option("--eval-k", train.eval_k, "Validation Hit@K cutoff (default 10)");
    train_cmd->add_flag("--quiet", train.quiet, "Suppress per-epoch logging");

    cli::EvalOptions eval_opts;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Rank the full catalog and compute the metric suite");
    eval_cmd->add_option("--dataset", eval_opts.dataset_dir, "Prepared dataset directory")
        ->required();
    std::string checkpoint_path, dump_in_path, dump_out_path;
    eval_cmd->add_option("--checkpoint", checkpoint_path, "Scorer checkpoint to evaluate");
    eval_cmd->add_option("--dump", dump_in_path, "Score dump to evaluate instead");
    eval_cmd->add_option("--out", eval_opts.out_report, "Report JSON output path")->required();
    eval_cmd->add_option("--split", eval_opts.split, "test | valid | train (default test)");
    eval_cmd->add_option("--k", eval_opts.ks, "Cutoffs K (default 5 10)");
    eval_cmd->add_flag("--mask-last", eval_opts.mask_last,
                       "Also compute starred metrics after the negative-infinity intervention");
    eval_cmd->add_flag("--exclude-gt-equals-last", eval_opts.exclude_gt_equals_last,
                       "Drop cases whose GT is the last input item");
    eval_cmd->add_flag("--mask-history", eval_opts.mask_history,
                       "Mask every prefix item before ranking (off by default)");
    eval_cmd->add_option("--save-dump", dump_out_path, "Also write a score dump here");
    eval_cmd->add_option("--dump-mode", eval_opts.dump_mode, "scores | topm (default scores)");
    eval_cmd->add_option("--topm", eval_opts.topm, "List length for topm dumps (default 50)");
    eval_cmd->add_option("--label", eval_opts.label, "Column label for reports");

    cli::ReportOptions report;
    CLI::App* report_cmd =
        app.add_subcommand("report", "Render one or more report JSONs as a table");
    report_cmd->add_option("reports", report.reports, "Report JSON files")->required();
    report_cmd->add_option("--format", report.format, "tsv | markdown | json (default markdown)");
    std::string report_out;
    report_cmd->add_option("--out", report_out, "Write the table here instead of stdout");

    cli::SimulateOptions sim;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Generate a synthetic interaction log with known recency structure");
    sim_cmd->add_option("--users", sim.config.n_users, "Number of users (default 1000)");
    sim_cmd->add_option("--items", sim.config.n_items, "Catalog size (default 200)");
    sim_cmd->add_option("--len-min", sim.config.session_len_min, "Min session length (default 5)");
    sim_cmd->add_option("--len-max", sim.config.session_len_max,
                        "Max session length (default 15)");
    sim_cmd->add_option("--p-repeat", sim.config.p_repeat,
                        "Probability the next item repeats the previous one");
    sim_cmd->add_option("--zipf-s", sim.config.zipf_s, "Popularity skew (0 = uniform)");
    sim_cmd->add_option("--seed", sim.config.seed, "RNG seed (default 2024)");
    sim_cmd->add_option("--out", sim.out, "Output TSV path")->required();

    cli::GradcheckOptions grad;
    CLI::App* grad_cmd = app.add_subcommand(
        "gradcheck", "Finite-difference check of the trainable models at 64-bit");
    grad_cmd->add_option("--model", grad.model, "gru | attn (default gru)");
    grad_cmd->add_option("--catalog-size", grad.catalog_size, "Catalog size (default 6)");
    grad_cmd->add_option("--prefix-len", grad.prefix_len, "Prefix length (default 4)");
    grad_cmd->add_option("--embed-dim", grad.embed_dim, "Embedding dimension (default 4)");
    grad_cmd->add_option("--hidden-dim", grad.hidden_dim, "Hidden/FFN dimension (default 4)");
    grad_cmd->add_option("--heads", grad.n_heads, "Attention heads (default 1)");
    grad_cmd->add_option("--seed", grad.seed, "RNG seed (default 2024)");
    grad_cmd->add_option("--eps", grad.eps, "Perturbation (default 1e-5)");
    grad_cmd->add_option("--threshold", grad.threshold,
                         "Max relative error accepted (default 1e-4)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return 1;
    }

    try {
        if (prep_cmd->parsed()) return cli::cmd_prep(prep, std::cout);
        if (train_cmd->parsed()) return cli::cmd_train(train, std::cout);
        if (eval_cmd->parsed()) {
            if (!checkpoint_path.empty()) eval_opts.checkpoint = checkpoint_path;
            if (!dump_in_path.empty()) eval_opts.dump_in = dump_in_path;
            if (!dump_out_path.empty()) eval_opts.dump_out = dump_out_path;
            return cli::cmd_eval(eval_opts, std::cout);
        }
        if (report_cmd->parsed()) {
            if (!report_out.empty()) report.out = report_out;
            return cli::cmd_report(report, std::cout);
        }
        if (sim_cmd->parsed()) return cli::cmd_simulate(sim, std::cout);
        if (grad_cmd->parsed()) return cli::cmd_gradcheck(grad, std::cout);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
