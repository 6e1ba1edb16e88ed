#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pdla/harness.hpp"

namespace {

// exit codes: 0 success, 1 validation error, 2 I/O error
constexpr int kValidationError = 1;
constexpr int kIoError = 2;

struct CommonOpts {
    std::string config_path;
    std::string dataset;
    std::string out_dir;
    long long seed = -1;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "flat key = value config file");
    cmd->add_option("--seed", opts.seed, "override RNG seed");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--dataset", opts.dataset, "bundled | synth | path to CSV");
    cmd->add_flag("--svg", opts.svg, "also emit SVG trend charts");
}

pdla::ExperimentConfig build_config(const CommonOpts& opts, int experiment) {
    pdla::ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = pdla::load_config(opts.config_path);
    }
    cfg.experiment = experiment;
    if (experiment != 1 && opts.config_path.empty() && opts.dataset.empty()) {
        cfg.source = pdla::DatasetSource::Synth;  // sweeps default to the 190-row set
    }
    if (!opts.dataset.empty()) {
        if (opts.dataset == "bundled") cfg.source = pdla::DatasetSource::Bundled;
        else if (opts.dataset == "synth") cfg.source = pdla::DatasetSource::Synth;
        else { cfg.source = pdla::DatasetSource::CsvPath; cfg.csv_path = opts.dataset; }
    }
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.svg) cfg.emit_svg = true;
    return cfg;
}

void print_sweep(const pdla::SweepReport& report) {
    std::printf("%s sweep (seed %llu, config %s)\n", report.parameter_name.c_str(),
                static_cast<unsigned long long>(report.seed), report.config_hash.c_str());
    for (const pdla::SweepRow& row : report.rows) {
        std::printf("  %s = %-4d  MAPCA = %.4f%%\n", report.parameter_name.c_str(),
                    row.parameter_value, row.mapca_percent);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-DLA predictive classification pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    CLI::App* exp1 = app.add_subcommand("exp1", "DLA vs LSTM comparison report");
    CLI::App* exp2 = app.add_subcommand("exp2", "SKS sweep with MAPCA and trend files");
    CLI::App* exp3 = app.add_subcommand("exp3", "learning-extent sweep at SKS 1");
    add_common(exp1, opts);
    add_common(exp2, opts);
    add_common(exp3, opts);

    std::string y_path, yhat_path;
    double tol = 0.05;
    CLI::App* mapca_cmd = app.add_subcommand("mapca", "score two numeric CSV matrices");
    mapca_cmd->add_option("--y", y_path, "observed matrix CSV")->required();
    mapca_cmd->add_option("--yhat", yhat_path, "predicted matrix CSV")->required();
    mapca_cmd->add_option("--tol", tol, "tolerance constraint (> 0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exp1->parsed()) {
            pdla::ExperimentConfig cfg = build_config(opts, 1);
            pdla::ComparisonReport report = pdla::run_experiment1(cfg);
            std::printf("DLA rows: %zu, LSTM rows: %zu (report in %s/report.txt)\n",
                        report.dla_rows.size(), report.lstm_rows.size(), cfg.out_dir.c_str());
        } else if (exp2->parsed()) {
            print_sweep(pdla::run_experiment2(build_config(opts, 2)));
        } else if (exp3->parsed()) {
            print_sweep(pdla::run_experiment3(build_config(opts, 3)));
        } else if (mapca_cmd->parsed()) {
            pdla::Matrix y = pdla::load_matrix_csv(y_path);
            pdla::Matrix yhat = pdla::load_matrix_csv(yhat_path);
            pdla::MapcaReport report = pdla::mapca(y, yhat, tol);
            std::printf("MAPCA = %.4f%% (%zu / %zu within tol %g)\n", report.accuracy_percent,
                        report.hits, report.n_z, report.tol);
        }
    } catch (const pdla::HarnessError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::string message = e.what();
        bool io = message.find("cannot open") != std::string::npos ||
                  message.find("cannot write") != std::string::npos;
        return io ? kIoError : kValidationError;
    } catch (const pdla::DatasetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::string message = e.what();
        return message.find("cannot") != std::string::npos ? kIoError : kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return 0;
}
