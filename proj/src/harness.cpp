#include "pdla/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pdla {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::vector<int> parse_int_list(const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(std::stoi(trim(item)));
    }
    if (out.empty()) throw HarnessError("empty sweep list");
    return out;
}

void write_svg(const TrendSeries& series, const std::string& path) {
    constexpr int width = 640, height = 320, margin = 40;
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << series.label
        << "</text>\n";
    if (!series.points.empty()) {
        std::int64_t lo = series.points.front().second, hi = lo;
        std::size_t max_step = 1;
        for (const auto& [step, value] : series.points) {
            lo = std::min(lo, value);
            hi = std::max(hi, value);
            max_step = std::max(max_step, step);
        }
        if (hi == lo) hi = lo + 1;
        out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
        for (const auto& [step, value] : series.points) {
            double x = margin + (width - 2.0 * margin) * static_cast<double>(step) /
                                    static_cast<double>(max_step);
            double y = height - margin -
                       (height - 2.0 * margin) * static_cast<double>(value - lo) /
                           static_cast<double>(hi - lo);
            out << format_double(x) << ',' << format_double(y) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

// One sweep point: encode, skip, replay, score next-step predictions
// against the retained observations.
struct SweepPointResult {
    double mapca_percent = 0.0;
    TrendSeries trend;
};

SweepPointResult run_sweep_point(const ExemplarSet& data, const ExperimentConfig& cfg,
                                 int sks, int learning_extent, const std::string& label) {
    std::vector<IntegerChunk> chunks;
    chunks.reserve(data.size());
    for (const Exemplar& ex : data.exemplars) {
        chunks.push_back(encode(ex.features, cfg.encoder));
    }
    std::vector<IntegerChunk> stream = apply_sks(chunks, SksPolicy{sks});

    DlaConfig dla = cfg.dla;
    dla.learning_extent = learning_extent;
    MemoryStore store(dla);
    std::vector<Prediction> predictions = run_episode(store, stream);

    Matrix y, yhat;
    SweepPointResult result;
    result.trend.label = label;
    for (std::size_t t = 0; t < predictions.size(); ++t) {
        // prediction t corresponds to stream position t+1 = exemplar (t+1)*sks
        std::size_t exemplar_index = (t + 1) * static_cast<std::size_t>(sks);
        y.push_back(data.exemplars[exemplar_index].features);
        yhat.push_back(decode(predictions[t].selected, cfg.encoder));
        result.trend.points.emplace_back(t + 1, predictions[t].extrapolated.units.front());
    }
    result.mapca_percent = mapca(y, yhat, dla.tolerance).accuracy_percent;
    return result;
}

void write_sweep_csv(const SweepReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write file: " + path);
    out << "# parameter=" << report.parameter_name << '\n';
    out << "# seed=" << report.seed << '\n';
    out << "# config_hash=" << report.config_hash << '\n';
    out << "value,mapca_percent\n";
    char buf[64];
    for (const SweepRow& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.4f\n", row.parameter_value, row.mapca_percent);
        out << buf;
    }
}

std::string trend_path(const ExperimentConfig& cfg, const std::string& stem, int value) {
    return cfg.out_dir + "/trend_" + stem + "_" + std::to_string(value) + ".csv";
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw HarnessError("cannot open config: " + path);
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw HarnessError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        try {
            if (key == "experiment") cfg.experiment = std::stoi(value);
            else if (key == "dataset") {
                if (value == "bundled") cfg.source = DatasetSource::Bundled;
                else if (value == "synth") cfg.source = DatasetSource::Synth;
                else { cfg.source = DatasetSource::CsvPath; cfg.csv_path = value; }
            }
            else if (key == "synth_n") cfg.synth_n = std::stoul(value);
            else if (key == "synth_arity") cfg.synth_arity = std::stoul(value);
            else if (key == "synth_classes") cfg.synth_classes = std::stoul(value);
            else if (key == "scale_digits") cfg.encoder.scale_digits = std::stoi(value);
            else if (key == "learning_extent") cfg.dla.learning_extent = std::stoi(value);
            else if (key == "time_limit") cfg.dla.time_limit = std::stoi(value);
            else if (key == "store_threshold") cfg.dla.store_threshold = std::stoi(value);
            else if (key == "initial_permanence") cfg.dla.initial_permanence = std::stod(value);
            else if (key == "tolerance") cfg.dla.tolerance = std::stod(value);
            else if (key == "sks_sweep") cfg.sks_sweep = parse_int_list(value);
            else if (key == "lext_sweep") cfg.lext_sweep = parse_int_list(value);
            else if (key == "lstm_hidden") cfg.lstm_hidden = std::stoul(value);
            else if (key == "lstm_epochs") cfg.lstm.epochs = std::stoi(value);
            else if (key == "lstm_learning_rate") cfg.lstm.learning_rate = std::stod(value);
            else if (key == "lstm_l2") cfg.lstm.l2_strength = std::stod(value);
            else if (key == "lstm_clip") cfg.lstm.clip_value = std::stod(value);
            else if (key == "lstm_temperature") cfg.lstm.softmax_temperature = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "out_dir") cfg.out_dir = value;
            else if (key == "svg") cfg.emit_svg = (value == "true" || value == "1");
            else throw HarnessError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw HarnessError("config line " + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::ostringstream canon;
    canon << cfg.experiment << '|' << static_cast<int>(cfg.source) << '|' << cfg.csv_path << '|'
          << cfg.synth_n << '|' << cfg.synth_arity << '|' << cfg.synth_classes << '|'
          << cfg.encoder.scale_digits << '|' << cfg.dla.learning_extent << '|'
          << cfg.dla.time_limit << '|' << cfg.dla.store_threshold << '|'
          << format_double(cfg.dla.initial_permanence) << '|' << format_double(cfg.dla.tolerance);
    for (int v : cfg.sks_sweep) canon << '|' << v;
    for (int v : cfg.lext_sweep) canon << '|' << v;
    canon << '|' << cfg.lstm_hidden << '|' << cfg.lstm.epochs << '|'
          << format_double(cfg.lstm.learning_rate) << '|' << format_double(cfg.lstm.l2_strength)
          << '|' << format_double(cfg.lstm.clip_value) << '|'
          << format_double(cfg.lstm.softmax_temperature) << '|' << cfg.seed;

    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
    for (unsigned char byte : canon.str()) {
        hash ^= byte;
        hash *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void emit_trend(const TrendSeries& series, const std::string& path, bool emit_svg) {
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write file: " + path);
    out << "step,value\n";
    for (const auto& [step, value] : series.points) {
        out << step << ',' << value << '\n';
    }
    if (emit_svg) {
        std::string svg_path = path;
        if (svg_path.size() > 4 && svg_path.ends_with(".csv")) {
            svg_path.resize(svg_path.size() - 4);
        }
        write_svg(series, svg_path + ".svg");
    }
}

TrendSeries parse_trend(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw HarnessError("cannot open file: " + path);
    TrendSeries series;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw HarnessError("malformed trend row: " + line);
        series.points.emplace_back(std::stoul(line.substr(0, comma)),
                                   std::stoll(line.substr(comma + 1)));
    }
    return series;
}

ExemplarSet resolve_dataset(const ExperimentConfig& cfg) {
    switch (cfg.source) {
        case DatasetSource::Bundled: return bundled_threat_sample();
        case DatasetSource::Synth:
            return synth_incident_set(cfg.synth_n, cfg.synth_arity, cfg.synth_classes, cfg.seed);
        case DatasetSource::CsvPath: return load_csv(cfg.csv_path);
    }
    throw HarnessError("unreachable dataset source");
}

ComparisonReport run_experiment1(const ExperimentConfig& cfg) {
    ExemplarSet data = resolve_dataset(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    std::vector<IntegerChunk> chunks;
    for (const Exemplar& ex : data.exemplars) {
        chunks.push_back(encode(ex.features, cfg.encoder));
    }

    ComparisonReport report;

    // DLA: memorize the stream online, then replay each observation as a
    // query and report every minimal-mismatch candidate.
    MemoryStore store(cfg.dla);
    run_episode(store, chunks);
    for (const IntegerChunk& chunk : chunks) {
        MatchResult match = store.pre_predict(chunk);
        Prediction prediction = store.post_predict(match);
        for (const IntegerChunk& candidate : prediction.candidates) {
            std::vector<double> features = decode(candidate, cfg.encoder);
            report.dla_rows.push_back({assign_label(features, data), std::move(features)});
        }
    }

    // LSTM baseline: tokenize rows, train, sample a single row back.
    FeatureTokenizer tokenizer(data);
    std::vector<std::vector<int>> corpus;
    for (const Exemplar& ex : data.exemplars) {
        corpus.push_back(tokenizer.tokenize(ex.features));
    }
    LstmTrainConfig lstm_cfg = cfg.lstm;
    lstm_cfg.seed = cfg.seed;
    LstmParams params = init_params(cfg.lstm_hidden, tokenizer.n_bins(), cfg.seed);
    train(params, corpus, lstm_cfg);

    std::vector<int> prime = {corpus.back().front()};
    std::vector<int> sampled =
        sample(params, prime, data.arity - 1, lstm_cfg.softmax_temperature, cfg.seed);
    std::vector<int> row_tokens = prime;
    row_tokens.insert(row_tokens.end(), sampled.begin(), sampled.end());
    std::vector<double> lstm_features = tokenizer.detokenize(row_tokens);
    report.lstm_rows.push_back({assign_label(lstm_features, data), std::move(lstm_features)});

    std::ofstream out(cfg.out_dir + "/report.txt");
    if (!out) throw HarnessError("cannot write report.txt");
    auto write_block = [&out](const char* title, const std::vector<LabeledRow>& rows) {
        out << title << '\n';
        for (const LabeledRow& row : rows) {
            out << row.label;
            for (double f : row.features) out << '\t' << format_double(f);
            out << '\n';
        }
    };
    write_block("DLA:", report.dla_rows);
    write_block("LSTM:", report.lstm_rows);
    return report;
}

SweepReport run_experiment2(const ExperimentConfig& cfg) {
    if (cfg.sks_sweep.empty()) throw HarnessError("empty SKS sweep");
    ExemplarSet data = resolve_dataset(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    SweepReport report;
    report.parameter_name = "SKS";
    report.seed = cfg.seed;
    report.config_hash = config_hash(cfg);
    for (int sks : cfg.sks_sweep) {
        SweepPointResult point = run_sweep_point(data, cfg, sks, cfg.dla.learning_extent,
                                                 "SKS " + std::to_string(sks));
        report.rows.push_back({sks, point.mapca_percent});
        emit_trend(point.trend, trend_path(cfg, "sks", sks), cfg.emit_svg);
    }
    write_sweep_csv(report, cfg.out_dir + "/sweep_sks.csv");
    return report;
}

SweepReport run_experiment3(const ExperimentConfig& cfg) {
    if (cfg.lext_sweep.empty()) throw HarnessError("empty learning-extent sweep");
    ExemplarSet data = resolve_dataset(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    SweepReport report;
    report.parameter_name = "l_ext";
    report.seed = cfg.seed;
    report.config_hash = config_hash(cfg);
    for (int extent : cfg.lext_sweep) {
        SweepPointResult point =
            run_sweep_point(data, cfg, 1, extent, "l_ext " + std::to_string(extent));
        report.rows.push_back({extent, point.mapca_percent});
        emit_trend(point.trend, trend_path(cfg, "lext", extent), cfg.emit_svg);
    }
    write_sweep_csv(report, cfg.out_dir + "/sweep_lext.csv");
    return report;
}

Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw HarnessError("cannot open file: " + path);
    Matrix matrix;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::stod(trim(cell)));
        }
        matrix.push_back(std::move(row));
    }
    if (matrix.empty()) throw HarnessError("empty matrix file: " + path);
    return matrix;
}

}  // namespace pdla
