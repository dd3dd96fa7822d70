#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emotrend/corpus.hpp"
#include "emotrend/embed.hpp"
#include "emotrend/errors.hpp"
#include "emotrend/lexicon.hpp"
#include "emotrend/nn.hpp"
#include "emotrend/numfmt.hpp"
#include "emotrend/svg.hpp"
#include "emotrend/textprep.hpp"
#include "emotrend/topics.hpp"
#include "emotrend/trends.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return 0;
    std::uint64_t h = 1469598103934665603ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

struct StageTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

// Shared flags and pipeline file locations.
struct RunContext {
    std::string out_dir = "run";
    std::uint64_t seed = 1;
    std::string prep_config_path;

    std::string stopwords_path = "data/stopwords_en.txt";
    std::string function_words_path = "data/function_words_en.txt";
    bool no_stemming = false;
    std::size_t min_token_len = 2;
    double english_threshold = 0.15;

    fs::path in_run(const std::string& name) const { return fs::path(out_dir) / name; }

    emotrend::PrepConfig prep_config() const {
        emotrend::PrepConfig config;
        if (!prep_config_path.empty()) {
            config = emotrend::load_prep_config(prep_config_path);
        } else {
            config.stopwords = emotrend::load_term_set(stopwords_path);
            config.function_words = emotrend::load_term_set(function_words_path);
            config.apply_stemming = !no_stemming;
            config.min_token_len = min_token_len;
            config.english_threshold = english_threshold;
        }
        config.validate();
        return config;
    }

    json prep_snapshot() const {
        if (!prep_config_path.empty()) {
            return {{"config_file", prep_config_path},
                    {"config_hash", fnv1a_file(prep_config_path)}};
        }
        return {{"stopwords", stopwords_path},
                {"stopwords_hash", fnv1a_file(stopwords_path)},
                {"function_words", function_words_path},
                {"function_words_hash", fnv1a_file(function_words_path)},
                {"apply_stemming", !no_stemming},
                {"min_token_len", min_token_len},
                {"english_threshold", english_threshold}};
    }
};

// manifest.json accumulates one entry per completed stage: seeds, input
// hashes, record counts and timing. Timings vary run to run; everything else
// is reproducible.
void record_stage(const RunContext& ctx, const std::string& stage, const json& details,
                  long long elapsed_ms) {
    const fs::path path = ctx.in_run("manifest.json");
    json manifest;
    {
        std::ifstream in(path);
        if (in) {
            manifest = json::parse(in, nullptr, false);
            if (manifest.is_discarded()) manifest = json::object();
        }
    }
    if (!manifest.contains("stages")) manifest["stages"] = json::object();
    json entry = details;
    entry["seed"] = ctx.seed;
    entry["elapsed_ms"] = elapsed_ms;
    manifest["stages"][stage] = entry;
    std::ofstream out(path);
    out << manifest.dump(2) << '\n';
}

emotrend::Corpus load_corpus_file(const std::string& path, const emotrend::DayWindow& window) {
    return emotrend::ingest_jsonl(path, window, nullptr);
}

emotrend::DayWindow window_from_flags(const std::string& from, const std::string& to) {
    const auto start = emotrend::parse_civil_day(from);
    const auto end = emotrend::parse_civil_day(to);
    if (!start || !end) throw emotrend::ConfigError("bad --from/--to date (want YYYY-MM-DD)");
    return emotrend::make_window(*start, *end);
}

std::string lexicon_path_or_default(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("EMOTREND_LEXICON")) return env;
    return "data/demo_emotion_lexicon.tsv";
}

int run_ingest(const RunContext& ctx, const std::string& input, const std::string& from,
               const std::string& to, const std::vector<std::string>& keep,
               const std::vector<std::string>& drop, bool no_dedup, bool english_filter) {
    StageTimer timer;
    const auto window = window_from_flags(from, to);
    emotrend::IngestStats stats;
    emotrend::Corpus corpus = emotrend::ingest_jsonl(input, window, &stats);

    if (!no_dedup) {
        std::size_t removed = 0;
        corpus = emotrend::deduplicate(corpus, &removed);
        stats.deduplicated = removed;
    }
    std::size_t filtered_relevance = 0;
    if (!keep.empty()) {
        corpus = emotrend::filter_relevant(corpus, keep, drop, &filtered_relevance);
    }
    std::size_t filtered_language = 0;
    if (english_filter) {
        const auto config = ctx.prep_config();
        emotrend::Corpus kept;
        kept.window = corpus.window;
        for (const auto& tweet : corpus.tweets) {
            if (emotrend::is_english(tweet.text, config)) kept.tweets.push_back(tweet);
            else ++filtered_language;
        }
        corpus = std::move(kept);
    }
    stats.filtered = filtered_relevance + filtered_language;
    stats.retained = corpus.size();
    if (corpus.empty()) throw emotrend::DataError("no tweets retained after filtering");

    fs::create_directories(ctx.out_dir);
    emotrend::write_jsonl(corpus, ctx.in_run("corpus.jsonl").string());
    json stats_json = {
        {"ingested", stats.ingested},       {"malformed", stats.malformed},
        {"out_of_window", stats.out_of_window}, {"deduplicated", stats.deduplicated},
        {"filtered", stats.filtered},       {"filtered_relevance", filtered_relevance},
        {"filtered_language", filtered_language}, {"retained", stats.retained},
    };
    {
        std::ofstream out(ctx.in_run("ingest_stats.json"));
        out << stats_json.dump(2) << '\n';
    }
    json details = stats_json;
    details["input"] = input;
    details["input_hash"] = fnv1a_file(input);
    details["window"] = {{"from", from}, {"to", to}};
    details["keep"] = keep;
    details["drop"] = drop;
    details["dedup"] = !no_dedup;
    details["english_filter"] = english_filter;
    if (english_filter) details["prep"] = ctx.prep_snapshot();
    record_stage(ctx, "ingest", details, timer.elapsed_ms());
    std::cout << "ingest: " << stats.ingested << " in window, " << stats.malformed
              << " malformed, " << stats.deduplicated << " duplicates removed, " << stats.filtered
              << " filtered, " << stats.retained << " retained\n";
    return 0;
}

int run_prep(const RunContext& ctx, const std::string& corpus_path, const std::string& from,
             const std::string& to) {
    StageTimer timer;
    const auto config = ctx.prep_config();
    const auto corpus = load_corpus_file(corpus_path, window_from_flags(from, to));
    std::vector<emotrend::TokenDoc> docs;
    docs.reserve(corpus.size());
    std::size_t empty_docs = 0;
    for (const auto& tweet : corpus.tweets) {
        docs.push_back(emotrend::preprocess(tweet, config));
        if (docs.back().tokens.empty()) ++empty_docs;
    }
    fs::create_directories(ctx.out_dir);
    emotrend::write_token_docs(docs, ctx.in_run("tokens.tsv").string());
    record_stage(ctx, "prep",
                 {{"input", corpus_path},
                  {"input_hash", fnv1a_file(corpus_path)},
                  {"docs", docs.size()},
                  {"empty_docs", empty_docs},
                  {"prep", ctx.prep_snapshot()}},
                 timer.elapsed_ms());
    std::cout << "prep: " << docs.size() << " docs tokenized, " << empty_docs << " empty\n";
    return 0;
}

int run_annotate(const RunContext& ctx, const std::string& corpus_path, const std::string& from,
                 const std::string& to, const std::string& lexicon_flag,
                 const std::string& intensifier_flag) {
    StageTimer timer;
    const auto config = ctx.prep_config();
    const auto corpus = load_corpus_file(corpus_path, window_from_flags(from, to));
    const std::string lexicon_path = lexicon_path_or_default(lexicon_flag);
    const auto lexicon = emotrend::load_nrc(lexicon_path);
    if (lexicon.empty()) std::cerr << "warning: lexicon has no emotion entries\n";

    emotrend::IntensifierTable intensifiers;
    if (intensifier_flag != "none") {
        intensifiers = intensifier_flag.empty() ? emotrend::default_intensifiers()
                                                : emotrend::load_intensifiers(intensifier_flag);
    }
    const auto annotations = emotrend::annotate_corpus(corpus, config, lexicon, intensifiers);
    std::size_t labeled = 0;
    for (const auto& a : annotations) labeled += a.vector.label ? 1 : 0;

    fs::create_directories(ctx.out_dir);
    emotrend::write_annotations_csv(annotations, ctx.in_run("annotations.csv").string());
    record_stage(ctx, "annotate",
                 {{"input", corpus_path},
                  {"input_hash", fnv1a_file(corpus_path)},
                  {"lexicon", lexicon_path},
                  {"lexicon_hash", fnv1a_file(lexicon_path)},
                  {"lexicon_entries", lexicon.surface_entry_count()},
                  {"intensifiers", intensifier_flag.empty() ? "default" : intensifier_flag},
                  {"annotated", annotations.size()},
                  {"labeled", labeled},
                  {"unlabeled", annotations.size() - labeled},
                  {"prep", ctx.prep_snapshot()}},
                 timer.elapsed_ms());
    std::cout << "annotate: " << annotations.size() << " tweets, " << labeled << " labeled ("
              << lexicon.surface_entry_count() << " lexicon words)\n";
    return 0;
}

int run_topics_fit(const RunContext& ctx, const std::string& tokens_path, const std::string& kind,
                   int k, int iters, double alpha, double beta) {
    StageTimer timer;
    const auto docs = emotrend::read_token_docs(tokens_path);
    json details = {{"input", tokens_path},
                    {"input_hash", fnv1a_file(tokens_path)},
                    {"model", kind},
                    {"k", k},
                    {"iters", iters}};
    fs::create_directories(ctx.out_dir);
    if (kind == "lda") {
        const double a = alpha > 0.0 ? alpha : emotrend::default_lda_alpha(k);
        const double b = beta > 0.0 ? beta : emotrend::kDefaultLdaBeta;
        const auto model = emotrend::lda_fit(docs, k, a, b, iters, ctx.seed);
        emotrend::save_lda(model, ctx.in_run("model_lda.json").string());
        details["alpha"] = a;
        details["beta"] = b;
        details["docs"] = model.docs.size();
        details["vocabulary"] = model.vocab.size();
        std::cout << "topics fit: lda k=" << k << " on " << model.docs.size() << " docs, V="
                  << model.vocab.size() << '\n';
    } else if (kind == "plsa") {
        const auto model = emotrend::plsa_fit(docs, k, iters, ctx.seed);
        emotrend::save_plsa(model, ctx.in_run("model_plsa.json").string());
        details["docs"] = model.docs.size();
        details["vocabulary"] = model.vocab.size();
        if (!model.log_likelihood.empty()) {
            details["final_log_likelihood"] = model.log_likelihood.back();
        }
        std::cout << "topics fit: plsa k=" << k << " on " << model.docs.size() << " docs, V="
                  << model.vocab.size() << '\n';
    } else {
        throw emotrend::ConfigError("unknown topic model kind: " + kind);
    }
    record_stage(ctx, "topics", details, timer.elapsed_ms());
    return 0;
}

int run_trends(const RunContext& ctx, const std::string& corpus_path, const std::string& from,
               const std::string& to, const std::string& model_path,
               const std::string& annotations_path, int top_n, int tail_days) {
    StageTimer timer;
    const auto corpus = load_corpus_file(corpus_path, window_from_flags(from, to));
    const auto buckets = emotrend::bucket_by_day(corpus);

    std::vector<emotrend::DailySeries> all_series;
    std::vector<emotrend::TrendReportRow> trend_rows;
    std::vector<emotrend::MeanCiRow> ci_rows;

    auto add_fits = [&](const emotrend::DailySeries& series) {
        if (series.size() >= 3) {
            trend_rows.push_back({series.name, "full", emotrend::ols_fit(series)});
            if (tail_days > 0) {
                const auto tail = emotrend::tail_window(series, tail_days);
                if (tail.size() >= 3) {
                    trend_rows.push_back({series.name, "tail" + std::to_string(tail_days),
                                          emotrend::ols_fit(tail)});
                }
            }
        }
        if (series.size() >= 2) {
            ci_rows.push_back({series.name, emotrend::mean_ci(series, 0.95), series.size()});
        }
    };

    if (!model_path.empty()) {
        const auto model = emotrend::load_lda(model_path);
        const auto ranked = emotrend::rank_topics_by_mass(model);
        const int n_topics = std::min<int>(top_n, model.k);
        for (int i = 0; i < n_topics; ++i) {
            auto series = emotrend::topic_trend_series(model, buckets, ranked[static_cast<std::size_t>(i)]);
            add_fits(series);
            all_series.push_back(std::move(series));
        }
    }
    if (!annotations_path.empty()) {
        const auto annotations = emotrend::read_annotations_csv(annotations_path);
        auto emotion_series = emotrend::emotion_trend_series(annotations, buckets);
        for (auto& [emotion, series] : emotion_series) {
            add_fits(series);
            all_series.push_back(std::move(series));
        }
    }
    if (all_series.empty()) {
        throw emotrend::ConfigError("trends: need --model and/or --annotations");
    }

    fs::create_directories(ctx.out_dir);
    emotrend::write_series_csv(all_series, ctx.in_run("series.csv").string());
    emotrend::write_trend_report_csv(trend_rows, ctx.in_run("trend_report.csv").string());
    emotrend::write_mean_ci_csv(ci_rows, ctx.in_run("mean_ci.csv").string());
    record_stage(ctx, "trends",
                 {{"corpus", corpus_path},
                  {"corpus_hash", fnv1a_file(corpus_path)},
                  {"series", all_series.size()},
                  {"trend_fits", trend_rows.size()},
                  {"mean_cis", ci_rows.size()}},
                 timer.elapsed_ms());
    std::cout << "trends: " << all_series.size() << " series, " << trend_rows.size()
              << " fits, " << ci_rows.size() << " mean CIs\n";
    return 0;
}

struct TrainFlags {
    std::string model = "cnn";
    int epochs = 50;
    int batch = 32;
    double lr = 1e-3;
    double dropout = 0.5;
    int filters = 64;
    bool two_channel = false;
    int max_len = 50;
    int dim = 100;
    int window = 5;
    int negatives = 5;
    int w2v_epochs = 5;
    double train_frac = 0.9;
    bool class_weights = false;
};

emotrend::Dataset build_dataset(const std::vector<emotrend::TokenDoc>& docs,
                                const std::vector<emotrend::Annotation>& annotations,
                                const emotrend::EmbeddingTable& table, int max_len) {
    std::unordered_map<std::string, const emotrend::TokenDoc*> by_id;
    for (const auto& d : docs) by_id.emplace(d.tweet_id, &d);
    emotrend::Dataset data;
    for (const auto& a : annotations) {
        if (!a.vector.label) continue;  // unlabeled tweets are not training data
        const auto it = by_id.find(a.tweet_id);
        if (it == by_id.end() || it->second->tokens.empty()) continue;
        data.push_back({emotrend::embed_doc(*it->second, table, max_len),
                        static_cast<int>(*a.vector.label)});
    }
    return data;
}

int run_train(const RunContext& ctx, const std::string& tokens_path,
              const std::string& annotations_path, const TrainFlags& flags) {
    StageTimer timer;
    const auto docs = emotrend::read_token_docs(tokens_path);
    const auto annotations = emotrend::read_annotations_csv(annotations_path);

    emotrend::Word2VecConfig w2v;
    w2v.dim = flags.dim;
    w2v.window = flags.window;
    w2v.negatives = flags.negatives;
    w2v.epochs = flags.w2v_epochs;
    w2v.seed = ctx.seed;
    const auto table = emotrend::train_word2vec(docs, w2v);
    fs::create_directories(ctx.out_dir);
    emotrend::save_embeddings(table, ctx.in_run("embeddings.txt").string());

    const auto dataset = build_dataset(docs, annotations, table, flags.max_len);
    if (dataset.empty()) throw emotrend::DataError("no labeled examples to train on");
    std::vector<std::string> warnings;
    const auto [train, test] = emotrend::split_dataset(dataset, flags.train_frac, ctx.seed, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

    emotrend::TrainOptions options;
    options.epochs = flags.epochs;
    options.batch_size = flags.batch;
    options.learning_rate = flags.lr;
    options.class_weights = flags.class_weights;
    options.seed = ctx.seed;

    json details = {{"tokens", tokens_path},
                    {"tokens_hash", fnv1a_file(tokens_path)},
                    {"annotations", annotations_path},
                    {"annotations_hash", fnv1a_file(annotations_path)},
                    {"model", flags.model},
                    {"examples", dataset.size()},
                    {"train", train.size()},
                    {"test", test.size()},
                    {"epochs", flags.epochs},
                    {"batch", flags.batch},
                    {"learning_rate", flags.lr},
                    {"dropout", flags.dropout},
                    {"filters", flags.filters},
                    {"two_channel", flags.two_channel},
                    {"max_len", flags.max_len},
                    {"train_frac", flags.train_frac},
                    {"class_weights", flags.class_weights},
                    {"word2vec",
                     {{"dim", flags.dim},
                      {"window", flags.window},
                      {"negatives", flags.negatives},
                      {"epochs", flags.w2v_epochs}}}};

    if (flags.model == "cnn") {
        emotrend::CnnConfig config;
        if (flags.two_channel) {
            config = emotrend::cnn_two_channel_preset(flags.max_len, flags.dim, flags.filters);
        } else {
            config.channels = {{3, flags.filters}, {4, flags.filters}, {5, flags.filters}};
            config.input_len = flags.max_len;
            config.input_dim = flags.dim;
        }
        config.dropout = flags.dropout;
        config.seed = ctx.seed;
        emotrend::CnnModel model(config);
        const auto report = emotrend::train_model(model, train, test, options);
        emotrend::save_cnn(model, ctx.in_run("checkpoint_cnn.json").string());
        emotrend::write_metrics_csv(report, ctx.in_run("metrics_cnn.csv").string());
        details["parameters"] = model.param_count();
        if (!report.checkpoints.empty()) {
            details["final_test_accuracy"] = report.checkpoints.back().test.accuracy;
            details["final_macro_f1"] = report.checkpoints.back().test.macro_f1;
        }
    } else if (flags.model == "lstm") {
        emotrend::LstmConfig config;
        config.hidden = 64;
        config.input_len = flags.max_len;
        config.input_dim = flags.dim;
        config.seed = ctx.seed;
        emotrend::LstmModel model(config);
        const auto report = emotrend::train_model(model, train, test, options);
        emotrend::save_lstm(model, ctx.in_run("checkpoint_lstm.json").string());
        emotrend::write_metrics_csv(report, ctx.in_run("metrics_lstm.csv").string());
        details["parameters"] = model.param_count();
        if (!report.checkpoints.empty()) {
            details["final_test_accuracy"] = report.checkpoints.back().test.accuracy;
            details["final_macro_f1"] = report.checkpoints.back().test.macro_f1;
        }
    } else {
        throw emotrend::ConfigError("unknown classifier kind: " + flags.model);
    }
    record_stage(ctx, "train", details, timer.elapsed_ms());
    std::cout << "train: " << flags.model << " on " << train.size() << "/" << test.size()
              << " train/test examples\n";
    return 0;
}

int run_eval(const RunContext& ctx, const std::string& tokens_path,
             const std::string& annotations_path, const std::string& model_kind,
             const std::string& checkpoint_flag, const std::string& embeddings_flag,
             int max_len, double train_frac) {
    StageTimer timer;
    const auto docs = emotrend::read_token_docs(tokens_path);
    const auto annotations = emotrend::read_annotations_csv(annotations_path);
    const std::string embeddings_path =
        embeddings_flag.empty() ? ctx.in_run("embeddings.txt").string() : embeddings_flag;
    const auto table = emotrend::load_embeddings(embeddings_path);
    const auto dataset = build_dataset(docs, annotations, table, max_len);
    if (dataset.empty()) throw emotrend::DataError("no labeled examples to evaluate on");
    const auto [train, test] = emotrend::split_dataset(dataset, train_frac, ctx.seed, nullptr);
    if (test.empty()) throw emotrend::DataError("empty test split");

    const std::string checkpoint = checkpoint_flag.empty()
                                       ? ctx.in_run("checkpoint_" + model_kind + ".json").string()
                                       : checkpoint_flag;
    emotrend::EvalMetrics metrics;
    if (model_kind == "cnn") {
        const auto model = emotrend::load_cnn(checkpoint);
        metrics = emotrend::evaluate(model, test);
    } else if (model_kind == "lstm") {
        const auto model = emotrend::load_lstm(checkpoint);
        metrics = emotrend::evaluate(model, test);
    } else {
        throw emotrend::ConfigError("unknown classifier kind: " + model_kind);
    }

    std::ofstream out(ctx.in_run("eval_" + model_kind + ".csv"));
    out << "accuracy";
    for (int e = 0; e < emotrend::kNumEmotions; ++e) {
        out << ",f1_" << emotrend::emotion_name(static_cast<emotrend::Emotion>(e));
    }
    out << ",macro_f1\n" << emotrend::format_double(metrics.accuracy);
    for (int e = 0; e < emotrend::kNumEmotions; ++e) {
        out << ',' << emotrend::format_double(metrics.per_class_f1[static_cast<std::size_t>(e)]);
    }
    out << ',' << emotrend::format_double(metrics.macro_f1) << '\n';

    record_stage(ctx, "eval",
                 {{"checkpoint", checkpoint},
                  {"checkpoint_hash", fnv1a_file(checkpoint)},
                  {"test", test.size()},
                  {"accuracy", metrics.accuracy},
                  {"macro_f1", metrics.macro_f1}},
                 timer.elapsed_ms());
    std::cout << "eval: accuracy " << metrics.accuracy << ", macro F1 " << metrics.macro_f1
              << " on " << test.size() << " examples\n";
    return 0;
}

int run_report(const RunContext& ctx, const std::string& series_path) {
    StageTimer timer;
    const std::string path = series_path.empty() ? ctx.in_run("series.csv").string() : series_path;
    std::ifstream in(path);
    if (!in) throw emotrend::IoError("cannot open series file: " + path);

    std::vector<emotrend::DailySeries> series;
    std::unordered_map<std::string, std::size_t> series_index;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        std::stringstream ss(line);
        std::string day_str, name, value_str;
        if (!std::getline(ss, day_str, ',') || !std::getline(ss, name, ',') ||
            !std::getline(ss, value_str)) {
            throw emotrend::ParseError(path + ":" + std::to_string(lineno) + ": bad series row");
        }
        const auto day = emotrend::parse_civil_day(day_str);
        if (!day) throw emotrend::ParseError(path + ":" + std::to_string(lineno) + ": bad day");
        auto [it, inserted] = series_index.try_emplace(name, series.size());
        if (inserted) {
            emotrend::DailySeries s;
            s.name = name;
            // Emotion series carry percentages; topic series carry proportions.
            s.unit = name.rfind("topic_", 0) == 0 ? emotrend::SeriesUnit::proportion
                                                  : emotrend::SeriesUnit::percent;
            series.push_back(std::move(s));
        }
        series[it->second].points.push_back(
            {emotrend::days_from_civil(*day), std::stod(value_str)});
    }

    std::vector<emotrend::DailySeries> topic_series, emotion_series;
    for (const auto& s : series) {
        if (s.name.rfind("topic_", 0) == 0) topic_series.push_back(s);
        else emotion_series.push_back(s);
    }
    fs::create_directories(ctx.out_dir);
    int charts = 0;
    if (!topic_series.empty()) {
        emotrend::write_line_chart_svg(topic_series, "Topic trends by day",
                                       ctx.in_run("topic_trends.svg").string());
        ++charts;
    }
    if (!emotion_series.empty()) {
        emotrend::write_line_chart_svg(emotion_series, "Emotion trends by day (percent)",
                                       ctx.in_run("emotion_trends.svg").string());
        ++charts;
    }
    if (charts == 0) throw emotrend::DataError("no series to chart");
    record_stage(ctx, "report",
                 {{"series_file", path}, {"series_hash", fnv1a_file(path)}, {"charts", charts}},
                 timer.elapsed_ms());
    std::cout << "report: wrote " << charts << " charts\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"emotion and semantic trend pipeline for timestamped short texts"};
    app.require_subcommand(1);
    // Global flags may appear after the subcommand name.
    app.fallthrough();

    RunContext ctx;
    app.add_option("--out", ctx.out_dir, "run directory for stage outputs")->capture_default_str();
    app.add_option("--seed", ctx.seed, "seed for every stochastic stage")->capture_default_str();
    app.add_option("--config", ctx.prep_config_path, "preprocessing config file");
    app.add_option("--stopwords", ctx.stopwords_path, "stopword list")->capture_default_str();
    app.add_option("--function-words", ctx.function_words_path, "function word list")
        ->capture_default_str();
    app.add_flag("--no-stemming", ctx.no_stemming, "disable stemming");
    app.add_option("--min-token-len", ctx.min_token_len, "minimum token length")
        ->capture_default_str();
    app.add_option("--english-threshold", ctx.english_threshold,
                   "function-word ratio for the language filter")
        ->capture_default_str();

    std::string from = "2020-04-28";
    std::string to = "2020-06-01";
    app.add_option("--from", from, "window start day")->capture_default_str();
    app.add_option("--to", to, "window end day")->capture_default_str();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "read JSONL, filter, dedup, write corpus");
    std::string ingest_in;
    std::vector<std::string> keep_terms, drop_terms;
    bool no_dedup = false, english_filter = false;
    ingest->add_option("--in", ingest_in, "input JSONL file")->required();
    ingest->add_option("--keep", keep_terms, "relevance keep terms");
    ingest->add_option("--drop", drop_terms, "relevance drop terms");
    ingest->add_flag("--no-dedup", no_dedup, "skip duplicate removal");
    ingest->add_flag("--english", english_filter, "drop non-English tweets");

    // prep
    auto* prep = app.add_subcommand("prep", "tokenize the corpus");
    std::string corpus_flag;
    prep->add_option("--corpus", corpus_flag, "corpus JSONL (default <out>/corpus.jsonl)");

    // annotate
    auto* annotate = app.add_subcommand("annotate", "emotion-score every tweet");
    std::string lexicon_flag, intensifier_flag;
    annotate->add_option("--corpus", corpus_flag, "corpus JSONL (default <out>/corpus.jsonl)");
    annotate->add_option("--lexicon", lexicon_flag,
                         "NRC-format lexicon (or EMOTREND_LEXICON env var)");
    annotate->add_option("--intensifiers", intensifier_flag,
                         "intensifier TSV, or 'none' to disable");

    // topics fit
    auto* topics = app.add_subcommand("topics", "topic models");
    auto* fit = topics->add_subcommand("fit", "fit a topic model on tokens");
    std::string topics_model = "lda", tokens_flag;
    int topic_k = 100, topic_iters = 1000;
    double alpha = 0.0, beta = 0.0;
    fit->add_option("--model", topics_model, "lda or plsa")->capture_default_str();
    fit->add_option("--k", topic_k, "topic count")->capture_default_str();
    fit->add_option("--iters", topic_iters, "sweeps / EM iterations")->capture_default_str();
    fit->add_option("--alpha", alpha, "doc-topic prior (default 50/k)");
    fit->add_option("--beta", beta, "topic-word prior (default 0.01)");
    fit->add_option("--tokens", tokens_flag, "token file (default <out>/tokens.tsv)");
    topics->require_subcommand(1);

    // trends
    auto* trends = app.add_subcommand("trends", "daily series, OLS fits, mean CIs");
    std::string model_flag, annotations_flag;
    int top_n = 5, tail_days = 14;
    trends->add_option("--corpus", corpus_flag, "corpus JSONL (default <out>/corpus.jsonl)");
    trends->add_option("--model", model_flag, "LDA model JSON (default <out>/model_lda.json)");
    trends->add_option("--annotations", annotations_flag,
                       "annotations CSV (default <out>/annotations.csv)");
    trends->add_option("--top", top_n, "number of top topics")->capture_default_str();
    trends->add_option("--tail", tail_days, "extra trailing-window fit length (0 disables)")
        ->capture_default_str();

    // train
    auto* train = app.add_subcommand("train", "word2vec + emotion classifier");
    TrainFlags train_flags;
    train->add_option("--tokens", tokens_flag, "token file (default <out>/tokens.tsv)");
    train->add_option("--annotations", annotations_flag,
                      "annotations CSV (default <out>/annotations.csv)");
    train->add_option("--model", train_flags.model, "cnn or lstm")->capture_default_str();
    train->add_option("--epochs", train_flags.epochs, "training epochs")->capture_default_str();
    train->add_option("--batch", train_flags.batch, "batch size")->capture_default_str();
    train->add_option("--lr", train_flags.lr, "Adam learning rate")->capture_default_str();
    train->add_option("--dropout", train_flags.dropout, "CNN dropout rate")->capture_default_str();
    train->add_option("--filters", train_flags.filters, "filters per channel")
        ->capture_default_str();
    train->add_flag("--two-channel", train_flags.two_channel, "filter widths 3,4 instead of 3,4,5");
    train->add_option("--max-len", train_flags.max_len, "document matrix rows")
        ->capture_default_str();
    train->add_option("--dim", train_flags.dim, "embedding dimension")->capture_default_str();
    train->add_option("--window", train_flags.window, "word2vec window")->capture_default_str();
    train->add_option("--negatives", train_flags.negatives, "word2vec negative samples")
        ->capture_default_str();
    train->add_option("--w2v-epochs", train_flags.w2v_epochs, "word2vec epochs")
        ->capture_default_str();
    train->add_option("--train-frac", train_flags.train_frac, "training fraction")
        ->capture_default_str();
    train->add_flag("--class-weights", train_flags.class_weights,
                    "inverse-frequency class weights");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved checkpoint on the test split");
    std::string eval_model = "cnn", checkpoint_flag, embeddings_flag;
    int eval_max_len = 50;
    double eval_train_frac = 0.9;
    eval_cmd->add_option("--tokens", tokens_flag, "token file (default <out>/tokens.tsv)");
    eval_cmd->add_option("--annotations", annotations_flag,
                         "annotations CSV (default <out>/annotations.csv)");
    eval_cmd->add_option("--model", eval_model, "cnn or lstm")->capture_default_str();
    eval_cmd->add_option("--checkpoint", checkpoint_flag, "checkpoint JSON");
    eval_cmd->add_option("--embeddings", embeddings_flag, "embedding file");
    eval_cmd->add_option("--max-len", eval_max_len, "document matrix rows")->capture_default_str();
    eval_cmd->add_option("--train-frac", eval_train_frac, "training fraction used for the split")
        ->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "render SVG charts from series.csv");
    std::string series_flag;
    report->add_option("--series", series_flag, "series CSV (default <out>/series.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n\n" << app.help() << '\n';
        return 2;
    }

    const auto default_in_run = [&](const std::string& flag, const char* name) {
        return flag.empty() ? ctx.in_run(name).string() : flag;
    };

    try {
        if (ingest->parsed()) {
            return run_ingest(ctx, ingest_in, from, to, keep_terms, drop_terms, no_dedup,
                              english_filter);
        }
        if (prep->parsed()) {
            return run_prep(ctx, default_in_run(corpus_flag, "corpus.jsonl"), from, to);
        }
        if (annotate->parsed()) {
            return run_annotate(ctx, default_in_run(corpus_flag, "corpus.jsonl"), from, to,
                                lexicon_flag, intensifier_flag);
        }
        if (topics->parsed()) {
            return run_topics_fit(ctx, default_in_run(tokens_flag, "tokens.tsv"), topics_model,
                                  topic_k, topic_iters, alpha, beta);
        }
        if (trends->parsed()) {
            std::string model_path = model_flag;
            if (model_path.empty() && fs::exists(ctx.in_run("model_lda.json"))) {
                model_path = ctx.in_run("model_lda.json").string();
            }
            std::string ann_path = annotations_flag;
            if (ann_path.empty() && fs::exists(ctx.in_run("annotations.csv"))) {
                ann_path = ctx.in_run("annotations.csv").string();
            }
            return run_trends(ctx, default_in_run(corpus_flag, "corpus.jsonl"), from, to,
                              model_path, ann_path, top_n, tail_days);
        }
        if (train->parsed()) {
            return run_train(ctx, default_in_run(tokens_flag, "tokens.tsv"),
                             default_in_run(annotations_flag, "annotations.csv"), train_flags);
        }
        if (eval_cmd->parsed()) {
            return run_eval(ctx, default_in_run(tokens_flag, "tokens.tsv"),
                            default_in_run(annotations_flag, "annotations.csv"), eval_model,
                            checkpoint_flag, embeddings_flag, eval_max_len, eval_train_frac);
        }
        if (report->parsed()) {
            return run_report(ctx, series_flag);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << app.help() << '\n';
    return 2;
}
