#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "emotrend/errors.hpp"
#include "emotrend/nn.hpp"
#include "emotrend/numfmt.hpp"

namespace emotrend {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ConfigError("train fraction must lie in (0,1)");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    const auto train_n = static_cast<std::size_t>(static_cast<double>(n) * train_frac);
    return {std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_n)),
            std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(train_n), order.end())};
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& all, double train_frac,
                                          std::uint64_t seed, std::vector<std::string>* warnings) {
    const auto [train_idx, test_idx] = split_indices(all.size(), train_frac, seed);
    Dataset train, test;
    train.reserve(train_idx.size());
    test.reserve(test_idx.size());
    for (const auto i : train_idx) train.push_back(all[i]);
    for (const auto i : test_idx) test.push_back(all[i]);

    if (warnings) {
        std::array<bool, kNumEmotions> present{}, in_train{};
        for (const auto& e : all) present[static_cast<std::size_t>(e.label)] = true;
        for (const auto& e : train) in_train[static_cast<std::size_t>(e.label)] = true;
        for (int c = 0; c < kNumEmotions; ++c) {
            if (present[static_cast<std::size_t>(c)] && !in_train[static_cast<std::size_t>(c)]) {
                warnings->push_back(std::string("class ") + emotion_name(static_cast<Emotion>(c)) +
                                    " has no training examples");
            }
        }
    }
    return {std::move(train), std::move(test)};
}

EvalMetrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size() || truth.empty()) {
        throw DataError("metrics need equal-length, non-empty truth/prediction vectors");
    }
    std::array<std::size_t, kNumEmotions> tp{}, fp{}, fn{}, pred_count{};
    std::size_t correct = 0;
    EvalMetrics m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto t = static_cast<std::size_t>(truth[i]);
        const auto p = static_cast<std::size_t>(predicted[i]);
        ++m.support[t];
        ++pred_count[p];
        if (t == p) {
            ++tp[t];
            ++correct;
        } else {
            ++fp[p];
            ++fn[t];
        }
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

    double f1_sum = 0.0;
    std::size_t f1_classes = 0;
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
        const double precision_den = static_cast<double>(tp[c] + fp[c]);
        const double recall_den = static_cast<double>(tp[c] + fn[c]);
        const double precision = precision_den > 0 ? tp[c] / precision_den : 0.0;
        const double recall = recall_den > 0 ? tp[c] / recall_den : 0.0;
        m.per_class_f1[c] =
            precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        // Classes absent from both truth and predictions stay out of the mean.
        if (m.support[c] > 0 || pred_count[c] > 0) {
            f1_sum += m.per_class_f1[c];
            ++f1_classes;
        }
    }
    m.macro_f1 = f1_classes > 0 ? f1_sum / static_cast<double>(f1_classes) : 0.0;
    return m;
}

namespace {

int argmax_logits(const std::array<double, kNumEmotions>& logits) {
    int best = 0;
    for (int i = 1; i < kNumEmotions; ++i) {
        if (logits[static_cast<std::size_t>(i)] > logits[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
}

template <typename Model>
EvalMetrics evaluate_impl(const Model& model, const Dataset& test) {
    if (test.empty()) throw DataError("evaluation needs a non-empty test set");
    std::vector<int> truth, predicted;
    truth.reserve(test.size());
    predicted.reserve(test.size());
    for (const auto& example : test) {
        truth.push_back(example.label);
        predicted.push_back(argmax_logits(model.forward(example.x)));
    }
    return compute_metrics(truth, predicted);
}

class Adam {
  public:
    Adam(std::vector<ParamBlock>& params, double lr) : params_(params), lr_(lr) {
        for (const auto& p : params) {
            m_.emplace_back(p.value.size(), 0.0);
            v_.emplace_back(p.value.size(), 0.0);
        }
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(kBeta1, t_);
        const double bc2 = 1.0 - std::pow(kBeta2, t_);
        for (std::size_t b = 0; b < params_.size(); ++b) {
            auto& p = params_[b];
            for (std::size_t i = 0; i < p.value.size(); ++i) {
                const double g = p.grad[i];
                m_[b][i] = kBeta1 * m_[b][i] + (1.0 - kBeta1) * g;
                v_[b][i] = kBeta2 * v_[b][i] + (1.0 - kBeta2) * g * g;
                const double m_hat = m_[b][i] / bc1;
                const double v_hat = v_[b][i] / bc2;
                p.value[i] -= lr_ * m_hat / (std::sqrt(v_hat) + kEps);
            }
        }
    }

  private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    std::vector<ParamBlock>& params_;
    double lr_;
    int t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

std::array<double, kNumEmotions> class_weight_table(const Dataset& train, bool enabled) {
    std::array<double, kNumEmotions> weights;
    weights.fill(1.0);
    if (!enabled) return weights;
    std::array<std::size_t, kNumEmotions> counts{};
    for (const auto& e : train) ++counts[static_cast<std::size_t>(e.label)];
    std::size_t present = 0;
    for (const auto c : counts) present += c > 0 ? 1 : 0;
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
        if (counts[c] > 0) {
            weights[c] = static_cast<double>(train.size()) /
                         (static_cast<double>(present) * static_cast<double>(counts[c]));
        }
    }
    return weights;
}

template <typename Model, typename StepFn>
TrainReport train_impl(Model& model, const Dataset& train, const Dataset& test,
                       const TrainOptions& options, StepFn forward_backward) {
    if (train.empty()) throw DataError("training needs a non-empty train set");
    for (const auto& e : train) {
        if (e.label < 0 || e.label >= kNumEmotions) throw DataError("label out of range");
    }
    const auto weights = class_weight_table(train, options.class_weights);

    auto mean_inference_loss = [&](const Dataset& data) {
        double total = 0.0;
        for (const auto& e : data) {
            const auto probs = softmax(model.forward(e.x));
            total -= std::log(std::max(probs[static_cast<std::size_t>(e.label)], 1e-300));
        }
        return total / static_cast<double>(data.size());
    };

    TrainReport report;
    EpochMetrics init;
    init.epoch = 0;
    init.train_loss = mean_inference_loss(train);
    if (!test.empty()) init.test = evaluate_impl(model, test);
    report.checkpoints.push_back(init);

    Rng rng(options.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Adam adam(model.params(), options.learning_rate);

    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t cursor = 0;
        while (cursor < order.size()) {
            const std::size_t batch_end =
                std::min(order.size(), cursor + static_cast<std::size_t>(options.batch_size));
            for (auto& p : model.params()) p.zero_grad();
            const auto batch_n = static_cast<double>(batch_end - cursor);
            for (std::size_t i = cursor; i < batch_end; ++i) {
                const Example& e = train[order[i]];
                epoch_loss += forward_backward(
                    e.x, e.label, weights[static_cast<std::size_t>(e.label)], rng);
            }
            for (auto& p : model.params()) {
                for (auto& g : p.grad) g /= batch_n;
            }
            adam.step();
            cursor = batch_end;
        }
        epoch_loss /= static_cast<double>(train.size());
        if (!std::isfinite(epoch_loss)) {
            throw DataError("training diverged: non-finite loss at epoch " +
                            std::to_string(epoch));
        }
        report.train_loss.push_back(epoch_loss);

        const bool is_checkpoint =
            std::find(options.checkpoint_epochs.begin(), options.checkpoint_epochs.end(), epoch) !=
                options.checkpoint_epochs.end() ||
            epoch == options.epochs;
        if (is_checkpoint) {
            EpochMetrics cp;
            cp.epoch = epoch;
            cp.train_loss = epoch_loss;
            if (!test.empty()) cp.test = evaluate_impl(model, test);
            report.checkpoints.push_back(cp);
        }
    }
    return report;
}

}  // namespace

EvalMetrics evaluate(const CnnModel& model, const Dataset& test) {
    return evaluate_impl(model, test);
}

EvalMetrics evaluate(const LstmModel& model, const Dataset& test) {
    return evaluate_impl(model, test);
}

TrainReport train_model(CnnModel& model, const Dataset& train, const Dataset& test,
                        const TrainOptions& options) {
    return train_impl(model, train, test, options,
                      [&model](const DocMatrix& x, int label, double weight, Rng& rng) {
                          return model.forward_backward(x, label, weight, &rng);
                      });
}

TrainReport train_model(LstmModel& model, const Dataset& train, const Dataset& test,
                        const TrainOptions& options) {
    return train_impl(model, train, test, options,
                      [&model](const DocMatrix& x, int label, double weight, Rng&) {
                          return model.forward_backward(x, label, weight);
                      });
}

namespace {

template <typename Model, typename LossFn, typename BackFn>
double gradient_check_impl(Model& model, const DocMatrix& x, int label, LossFn loss_only,
                           BackFn backward) {
    constexpr double kStep = 1e-4;
    for (auto& p : model.params()) p.zero_grad();
    backward();

    std::vector<std::vector<double>> analytic;
    for (const auto& p : model.params()) analytic.push_back(p.grad);

    double max_rel_error = 0.0;
    auto& params = model.params();
    for (std::size_t b = 0; b < params.size(); ++b) {
        for (std::size_t i = 0; i < params[b].value.size(); ++i) {
            const double saved = params[b].value[i];
            params[b].value[i] = saved + kStep;
            const double loss_hi = loss_only();
            params[b].value[i] = saved - kStep;
            const double loss_lo = loss_only();
            params[b].value[i] = saved;
            const double numeric = (loss_hi - loss_lo) / (2.0 * kStep);
            const double a = analytic[b][i];
            const double rel =
                std::fabs(a - numeric) / std::max(std::fabs(a) + std::fabs(numeric), 1e-6);
            max_rel_error = std::max(max_rel_error, rel);
        }
    }
    (void)x;
    (void)label;
    return max_rel_error;
}

}  // namespace

double gradient_check(CnnModel& model, const DocMatrix& x, int label) {
    auto loss_only = [&]() {
        const auto probs = softmax(model.forward(x));
        return -std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-300));
    };
    auto backward = [&]() { model.forward_backward(x, label, 1.0, nullptr); };
    return gradient_check_impl(model, x, label, loss_only, backward);
}

double gradient_check(LstmModel& model, const DocMatrix& x, int label) {
    auto loss_only = [&]() {
        const auto probs = softmax(model.forward(x));
        return -std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-300));
    };
    auto backward = [&]() { model.forward_backward(x, label, 1.0); };
    return gradient_check_impl(model, x, label, loss_only, backward);
}

namespace {

nlohmann::json params_to_json(const std::vector<ParamBlock>& params) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& p : params) j[p.name] = p.value;
    return j;
}

void params_from_json(const nlohmann::json& j, std::vector<ParamBlock>& params) {
    for (auto& p : params) {
        const auto values = j.at(p.name).get<std::vector<double>>();
        if (values.size() != p.value.size()) {
            throw ParseError("checkpoint parameter " + p.name + " has wrong size");
        }
        p.value = values;
    }
}

nlohmann::json open_checkpoint(const std::string& path, const char* format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("checkpoint is not valid JSON: " + path);
    if (j.value("format", "") != format || j.value("version", 0) != 1) {
        throw ParseError("unsupported checkpoint format in " + path);
    }
    return j;
}

}  // namespace

void save_cnn(const CnnModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "emotrend-cnn";
    j["version"] = 1;
    nlohmann::json channels = nlohmann::json::array();
    for (const auto& ch : model.config().channels) {
        channels.push_back({{"width", ch.width}, {"filters", ch.filters}});
    }
    j["config"] = {{"channels", channels},
                   {"input_len", model.config().input_len},
                   {"input_dim", model.config().input_dim},
                   {"dropout", model.config().dropout},
                   {"seed", model.config().seed}};
    j["params"] = params_to_json(model.params());
    std::ofstream out(path);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    out << j.dump() << '\n';
}

CnnModel load_cnn(const std::string& path) {
    const auto j = open_checkpoint(path, "emotrend-cnn");
    CnnConfig config;
    config.channels.clear();
    for (const auto& ch : j.at("config").at("channels")) {
        config.channels.push_back({ch.at("width").get<int>(), ch.at("filters").get<int>()});
    }
    config.input_len = j.at("config").at("input_len").get<int>();
    config.input_dim = j.at("config").at("input_dim").get<int>();
    config.dropout = j.at("config").at("dropout").get<double>();
    config.seed = j.at("config").at("seed").get<std::uint64_t>();
    CnnModel model(config);
    params_from_json(j.at("params"), model.params());
    return model;
}

void save_lstm(const LstmModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "emotrend-lstm";
    j["version"] = 1;
    j["config"] = {{"hidden", model.config().hidden},
                   {"input_len", model.config().input_len},
                   {"input_dim", model.config().input_dim},
                   {"seed", model.config().seed}};
    j["params"] = params_to_json(model.params());
    std::ofstream out(path);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    out << j.dump() << '\n';
}

LstmModel load_lstm(const std::string& path) {
    const auto j = open_checkpoint(path, "emotrend-lstm");
    LstmConfig config;
    config.hidden = j.at("config").at("hidden").get<int>();
    config.input_len = j.at("config").at("input_len").get<int>();
    config.input_dim = j.at("config").at("input_dim").get<int>();
    config.seed = j.at("config").at("seed").get<std::uint64_t>();
    LstmModel model(config);
    params_from_json(j.at("params"), model.params());
    return model;
}

void write_metrics_csv(const TrainReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open metrics file for writing: " + path);
    out << "epoch,loss,accuracy";
    for (int e = 0; e < kNumEmotions; ++e) out << ",f1_" << emotion_name(static_cast<Emotion>(e));
    out << ",macro_f1\n";
    for (const auto& cp : report.checkpoints) {
        out << cp.epoch << ',' << format_double(cp.train_loss) << ','
            << format_double(cp.test.accuracy);
        for (int e = 0; e < kNumEmotions; ++e) {
            out << ',' << format_double(cp.test.per_class_f1[static_cast<std::size_t>(e)]);
        }
        out << ',' << format_double(cp.test.macro_f1) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace emotrend
