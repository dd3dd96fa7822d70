#include <algorithm>
#include <cmath>

#include "emotrend/errors.hpp"
#include "emotrend/nn.hpp"

namespace emotrend {

int CnnConfig::feature_size() const {
    int total = 0;
    for (const auto& ch : channels) total += ch.filters;
    return total;
}

void CnnConfig::validate() const {
    if (channels.empty()) throw ConfigError("cnn needs at least one channel");
    for (const auto& ch : channels) {
        if (ch.width < 1 || ch.filters < 1) throw ConfigError("bad channel spec");
        if (ch.width > input_len) {
            throw ConfigError("filter width exceeds document length");
        }
    }
    if (input_len < 1 || input_dim < 1) throw ConfigError("bad input shape");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must lie in [0,1)");
}

CnnConfig cnn_two_channel_preset(int input_len, int input_dim, int filters) {
    CnnConfig c;
    c.channels = {{3, filters}, {4, filters}};
    c.input_len = input_len;
    c.input_dim = input_dim;
    return c;
}

CnnModel::CnnModel(const CnnConfig& config) : config_(config) {
    config_.validate();
    Rng rng(config_.seed);
    auto glorot = [&](std::size_t n, int fan_in, int fan_out) {
        std::vector<double> w(n);
        const double s = std::sqrt(6.0 / (fan_in + fan_out));
        for (auto& x : w) x = (rng.uniform() * 2.0 - 1.0) * s;
        return w;
    };

    int channel_idx = 0;
    for (const auto& ch : config_.channels) {
        const int fan_in = ch.width * config_.input_dim;
        ParamBlock w;
        w.name = "conv" + std::to_string(channel_idx) + "_w";
        w.value = glorot(static_cast<std::size_t>(ch.filters) * fan_in, fan_in, ch.filters);
        w.grad.assign(w.value.size(), 0.0);
        params_.push_back(std::move(w));

        ParamBlock b;
        b.name = "conv" + std::to_string(channel_idx) + "_b";
        b.value.assign(static_cast<std::size_t>(ch.filters), 0.0);
        b.grad.assign(b.value.size(), 0.0);
        params_.push_back(std::move(b));
        ++channel_idx;
    }
    const int feat = config_.feature_size();
    ParamBlock dense_w;
    dense_w.name = "dense_w";
    dense_w.value = glorot(static_cast<std::size_t>(kNumEmotions) * feat, feat, kNumEmotions);
    dense_w.grad.assign(dense_w.value.size(), 0.0);
    params_.push_back(std::move(dense_w));
    ParamBlock dense_b;
    dense_b.name = "dense_b";
    dense_b.value.assign(kNumEmotions, 0.0);
    dense_b.grad.assign(kNumEmotions, 0.0);
    params_.push_back(std::move(dense_b));
}

std::size_t CnnModel::param_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
}

namespace {

struct PoolTrace {
    double value = 0.0;     // post-ReLU pooled activation
    int position = -1;      // argmax over positions
    bool active = false;    // pre-activation at argmax > 0
};

// Convolve one channel and global-max-pool each filter.
void conv_pool(const DocMatrix& x, const CnnConfig& config, int channel,
               const std::vector<double>& w, const std::vector<double>& b,
               PoolTrace* traces) {
    const auto& ch = config.channels[static_cast<std::size_t>(channel)];
    const int d = config.input_dim;
    const int positions = config.input_len - ch.width + 1;
    for (int f = 0; f < ch.filters; ++f) {
        const double* filter = w.data() + static_cast<std::size_t>(f) * ch.width * d;
        double best = -1.0;
        int best_pos = -1;
        bool best_active = false;
        for (int p = 0; p < positions; ++p) {
            double acc = b[static_cast<std::size_t>(f)];
            const double* window = x.data.values.data() + static_cast<std::size_t>(p) * d;
            const int n = ch.width * d;
            for (int i = 0; i < n; ++i) acc += filter[i] * window[i];
            const double activated = acc > 0.0 ? acc : 0.0;
            if (activated > best) {
                best = activated;
                best_pos = p;
                best_active = acc > 0.0;
            }
        }
        traces[f].value = best;
        traces[f].position = best_pos;
        traces[f].active = best_active;
    }
}

}  // namespace

std::array<double, kNumEmotions> CnnModel::forward(const DocMatrix& x) const {
    if (x.rows() != config_.input_len || x.cols() != config_.input_dim) {
        throw ConfigError("doc matrix shape does not match cnn config");
    }
    std::vector<double> feat(static_cast<std::size_t>(config_.feature_size()));
    std::vector<PoolTrace> traces(feat.size());
    int offset = 0;
    for (std::size_t c = 0; c < config_.channels.size(); ++c) {
        conv_pool(x, config_, static_cast<int>(c), params_[2 * c].value, params_[2 * c + 1].value,
                  traces.data() + offset);
        offset += config_.channels[c].filters;
    }
    for (std::size_t i = 0; i < feat.size(); ++i) feat[i] = traces[i].value;

    const auto& dense_w = params_[params_.size() - 2].value;
    const auto& dense_b = params_.back().value;
    std::array<double, kNumEmotions> logits{};
    for (int o = 0; o < kNumEmotions; ++o) {
        double acc = dense_b[static_cast<std::size_t>(o)];
        const double* row = dense_w.data() + static_cast<std::size_t>(o) * feat.size();
        for (std::size_t i = 0; i < feat.size(); ++i) acc += row[i] * feat[i];
        logits[static_cast<std::size_t>(o)] = acc;
    }
    return logits;
}

std::array<double, kNumEmotions> softmax(const std::array<double, kNumEmotions>& logits) {
    double max_logit = logits[0];
    for (const double l : logits) max_logit = std::max(max_logit, l);
    std::array<double, kNumEmotions> probs{};
    double total = 0.0;
    for (int i = 0; i < kNumEmotions; ++i) {
        probs[static_cast<std::size_t>(i)] = std::exp(logits[static_cast<std::size_t>(i)] - max_logit);
        total += probs[static_cast<std::size_t>(i)];
    }
    for (auto& p : probs) p /= total;
    return probs;
}

double CnnModel::forward_backward(const DocMatrix& x, int label, double class_weight,
                                  Rng* dropout_rng) {
    if (x.rows() != config_.input_len || x.cols() != config_.input_dim) {
        throw ConfigError("doc matrix shape does not match cnn config");
    }
    const std::size_t feat_size = static_cast<std::size_t>(config_.feature_size());
    std::vector<PoolTrace> traces(feat_size);
    int offset = 0;
    for (std::size_t c = 0; c < config_.channels.size(); ++c) {
        conv_pool(x, config_, static_cast<int>(c), params_[2 * c].value, params_[2 * c + 1].value,
                  traces.data() + offset);
        offset += config_.channels[c].filters;
    }

    // Inverted dropout on the concatenated feature vector.
    std::vector<double> feat(feat_size);
    std::vector<double> keep_scale(feat_size, 1.0);
    const double p_drop = dropout_rng ? config_.dropout : 0.0;
    for (std::size_t i = 0; i < feat_size; ++i) {
        if (p_drop > 0.0 && dropout_rng->uniform() < p_drop) {
            keep_scale[i] = 0.0;
        } else if (p_drop > 0.0) {
            keep_scale[i] = 1.0 / (1.0 - p_drop);
        }
        feat[i] = traces[i].value * keep_scale[i];
    }

    auto& dense_w = params_[params_.size() - 2];
    auto& dense_b = params_.back();
    std::array<double, kNumEmotions> logits{};
    for (int o = 0; o < kNumEmotions; ++o) {
        double acc = dense_b.value[static_cast<std::size_t>(o)];
        const double* row = dense_w.value.data() + static_cast<std::size_t>(o) * feat_size;
        for (std::size_t i = 0; i < feat_size; ++i) acc += row[i] * feat[i];
        logits[static_cast<std::size_t>(o)] = acc;
    }
    const auto probs = softmax(logits);
    const double loss =
        -class_weight * std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-300));

    std::vector<double> dfeat(feat_size, 0.0);
    for (int o = 0; o < kNumEmotions; ++o) {
        const double dlogit =
            class_weight * (probs[static_cast<std::size_t>(o)] - (o == label ? 1.0 : 0.0));
        dense_b.grad[static_cast<std::size_t>(o)] += dlogit;
        double* wrow_grad = dense_w.grad.data() + static_cast<std::size_t>(o) * feat_size;
        const double* wrow = dense_w.value.data() + static_cast<std::size_t>(o) * feat_size;
        for (std::size_t i = 0; i < feat_size; ++i) {
            wrow_grad[i] += dlogit * feat[i];
            dfeat[i] += dlogit * wrow[i];
        }
    }

    offset = 0;
    for (std::size_t c = 0; c < config_.channels.size(); ++c) {
        const auto& ch = config_.channels[c];
        auto& w = params_[2 * c];
        auto& b = params_[2 * c + 1];
        const int d = config_.input_dim;
        for (int f = 0; f < ch.filters; ++f) {
            const PoolTrace& trace = traces[static_cast<std::size_t>(offset + f)];
            const double g = dfeat[static_cast<std::size_t>(offset + f)] *
                             keep_scale[static_cast<std::size_t>(offset + f)];
            if (g == 0.0 || !trace.active) continue;  // ReLU gate or dropped unit
            b.grad[static_cast<std::size_t>(f)] += g;
            double* wgrad = w.grad.data() + static_cast<std::size_t>(f) * ch.width * d;
            const double* window =
                x.data.values.data() + static_cast<std::size_t>(trace.position) * d;
            const int n = ch.width * d;
            for (int i = 0; i < n; ++i) wgrad[i] += g * window[i];
        }
        offset += ch.filters;
    }
    return loss;
}

}  // namespace emotrend
