#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emotrend/embed.hpp"
#include "emotrend/lexicon.hpp"
#include "emotrend/rng.hpp"
#include "emotrend/tensor.hpp"

namespace emotrend {

// Named parameter with its gradient accumulator.
struct ParamBlock {
    std::string name;
    std::vector<double> value;
    std::vector<double> grad;

    void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

struct Example {
    DocMatrix x;
    int label = 0;  // canonical emotion index
};

using Dataset = std::vector<Example>;

// --- multi-channel text CNN -------------------------------------------------

struct CnnChannel {
    int width = 0;
    int filters = 0;
};

struct CnnConfig {
    std::vector<CnnChannel> channels = {{3, 64}, {4, 64}, {5, 64}};
    int input_len = 50;   // L
    int input_dim = 100;  // d
    double dropout = 0.5;
    std::uint64_t seed = 1;

    int feature_size() const;
    void validate() const;
};

// Preset matching the narrower two-channel variant (filter widths 3 and 4).
CnnConfig cnn_two_channel_preset(int input_len, int input_dim, int filters = 64);

class CnnModel {
  public:
    explicit CnnModel(const CnnConfig& config);

    const CnnConfig& config() const { return config_; }
    std::vector<ParamBlock>& params() { return params_; }
    const std::vector<ParamBlock>& params() const { return params_; }
    std::size_t param_count() const;

    // Inference pass; dropout inactive.
    std::array<double, kNumEmotions> forward(const DocMatrix& x) const;

    // One example's loss; accumulates parameter gradients. dropout_rng null
    // disables dropout (used by the gradient check).
    double forward_backward(const DocMatrix& x, int label, double class_weight, Rng* dropout_rng);

  private:
    CnnConfig config_;
    std::vector<ParamBlock> params_;  // per channel: w, b; then dense_w, dense_b
};

// --- LSTM baseline -----------------------------------------------------------

struct LstmConfig {
    int hidden = 64;
    int input_len = 50;
    int input_dim = 100;
    std::uint64_t seed = 1;
};

class LstmModel {
  public:
    explicit LstmModel(const LstmConfig& config);

    const LstmConfig& config() const { return config_; }
    std::vector<ParamBlock>& params() { return params_; }
    const std::vector<ParamBlock>& params() const { return params_; }
    std::size_t param_count() const;

    std::array<double, kNumEmotions> forward(const DocMatrix& x) const;
    double forward_backward(const DocMatrix& x, int label, double class_weight);

  private:
    LstmConfig config_;
    std::vector<ParamBlock> params_;  // w_x (4H x d), w_h (4H x H), b (4H), dense_w, dense_b
};

// --- training / evaluation ---------------------------------------------------

struct EvalMetrics {
    double accuracy = 0.0;
    std::array<double, kNumEmotions> per_class_f1{};
    std::array<std::size_t, kNumEmotions> support{};
    double macro_f1 = 0.0;  // over classes present in truth or predictions
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    EvalMetrics test;
};

struct TrainReport {
    std::vector<double> train_loss;       // index = epoch - 1
    std::vector<EpochMetrics> checkpoints;  // epoch 0 = initialization
};

struct TrainOptions {
    int epochs = 50;
    int batch_size = 32;
    double learning_rate = 1e-3;  // Adam
    std::vector<int> checkpoint_epochs = {10, 20, 30, 40, 50};
    bool class_weights = false;   // inverse-frequency weighting
    std::uint64_t seed = 1;
};

// Seeded shuffle then split; train gets floor(n * train_frac). Classes present
// in the input but absent from the train side are reported in *warnings.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_frac, std::uint64_t seed);
std::pair<Dataset, Dataset> split_dataset(const Dataset& all, double train_frac,
                                          std::uint64_t seed,
                                          std::vector<std::string>* warnings = nullptr);

EvalMetrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted);
EvalMetrics evaluate(const CnnModel& model, const Dataset& test);
EvalMetrics evaluate(const LstmModel& model, const Dataset& test);

// Mini-batch Adam on softmax cross-entropy. Deterministic for a fixed seed;
// non-finite loss aborts with DataError.
TrainReport train_model(CnnModel& model, const Dataset& train, const Dataset& test,
                        const TrainOptions& options);
TrainReport train_model(LstmModel& model, const Dataset& train, const Dataset& test,
                        const TrainOptions& options);

// Central finite differences (h = 1e-4) against the analytic gradients over
// every parameter; returns the max relative error. Intended for tiny configs.
double gradient_check(CnnModel& model, const DocMatrix& x, int label);
double gradient_check(LstmModel& model, const DocMatrix& x, int label);

std::array<double, kNumEmotions> softmax(const std::array<double, kNumEmotions>& logits);

// Versioned JSON checkpoint: config + flat parameter array.
void save_cnn(const CnnModel& model, const std::string& path);
CnnModel load_cnn(const std::string& path);
void save_lstm(const LstmModel& model, const std::string& path);
LstmModel load_lstm(const std::string& path);

// epoch,loss,accuracy,<8 per-class F1 columns>,macro_f1 rows.
void write_metrics_csv(const TrainReport& report, const std::string& path);

}  // namespace emotrend
