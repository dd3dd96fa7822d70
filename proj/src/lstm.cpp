#include <algorithm>
#include <cmath>

#include "emotrend/errors.hpp"
#include "emotrend/nn.hpp"

namespace emotrend {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Gate order inside the 4H blocks: input, forget, cell candidate, output.
struct StepTrace {
    std::vector<double> i, f, g, o;
    std::vector<double> c, tanh_c;
    std::vector<double> h_prev, c_prev;
    const double* x = nullptr;
};

}  // namespace

LstmModel::LstmModel(const LstmConfig& config) : config_(config) {
    if (config_.hidden < 1 || config_.input_len < 1 || config_.input_dim < 1) {
        throw ConfigError("bad lstm config");
    }
    Rng rng(config_.seed);
    const int h = config_.hidden;
    const int d = config_.input_dim;
    auto glorot = [&](std::size_t n, int fan_in, int fan_out) {
        std::vector<double> w(n);
        const double s = std::sqrt(6.0 / (fan_in + fan_out));
        for (auto& x : w) x = (rng.uniform() * 2.0 - 1.0) * s;
        return w;
    };

    ParamBlock w_x;
    w_x.name = "w_x";
    w_x.value = glorot(static_cast<std::size_t>(4 * h) * d, d, h);
    w_x.grad.assign(w_x.value.size(), 0.0);
    params_.push_back(std::move(w_x));

    ParamBlock w_h;
    w_h.name = "w_h";
    w_h.value = glorot(static_cast<std::size_t>(4 * h) * h, h, h);
    w_h.grad.assign(w_h.value.size(), 0.0);
    params_.push_back(std::move(w_h));

    ParamBlock b;
    b.name = "b";
    b.value.assign(static_cast<std::size_t>(4 * h), 0.0);
    // Forget-gate bias starts at 1 so early training does not erase state.
    for (int i = h; i < 2 * h; ++i) b.value[static_cast<std::size_t>(i)] = 1.0;
    b.grad.assign(b.value.size(), 0.0);
    params_.push_back(std::move(b));

    ParamBlock dense_w;
    dense_w.name = "dense_w";
    dense_w.value = glorot(static_cast<std::size_t>(kNumEmotions) * h, h, kNumEmotions);
    dense_w.grad.assign(dense_w.value.size(), 0.0);
    params_.push_back(std::move(dense_w));

    ParamBlock dense_b;
    dense_b.name = "dense_b";
    dense_b.value.assign(kNumEmotions, 0.0);
    dense_b.grad.assign(kNumEmotions, 0.0);
    params_.push_back(std::move(dense_b));
}

std::size_t LstmModel::param_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
}

namespace {

int valid_steps(const DocMatrix& x) {
    int t = 0;
    while (t < x.rows() && x.valid[static_cast<std::size_t>(t)]) ++t;
    return t;
}

void lstm_step(const std::vector<double>& w_x, const std::vector<double>& w_h,
               const std::vector<double>& b, int h, int d, const double* x_t,
               const std::vector<double>& h_prev, const std::vector<double>& c_prev,
               StepTrace& trace, std::vector<double>& h_out, std::vector<double>& c_out) {
    std::vector<double> a(static_cast<std::size_t>(4 * h));
    for (int r = 0; r < 4 * h; ++r) {
        double acc = b[static_cast<std::size_t>(r)];
        const double* wx_row = w_x.data() + static_cast<std::size_t>(r) * d;
        for (int j = 0; j < d; ++j) acc += wx_row[j] * x_t[j];
        const double* wh_row = w_h.data() + static_cast<std::size_t>(r) * h;
        for (int j = 0; j < h; ++j) acc += wh_row[j] * h_prev[static_cast<std::size_t>(j)];
        a[static_cast<std::size_t>(r)] = acc;
    }
    trace.i.resize(static_cast<std::size_t>(h));
    trace.f.resize(static_cast<std::size_t>(h));
    trace.g.resize(static_cast<std::size_t>(h));
    trace.o.resize(static_cast<std::size_t>(h));
    trace.c.resize(static_cast<std::size_t>(h));
    trace.tanh_c.resize(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        trace.i[ju] = sigmoid(a[ju]);
        trace.f[ju] = sigmoid(a[static_cast<std::size_t>(h + j)]);
        trace.g[ju] = std::tanh(a[static_cast<std::size_t>(2 * h + j)]);
        trace.o[ju] = sigmoid(a[static_cast<std::size_t>(3 * h + j)]);
        trace.c[ju] = trace.f[ju] * c_prev[ju] + trace.i[ju] * trace.g[ju];
        trace.tanh_c[ju] = std::tanh(trace.c[ju]);
    }
    trace.h_prev = h_prev;
    trace.c_prev = c_prev;
    trace.x = x_t;
    h_out.resize(static_cast<std::size_t>(h));
    c_out = trace.c;
    for (int j = 0; j < h; ++j) {
        h_out[static_cast<std::size_t>(j)] =
            trace.o[static_cast<std::size_t>(j)] * trace.tanh_c[static_cast<std::size_t>(j)];
    }
}

}  // namespace

std::array<double, kNumEmotions> LstmModel::forward(const DocMatrix& x) const {
    if (x.rows() != config_.input_len || x.cols() != config_.input_dim) {
        throw ConfigError("doc matrix shape does not match lstm config");
    }
    const int h = config_.hidden;
    const int d = config_.input_dim;
    const int steps = valid_steps(x);
    std::vector<double> h_state(static_cast<std::size_t>(h), 0.0);
    std::vector<double> c_state(static_cast<std::size_t>(h), 0.0);
    StepTrace trace;
    for (int t = 0; t < steps; ++t) {
        std::vector<double> h_next, c_next;
        lstm_step(params_[0].value, params_[1].value, params_[2].value, h, d,
                  x.data.values.data() + static_cast<std::size_t>(t) * d, h_state, c_state, trace,
                  h_next, c_next);
        h_state = std::move(h_next);
        c_state = std::move(c_next);
    }
    const auto& dense_w = params_[3].value;
    const auto& dense_b = params_[4].value;
    std::array<double, kNumEmotions> logits{};
    for (int o = 0; o < kNumEmotions; ++o) {
        double acc = dense_b[static_cast<std::size_t>(o)];
        const double* row = dense_w.data() + static_cast<std::size_t>(o) * h;
        for (int j = 0; j < h; ++j) acc += row[j] * h_state[static_cast<std::size_t>(j)];
        logits[static_cast<std::size_t>(o)] = acc;
    }
    return logits;
}

double LstmModel::forward_backward(const DocMatrix& x, int label, double class_weight) {
    if (x.rows() != config_.input_len || x.cols() != config_.input_dim) {
        throw ConfigError("doc matrix shape does not match lstm config");
    }
    const int h = config_.hidden;
    const int d = config_.input_dim;
    const int steps = valid_steps(x);

    std::vector<StepTrace> traces(static_cast<std::size_t>(steps));
    std::vector<double> h_state(static_cast<std::size_t>(h), 0.0);
    std::vector<double> c_state(static_cast<std::size_t>(h), 0.0);
    for (int t = 0; t < steps; ++t) {
        std::vector<double> h_next, c_next;
        lstm_step(params_[0].value, params_[1].value, params_[2].value, h, d,
                  x.data.values.data() + static_cast<std::size_t>(t) * d, h_state, c_state,
                  traces[static_cast<std::size_t>(t)], h_next, c_next);
        h_state = std::move(h_next);
        c_state = std::move(c_next);
    }

    auto& dense_w = params_[3];
    auto& dense_b = params_[4];
    std::array<double, kNumEmotions> logits{};
    for (int o = 0; o < kNumEmotions; ++o) {
        double acc = dense_b.value[static_cast<std::size_t>(o)];
        const double* row = dense_w.value.data() + static_cast<std::size_t>(o) * h;
        for (int j = 0; j < h; ++j) acc += row[j] * h_state[static_cast<std::size_t>(j)];
        logits[static_cast<std::size_t>(o)] = acc;
    }
    const auto probs = softmax(logits);
    const double loss =
        -class_weight * std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-300));

    std::vector<double> dh(static_cast<std::size_t>(h), 0.0);
    for (int o = 0; o < kNumEmotions; ++o) {
        const double dlogit =
            class_weight * (probs[static_cast<std::size_t>(o)] - (o == label ? 1.0 : 0.0));
        dense_b.grad[static_cast<std::size_t>(o)] += dlogit;
        double* wrow_grad = dense_w.grad.data() + static_cast<std::size_t>(o) * h;
        const double* wrow = dense_w.value.data() + static_cast<std::size_t>(o) * h;
        for (int j = 0; j < h; ++j) {
            wrow_grad[j] += dlogit * h_state[static_cast<std::size_t>(j)];
            dh[static_cast<std::size_t>(j)] += dlogit * wrow[j];
        }
    }

    auto& w_x = params_[0];
    auto& w_h = params_[1];
    auto& b = params_[2];
    std::vector<double> dc(static_cast<std::size_t>(h), 0.0);
    std::vector<double> da(static_cast<std::size_t>(4 * h));
    for (int t = steps - 1; t >= 0; --t) {
        const StepTrace& tr = traces[static_cast<std::size_t>(t)];
        std::vector<double> dh_prev(static_cast<std::size_t>(h), 0.0);
        for (int j = 0; j < h; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const double do_gate = dh[ju] * tr.tanh_c[ju];
            const double dct = dc[ju] + dh[ju] * tr.o[ju] * (1.0 - tr.tanh_c[ju] * tr.tanh_c[ju]);
            const double di = dct * tr.g[ju];
            const double df = dct * tr.c_prev[ju];
            const double dg = dct * tr.i[ju];
            da[ju] = di * tr.i[ju] * (1.0 - tr.i[ju]);
            da[static_cast<std::size_t>(h + j)] = df * tr.f[ju] * (1.0 - tr.f[ju]);
            da[static_cast<std::size_t>(2 * h + j)] = dg * (1.0 - tr.g[ju] * tr.g[ju]);
            da[static_cast<std::size_t>(3 * h + j)] = do_gate * tr.o[ju] * (1.0 - tr.o[ju]);
            dc[ju] = dct * tr.f[ju];
        }
        for (int r = 0; r < 4 * h; ++r) {
            const double grad = da[static_cast<std::size_t>(r)];
            if (grad == 0.0) continue;
            b.grad[static_cast<std::size_t>(r)] += grad;
            double* wx_grad = w_x.grad.data() + static_cast<std::size_t>(r) * d;
            for (int j = 0; j < d; ++j) wx_grad[j] += grad * tr.x[j];
            double* wh_grad = w_h.grad.data() + static_cast<std::size_t>(r) * h;
            const double* wh_row = w_h.value.data() + static_cast<std::size_t>(r) * h;
            for (int j = 0; j < h; ++j) {
                wh_grad[j] += grad * tr.h_prev[static_cast<std::size_t>(j)];
                dh_prev[static_cast<std::size_t>(j)] += grad * wh_row[j];
            }
        }
        dh = std::move(dh_prev);
    }
    return loss;
}

}  // namespace emotrend
