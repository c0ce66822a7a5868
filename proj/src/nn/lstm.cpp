#include "metroflow/nn/lstm.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/nn/activations.hpp"
#include "sgd.hpp"
#include "text_io.hpp"

#include <cmath>
#include <numeric>

namespace metroflow::nn {

namespace {

/// Mutable views of every parameter array in flat-layout order.
template <class Model, class Fn>
void for_each_array(Model& m, Fn&& fn) {
    for (auto* gate : {&m.input_gate, &m.forget_gate, &m.cell_input, &m.output_gate}) {
        fn(gate->from_input);
        fn(gate->from_hidden);
        fn(gate->peephole);
        fn(gate->bias);
    }
    fn(m.readout);
}

GateWeights gate_shape(std::size_t n_in, std::size_t n_h, bool peephole) {
    GateWeights g;
    g.from_input.assign(n_h * n_in, 0.0);
    g.from_hidden.assign(n_h * n_h, 0.0);
    if (peephole) g.peephole.assign(n_h, 0.0);
    g.bias.assign(n_h, 0.0);
    return g;
}

/// Pre-activation W_x x + W_m m + b for one gate.
void affine(const GateWeights& g, std::size_t n_in, std::size_t n_h, const double* x, const double* m, double* out) {
    for (std::size_t j = 0; j < n_h; ++j) {
        double a = g.bias[j];
        const double* wx = &g.from_input[j * n_in];
        for (std::size_t i = 0; i < n_in; ++i) a += wx[i] * x[i];
        const double* wm = &g.from_hidden[j * n_h];
        for (std::size_t k = 0; k < n_h; ++k) a += wm[k] * m[k];
        out[j] = a;
    }
}

/// Per-step activations kept for back-propagation.
struct StepCache {
    std::vector<double> i, f, gg, o, c, hc, ag;
};

struct Unrolled {
    std::vector<StepCache> steps;
    std::vector<double> m_last;
};

std::size_t step_count(const LstmModel& m, std::span<const double> window) {
    if (window.empty() || window.size() % m.input_size != 0) throw DataError("lstm: window length does not match input size");
    return window.size() / m.input_size;
}

/// Forward unroll from the zero state, caching every step.
Unrolled unroll(const LstmModel& model, std::span<const double> window) {
    const std::size_t n_in = model.input_size, n_h = model.hidden_size;
    const std::size_t T = step_count(model, window);
    Unrolled u;
    u.steps.resize(T);
    std::vector<double> m_prev(n_h, 0.0), c_prev(n_h, 0.0), ai(n_h), af(n_h), ao(n_h);
    for (std::size_t t = 0; t < T; ++t) {
        const double* x = window.data() + t * n_in;
        StepCache& s = u.steps[t];
        s.i.resize(n_h);
        s.f.resize(n_h);
        s.gg.resize(n_h);
        s.o.resize(n_h);
        s.c.resize(n_h);
        s.hc.resize(n_h);
        s.ag.resize(n_h);
        affine(model.input_gate, n_in, n_h, x, m_prev.data(), ai.data());
        affine(model.forget_gate, n_in, n_h, x, m_prev.data(), af.data());
        affine(model.cell_input, n_in, n_h, x, m_prev.data(), s.ag.data());
        affine(model.output_gate, n_in, n_h, x, m_prev.data(), ao.data());
        for (std::size_t j = 0; j < n_h; ++j) {
            s.i[j] = sigma(ai[j] + model.input_gate.peephole[j] * c_prev[j]);
            s.f[j] = sigma(af[j] + model.forget_gate.peephole[j] * c_prev[j]);
            s.gg[j] = g_centered(s.ag[j]);
            s.c[j] = s.f[j] * c_prev[j] + s.i[j] * s.gg[j];
            s.o[j] = sigma(ao[j] + model.output_gate.peephole[j] * s.c[j]);
            s.hc[j] = h_centered(s.c[j]);
            m_prev[j] = s.o[j] * s.hc[j];
        }
        c_prev = s.c;
    }
    u.m_last = std::move(m_prev);
    return u;
}

double readout(const LstmModel& model, const std::vector<double>& m) {
    double y = model.readout_bias;
    for (std::size_t j = 0; j < model.hidden_size; ++j) y += model.readout[j] * m[j];
    return y;
}

void accumulate_gate(GateWeights& g, std::size_t n_in, std::size_t n_h, const double* da, const double* x,
                     const double* m_prev) {
    for (std::size_t j = 0; j < n_h; ++j) {
        const double d = da[j];
        if (d == 0.0) continue;
        g.bias[j] += d;
        double* wx = &g.from_input[j * n_in];
        for (std::size_t i = 0; i < n_in; ++i) wx[i] += d * x[i];
        double* wm = &g.from_hidden[j * n_h];
        for (std::size_t k = 0; k < n_h; ++k) wm[k] += d * m_prev[k];
    }
}

void backprop_hidden(const GateWeights& g, std::size_t n_h, const double* da, double* dm_prev) {
    for (std::size_t j = 0; j < n_h; ++j) {
        const double d = da[j];
        if (d == 0.0) continue;
        const double* wm = &g.from_hidden[j * n_h];
        for (std::size_t k = 0; k < n_h; ++k) dm_prev[k] += d * wm[k];
    }
}

/// Adds the BPTT gradient of one window given dLoss/dy = `dy`.
void backward(const LstmModel& model, std::span<const double> window, const Unrolled& u, double dy, LstmModel& grad) {
    const std::size_t n_in = model.input_size, n_h = model.hidden_size;
    const std::size_t T = u.steps.size();
    grad.readout_bias += dy;
    for (std::size_t j = 0; j < n_h; ++j) grad.readout[j] += dy * u.m_last[j];

    std::vector<double> dm(n_h), dc_carry(n_h, 0.0), dm_prev(n_h), dc_prev(n_h);
    std::vector<double> dai(n_h), daf(n_h), dag(n_h), dao(n_h);
    const std::vector<double> zeros(n_h, 0.0);
    for (std::size_t j = 0; j < n_h; ++j) dm[j] = dy * model.readout[j];

    for (std::size_t t = T; t-- > 0;) {
        const StepCache& s = u.steps[t];
        const std::vector<double>& c_prev = t ? u.steps[t - 1].c : zeros;
        std::vector<double> m_prev_buf;
        const double* m_prev = zeros.data();
        if (t) {
            m_prev_buf.resize(n_h);
            const StepCache& p = u.steps[t - 1];
            for (std::size_t j = 0; j < n_h; ++j) m_prev_buf[j] = p.o[j] * p.hc[j];
            m_prev = m_prev_buf.data();
        }
        const double* x = window.data() + t * n_in;
        for (std::size_t j = 0; j < n_h; ++j) {
            dao[j] = dm[j] * s.hc[j] * s.o[j] * (1.0 - s.o[j]);
            const double hprime = 0.5 * (1.0 - s.hc[j] * s.hc[j]); // derivative of 2 sigma(c) - 1
            const double dc = dc_carry[j] + dm[j] * s.o[j] * hprime + dao[j] * model.output_gate.peephole[j];
            daf[j] = dc * c_prev[j] * s.f[j] * (1.0 - s.f[j]);
            dai[j] = dc * s.gg[j] * s.i[j] * (1.0 - s.i[j]);
            dag[j] = dc * s.i[j] * g_centered_prime(s.ag[j]);
            grad.input_gate.peephole[j] += dai[j] * c_prev[j];
            grad.forget_gate.peephole[j] += daf[j] * c_prev[j];
            grad.output_gate.peephole[j] += dao[j] * s.c[j];
            dc_prev[j] = dc * s.f[j] + dai[j] * model.input_gate.peephole[j] + daf[j] * model.forget_gate.peephole[j];
        }
        accumulate_gate(grad.input_gate, n_in, n_h, dai.data(), x, m_prev);
        accumulate_gate(grad.forget_gate, n_in, n_h, daf.data(), x, m_prev);
        accumulate_gate(grad.cell_input, n_in, n_h, dag.data(), x, m_prev);
        accumulate_gate(grad.output_gate, n_in, n_h, dao.data(), x, m_prev);
        if (t == 0) break;
        std::fill(dm_prev.begin(), dm_prev.end(), 0.0);
        backprop_hidden(model.input_gate, n_h, dai.data(), dm_prev.data());
        backprop_hidden(model.forget_gate, n_h, daf.data(), dm_prev.data());
        backprop_hidden(model.cell_input, n_h, dag.data(), dm_prev.data());
        backprop_hidden(model.output_gate, n_h, dao.data(), dm_prev.data());
        std::swap(dm, dm_prev);
        std::swap(dc_carry, dc_prev);
    }
}

double accumulate_gradient(const LstmModel& model, const Dataset& data, std::span<const std::size_t> rows,
                           LstmModel& grad) {
    for_each_array(grad, [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); });
    grad.readout_bias = 0.0;
    const double scale = 2.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    for (const std::size_t r : rows) {
        const auto window = data.row(r);
        const Unrolled u = unroll(model, window);
        const double err = readout(model, u.m_last) - data.targets[r];
        loss += err * err;
        backward(model, window, u, scale * err, grad);
    }
    return loss / static_cast<double>(rows.size());
}

} // namespace

std::size_t LstmModel::parameter_count() const {
    return 4 * hidden_size * (input_size + hidden_size + 1) + 3 * hidden_size + hidden_size + 1;
}

std::vector<double> LstmModel::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for_each_array(*this, [&](const std::vector<double>& v) { flat.insert(flat.end(), v.begin(), v.end()); });
    flat.push_back(readout_bias);
    return flat;
}

void LstmModel::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw DataError("lstm: parameter count mismatch");
    std::size_t pos = 0;
    for_each_array(*this, [&](std::vector<double>& v) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() + static_cast<std::ptrdiff_t>(pos + v.size()), v.begin());
        pos += v.size();
    });
    readout_bias = flat[pos];
}

LstmModel lstm_zero(std::size_t input_size, std::size_t hidden_size) {
    if (input_size == 0 || hidden_size == 0) throw DataError("lstm: sizes must be positive");
    LstmModel m;
    m.input_size = input_size;
    m.hidden_size = hidden_size;
    m.input_gate = gate_shape(input_size, hidden_size, true);
    m.forget_gate = gate_shape(input_size, hidden_size, true);
    m.cell_input = gate_shape(input_size, hidden_size, false);
    m.output_gate = gate_shape(input_size, hidden_size, true);
    m.readout.assign(hidden_size, 0.0);
    return m;
}

LstmModel lstm_init(std::size_t input_size, std::size_t hidden_size, std::uint64_t seed) {
    LstmModel m = lstm_zero(input_size, hidden_size);
    m.seed = seed;
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto* gate : {&m.input_gate, &m.forget_gate, &m.cell_input, &m.output_gate}) {
        for (auto& w : gate->from_input) w = u(rng);
        for (auto& w : gate->from_hidden) w = u(rng);
        for (auto& w : gate->peephole) w = u(rng);
    }
    for (auto& w : m.readout) w = u(rng);
    std::fill(m.forget_gate.bias.begin(), m.forget_gate.bias.end(), 1.0);
    return m;
}

LstmStepResult lstm_step(const LstmModel& model, std::span<const double> x, const LstmState& prev) {
    const std::size_t n_in = model.input_size, n_h = model.hidden_size;
    if (x.size() != n_in) throw DataError("lstm: input size mismatch");
    if (prev.m.size() != n_h || prev.c.size() != n_h) throw DataError("lstm: state size mismatch");
    std::vector<double> ai(n_h), af(n_h), ag(n_h), ao(n_h);
    affine(model.input_gate, n_in, n_h, x.data(), prev.m.data(), ai.data());
    affine(model.forget_gate, n_in, n_h, x.data(), prev.m.data(), af.data());
    affine(model.cell_input, n_in, n_h, x.data(), prev.m.data(), ag.data());
    affine(model.output_gate, n_in, n_h, x.data(), prev.m.data(), ao.data());
    LstmStepResult r;
    r.next = LstmState::zeros(n_h);
    for (std::size_t j = 0; j < n_h; ++j) {
        const double i = sigma(ai[j] + model.input_gate.peephole[j] * prev.c[j]);
        const double f = sigma(af[j] + model.forget_gate.peephole[j] * prev.c[j]);
        const double c = f * prev.c[j] + i * g_centered(ag[j]);
        const double o = sigma(ao[j] + model.output_gate.peephole[j] * c);
        r.next.c[j] = c;
        r.next.m[j] = o * h_centered(c);
    }
    r.y = readout(model, r.next.m);
    return r;
}

double lstm_forward(const LstmModel& model, std::span<const double> window) {
    return readout(model, unroll(model, window).m_last);
}

std::vector<double> lstm_gradient(const LstmModel& model, const Dataset& batch) {
    if (batch.size() == 0) throw DataError("lstm: empty batch");
    std::vector<std::size_t> rows(batch.size());
    std::iota(rows.begin(), rows.end(), 0);
    LstmModel grad = lstm_zero(model.input_size, model.hidden_size);
    accumulate_gradient(model, batch, rows, grad);
    return grad.parameters();
}

double lstm_mse(const LstmModel& model, const Dataset& data) {
    double acc = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const double e = lstm_forward(model, data.row(r)) - data.targets[r];
        acc += e * e;
    }
    return data.size() ? acc / static_cast<double>(data.size()) : 0.0;
}

LstmModel lstm_train_fixed(const Dataset& data, std::size_t hidden_size, const TrainConfig& config,
                           std::uint64_t seed) {
    LstmModel model = lstm_init(1, hidden_size, seed);
    if (data.input_size % model.input_size != 0) throw DataError("lstm: window length does not match input size");
    model.lag_window = data.input_size;
    model.train_config = config;
    LstmModel grad = lstm_zero(model.input_size, hidden_size);
    std::vector<double> params = model.parameters();
    detail::run_sgd(
        params, data.size(), config, seed,
        [&](std::span<const std::size_t> rows, std::vector<double>& flat) {
            const double loss = accumulate_gradient(model, data, rows, grad);
            flat = grad.parameters();
            return loss;
        },
        [&](const std::vector<double>& p) { model.set_parameters(p); });
    model.train_mse = lstm_mse(model, data);
    return model;
}

LstmSelection lstm_train(const Dataset& data, const std::vector<int>& candidates, const TrainConfig& config,
                         std::uint64_t seed, double tie_tolerance) {
    if (candidates.empty()) throw DataError("lstm: empty candidate set");
    const std::size_t cut = validation_start(data.size());
    const Dataset fit_part = data.slice(0, cut);
    const Dataset val_part = data.slice(cut, data.size());
    LstmSelection out;
    for (const int q : candidates) {
        if (q < 1) throw DataError("lstm: hidden sizes must be positive");
        const LstmModel m = lstm_train_fixed(fit_part, static_cast<std::size_t>(q), config, candidate_seed(seed, q));
        out.scores.push_back({q, std::sqrt(lstm_mse(m, val_part))});
    }
    const auto& chosen = out.scores[pick_hidden_size(out.scores, tie_tolerance)];
    out.hidden_size = chosen.hidden_size;
    out.validation_rmse = chosen.validation_rmse;
    out.model = lstm_train_fixed(data, static_cast<std::size_t>(chosen.hidden_size), config,
                                 candidate_seed(seed, chosen.hidden_size));
    return out;
}

LstmModel fit_lstm_series(std::span<const double> series, std::size_t lag_window, const std::vector<int>& candidates,
                          const TrainConfig& config, std::uint64_t seed, double tie_tolerance) {
    const MinMaxScaler scaler = MinMaxScaler::fit(series);
    const std::vector<double> scaled = scaler.apply(series);
    const Dataset data = make_windows(scaled, lag_window);
    LstmModel model = lstm_train(data, candidates, config, seed, tie_tolerance).model;
    model.scaler = scaler;
    model.lag_window = lag_window;
    return model;
}

std::vector<double> lstm_forecast_recursive(const LstmModel& model, std::span<const double> history, int h) {
    if (h < 1) throw DataError("lstm: horizon must be at least 1");
    const std::size_t L = model.lag_window;
    if (L == 0) throw DataError("lstm: model has no lag window");
    if (history.size() < L) throw DataError("lstm: history shorter than lag window");
    std::vector<double> window = model.scaler.apply(history.subspan(history.size() - L));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int step = 0; step < h; ++step) {
        const double y = lstm_forward(model, window);
        out.push_back(model.scaler.invert(y));
        window.erase(window.begin());
        window.push_back(y);
    }
    return out;
}

void save_lstm(std::ostream& out, const LstmModel& m) {
    const std::size_t n_in = m.input_size, n_h = m.hidden_size;
    text_io::write_header(out, "lstm");
    text_io::write_field(out, "input_size", std::to_string(n_in));
    text_io::write_field(out, "hidden_size", std::to_string(n_h));
    text_io::write_field(out, "lag_window", std::to_string(m.lag_window));
    text_io::write_field(out, "seed", std::to_string(m.seed));
    text_io::write_field(out, "train_mse", text_io::fmt(m.train_mse));
    text_io::write_scaler(out, m.scaler);
    text_io::write_train_config(out, m.train_config);
    const std::pair<const char*, const GateWeights*> gates[] = {
        {"input_gate", &m.input_gate}, {"forget_gate", &m.forget_gate},
        {"cell_input", &m.cell_input}, {"output_gate", &m.output_gate}};
    for (const auto& [name, g] : gates) {
        const std::string base = name;
        text_io::write_block(out, base + ".from_input", n_h, n_in, g->from_input);
        text_io::write_block(out, base + ".from_hidden", n_h, n_h, g->from_hidden);
        if (!g->peephole.empty()) text_io::write_block(out, base + ".peephole", n_h, 1, g->peephole);
        text_io::write_block(out, base + ".bias", n_h, 1, g->bias);
    }
    text_io::write_block(out, "readout", 1, n_h, m.readout);
    text_io::write_block(out, "readout_bias", 1, 1, {m.readout_bias});
}

LstmModel load_lstm(std::istream& in) {
    const auto doc = text_io::read_document(in, "lstm");
    LstmModel m = lstm_zero(doc.count("input_size"), doc.count("hidden_size"));
    const std::size_t n_in = m.input_size, n_h = m.hidden_size;
    m.lag_window = doc.count("lag_window");
    m.seed = doc.count("seed");
    m.train_mse = doc.number("train_mse");
    m.scaler = text_io::read_scaler(doc);
    m.train_config = text_io::read_train_config(doc);
    const std::pair<const char*, GateWeights*> gates[] = {
        {"input_gate", &m.input_gate}, {"forget_gate", &m.forget_gate},
        {"cell_input", &m.cell_input}, {"output_gate", &m.output_gate}};
    for (const auto& [name, g] : gates) {
        const std::string base = name;
        g->from_input = doc.block(base + ".from_input", n_h, n_in).values;
        g->from_hidden = doc.block(base + ".from_hidden", n_h, n_h).values;
        if (!g->peephole.empty()) g->peephole = doc.block(base + ".peephole", n_h, 1).values;
        g->bias = doc.block(base + ".bias", n_h, 1).values;
    }
    m.readout = doc.block("readout", 1, n_h).values;
    m.readout_bias = doc.block("readout_bias", 1, 1).values[0];
    return m;
}

} // namespace metroflow::nn
