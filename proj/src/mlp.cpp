#include "shapnn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "shapnn/format.hpp"
#include "shapnn/rng.hpp"

namespace shapnn {

namespace {

void check_dims(const MlpModel& m) {
    if (m.input_dim < 1 || m.hidden_dim < 1 || m.output_dim < 1)
        throw ValidationError("model dimensions must be positive");
    const auto h = static_cast<std::size_t>(m.hidden_dim);
    const auto d = static_cast<std::size_t>(m.input_dim);
    const auto k = static_cast<std::size_t>(m.output_dim);
    if (m.w1.size() != h * d || m.b1.size() != h || m.w2.size() != k * h || m.b2.size() != k)
        throw ValidationError("model parameter shapes are inconsistent");
}

void check_mask(const MlpModel& m, const Coalition& mask) {
    if (mask.player_count() != m.hidden_dim)
        throw ValidationError("mask width " + std::to_string(mask.player_count()) +
                              " does not match hidden size " + std::to_string(m.hidden_dim));
}

void check_features(const MlpModel& m, std::size_t values, int rows) {
    if (rows < 0 || values != static_cast<std::size_t>(rows) * m.input_dim)
        throw ValidationError("feature batch does not match input dimension");
}

// Every inference path funnels through these three helpers so that masked
// evaluation, pruned models and the cached-activation game see identical
// floating-point operations.

double hidden_pre(const MlpModel& m, const double* x, int j) {
    const double* w = m.w1.data() + static_cast<std::size_t>(j) * m.input_dim;
    double acc = m.b1[static_cast<std::size_t>(j)];
    for (int d = 0; d < m.input_dim; ++d) acc += w[d] * x[d];
    return acc;
}

void hidden_activations(const MlpModel& m, const double* x, const Coalition& mask, double* a) {
    for (int j = 0; j < m.hidden_dim; ++j) {
        if (!mask.test(j)) {
            a[j] = 0.0; // removed neuron: bias and activation suppressed
            continue;
        }
        const double z = hidden_pre(m, x, j);
        a[j] = z > 0.0 ? z : 0.0;
    }
}

void output_logits(const MlpModel& m, const double* a, double* logit) {
    for (int c = 0; c < m.output_dim; ++c) {
        const double* w = m.w2.data() + static_cast<std::size_t>(c) * m.hidden_dim;
        double acc = m.b2[static_cast<std::size_t>(c)];
        for (int j = 0; j < m.hidden_dim; ++j) acc += w[j] * a[j];
        logit[c] = acc;
    }
}

int argmax(const double* v, int k) {
    int best = 0;
    for (int c = 1; c < k; ++c)
        if (v[c] > v[best]) best = c;
    return best;
}

double log_sum_exp(const double* v, int k) {
    double m = v[0];
    for (int c = 1; c < k; ++c) m = std::max(m, v[c]);
    double acc = 0.0;
    for (int c = 0; c < k; ++c) acc += std::exp(v[c] - m);
    return m + std::log(acc);
}

void check_batch(const Dataset& data, const std::vector<int>& batch_rows) {
    if (batch_rows.empty()) throw ValidationError("empty batch");
    for (int r : batch_rows)
        if (r < 0 || r >= data.size()) throw ValidationError("batch row out of range");
}

Gradients zero_gradients(const MlpModel& m) {
    Gradients g;
    g.w1.assign(m.w1.size(), 0.0);
    g.b1.assign(m.b1.size(), 0.0);
    g.w2.assign(m.w2.size(), 0.0);
    g.b2.assign(m.b2.size(), 0.0);
    return g;
}

std::vector<double> json_to_doubles(const nlohmann::json& arr, const char* field) {
    if (!arr.is_array())
        throw ValidationError(std::string("model JSON: '") + field + "' must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_string())
            throw ValidationError(std::string("model JSON: '") + field +
                                  "' entries must be hex-float strings");
        const double v = from_hexfloat(item.get<std::string>());
        if (!std::isfinite(v))
            throw ValidationError(std::string("model JSON: '") + field +
                                  "' contains a non-finite value");
        out.push_back(v);
    }
    return out;
}

nlohmann::json doubles_to_json(const std::vector<double>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : values) arr.push_back(to_hexfloat(v));
    return arr;
}

} // namespace

MlpModel init_model(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed) {
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
        throw DomainError("init_model: dimensions must be positive");
    MlpModel m;
    m.input_dim = input_dim;
    m.hidden_dim = hidden_dim;
    m.output_dim = output_dim;
    m.w1.resize(static_cast<std::size_t>(hidden_dim) * input_dim);
    m.b1.assign(static_cast<std::size_t>(hidden_dim), 0.0);
    m.w2.resize(static_cast<std::size_t>(output_dim) * hidden_dim);
    m.b2.assign(static_cast<std::size_t>(output_dim), 0.0);

    Rng rng(derive_seed(seed, 0x696e6974ULL));
    const double bound1 = std::sqrt(6.0 / (input_dim + hidden_dim));
    for (double& w : m.w1) w = rng.uniform(-bound1, bound1);
    const double bound2 = std::sqrt(6.0 / (hidden_dim + output_dim));
    for (double& w : m.w2) w = rng.uniform(-bound2, bound2);
    return m;
}

std::vector<double> forward(const MlpModel& model, const std::vector<double>& features,
                            int rows, const Coalition& mask) {
    check_dims(model);
    check_mask(model, mask);
    check_features(model, features.size(), rows);

    std::vector<double> probs(static_cast<std::size_t>(rows) * model.output_dim);
    std::vector<double> a(static_cast<std::size_t>(model.hidden_dim));
    std::vector<double> logit(static_cast<std::size_t>(model.output_dim));
    for (int r = 0; r < rows; ++r) {
        const double* x = features.data() + static_cast<std::size_t>(r) * model.input_dim;
        hidden_activations(model, x, mask, a.data());
        output_logits(model, a.data(), logit.data());
        double m = logit[0];
        for (int c = 1; c < model.output_dim; ++c) m = std::max(m, logit[c]);
        double total = 0.0;
        double* out = probs.data() + static_cast<std::size_t>(r) * model.output_dim;
        for (int c = 0; c < model.output_dim; ++c) {
            out[c] = std::exp(logit[static_cast<std::size_t>(c)] - m);
            total += out[c];
        }
        for (int c = 0; c < model.output_dim; ++c) out[c] /= total;
    }
    return probs;
}

std::vector<double> forward(const MlpModel& model, const std::vector<double>& features, int rows) {
    return forward(model, features, rows, Coalition::full(model.hidden_dim));
}

double batch_loss(const MlpModel& model, const Dataset& data,
                  const std::vector<int>& batch_rows) {
    check_dims(model);
    check_batch(data, batch_rows);
    const Coalition full = Coalition::full(model.hidden_dim);
    std::vector<double> a(static_cast<std::size_t>(model.hidden_dim));
    std::vector<double> logit(static_cast<std::size_t>(model.output_dim));
    double total = 0.0;
    for (int r : batch_rows) {
        hidden_activations(model, data.row(r), full, a.data());
        output_logits(model, a.data(), logit.data());
        total += log_sum_exp(logit.data(), model.output_dim) -
                 logit[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(r)])];
    }
    return total / static_cast<double>(batch_rows.size());
}

Gradients gradient(const MlpModel& model, const Dataset& data,
                   const std::vector<int>& batch_rows) {
    check_dims(model);
    check_batch(data, batch_rows);
    Gradients g = zero_gradients(model);

    const int h = model.hidden_dim;
    const int k = model.output_dim;
    const int d = model.input_dim;
    const double inv_batch = 1.0 / static_cast<double>(batch_rows.size());

    std::vector<double> z(static_cast<std::size_t>(h));
    std::vector<double> a(static_cast<std::size_t>(h));
    std::vector<double> logit(static_cast<std::size_t>(k));
    std::vector<double> dlogit(static_cast<std::size_t>(k));

    for (int r : batch_rows) {
        const double* x = data.row(r);
        for (int j = 0; j < h; ++j) {
            z[static_cast<std::size_t>(j)] = hidden_pre(model, x, j);
            a[static_cast<std::size_t>(j)] =
                z[static_cast<std::size_t>(j)] > 0.0 ? z[static_cast<std::size_t>(j)] : 0.0;
        }
        output_logits(model, a.data(), logit.data());

        double m = logit[0];
        for (int c = 1; c < k; ++c) m = std::max(m, logit[static_cast<std::size_t>(c)]);
        double total = 0.0;
        for (int c = 0; c < k; ++c) {
            dlogit[static_cast<std::size_t>(c)] = std::exp(logit[static_cast<std::size_t>(c)] - m);
            total += dlogit[static_cast<std::size_t>(c)];
        }
        const int label = data.labels[static_cast<std::size_t>(r)];
        for (int c = 0; c < k; ++c) {
            double p = dlogit[static_cast<std::size_t>(c)] / total;
            if (c == label) p -= 1.0;
            dlogit[static_cast<std::size_t>(c)] = p * inv_batch;
        }

        for (int c = 0; c < k; ++c) {
            const double dc = dlogit[static_cast<std::size_t>(c)];
            g.b2[static_cast<std::size_t>(c)] += dc;
            double* gw2 = g.w2.data() + static_cast<std::size_t>(c) * h;
            for (int j = 0; j < h; ++j) gw2[j] += dc * a[static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < h; ++j) {
            if (z[static_cast<std::size_t>(j)] <= 0.0) continue;
            double da = 0.0;
            for (int c = 0; c < k; ++c)
                da += model.w2[static_cast<std::size_t>(c) * h + j] *
                      dlogit[static_cast<std::size_t>(c)];
            g.b1[static_cast<std::size_t>(j)] += da;
            double* gw1 = g.w1.data() + static_cast<std::size_t>(j) * d;
            for (int i = 0; i < d; ++i) gw1[i] += da * x[i];
        }
    }
    return g;
}

Gradients finite_diff_gradient(const MlpModel& model, const Dataset& data,
                               const std::vector<int>& batch_rows, double step) {
    if (!(step > 0.0)) throw DomainError("finite_diff_gradient: step must be positive");
    check_dims(model);
    check_batch(data, batch_rows);

    MlpModel probe = model;
    Gradients g = zero_gradients(model);
    auto central = [&](std::vector<double>& params, std::vector<double>& out) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double original = params[i];
            params[i] = original + step;
            const double up = batch_loss(probe, data, batch_rows);
            params[i] = original - step;
            const double down = batch_loss(probe, data, batch_rows);
            params[i] = original;
            out[i] = (up - down) / (2.0 * step);
        }
    };
    central(probe.w1, g.w1);
    central(probe.b1, g.b1);
    central(probe.w2, g.w2);
    central(probe.b2, g.b2);
    return g;
}

MlpModel train(MlpModel model, const Dataset& data, const TrainConfig& config) {
    check_dims(model);
    if (data.size() == 0) throw ValidationError("train: empty dataset");
    if (data.dims != model.input_dim)
        throw ValidationError("train: dataset width does not match input dimension");
    for (int label : data.labels)
        if (label < 0 || label >= model.output_dim)
            throw ValidationError("train: label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(model.output_dim) + ")");
    if (config.epochs < 0) throw DomainError("train: epochs must be nonnegative");
    if (!(config.learning_rate > 0.0)) throw DomainError("train: learning rate must be positive");
    if (config.batch_size < 1) throw DomainError("train: batch size must be positive");

    Rng rng(derive_seed(config.seed, 0x747261696eULL));
    std::vector<int> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> batch;
    batch.reserve(static_cast<std::size_t>(config.batch_size));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (int start = 0; start < data.size(); start += config.batch_size) {
            const int stop = std::min(start + config.batch_size, data.size());
            batch.assign(order.begin() + start, order.begin() + stop);
            const Gradients g = gradient(model, data, batch);
            const double lr = config.learning_rate;
            for (std::size_t i = 0; i < model.w1.size(); ++i) model.w1[i] -= lr * g.w1[i];
            for (std::size_t i = 0; i < model.b1.size(); ++i) model.b1[i] -= lr * g.b1[i];
            for (std::size_t i = 0; i < model.w2.size(); ++i) model.w2[i] -= lr * g.w2[i];
            for (std::size_t i = 0; i < model.b2.size(); ++i) model.b2[i] -= lr * g.b2[i];
        }
    }
    return model;
}

EvalResult evaluate(const MlpModel& model, const Dataset& data, const Coalition& mask) {
    check_dims(model);
    check_mask(model, mask);
    if (data.size() == 0) throw ValidationError("evaluate: empty dataset");
    if (data.dims != model.input_dim)
        throw ValidationError("evaluate: dataset width does not match input dimension");

    std::vector<double> a(static_cast<std::size_t>(model.hidden_dim));
    std::vector<double> logit(static_cast<std::size_t>(model.output_dim));
    int correct = 0;
    double ce = 0.0;
    for (int r = 0; r < data.size(); ++r) {
        hidden_activations(model, data.row(r), mask, a.data());
        output_logits(model, a.data(), logit.data());
        const int label = data.labels[static_cast<std::size_t>(r)];
        if (argmax(logit.data(), model.output_dim) == label) ++correct;
        ce += log_sum_exp(logit.data(), model.output_dim) - logit[static_cast<std::size_t>(label)];
    }
    EvalResult result;
    result.correct = correct;
    result.total = data.size();
    result.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    result.cross_entropy = ce / static_cast<double>(data.size());
    return result;
}

EvalResult evaluate(const MlpModel& model, const Dataset& data) {
    return evaluate(model, data, Coalition::full(model.hidden_dim));
}

double weight_norm(const MlpModel& model, int neuron) {
    check_dims(model);
    if (neuron < 0 || neuron >= model.hidden_dim)
        throw DomainError("weight_norm: neuron index out of range");
    const double* w = model.w1.data() + static_cast<std::size_t>(neuron) * model.input_dim;
    double acc = 0.0;
    for (int d = 0; d < model.input_dim; ++d) acc += w[d] * w[d];
    return std::sqrt(acc);
}

MlpModel prune_neurons(const MlpModel& model, const Coalition& to_remove) {
    check_dims(model);
    check_mask(model, to_remove);
    const int removed = to_remove.cardinality();
    if (removed >= model.hidden_dim)
        throw DomainError("prune_neurons: at least one hidden neuron must survive");

    MlpModel out;
    out.input_dim = model.input_dim;
    out.hidden_dim = model.hidden_dim - removed;
    out.output_dim = model.output_dim;
    out.w1.reserve(static_cast<std::size_t>(out.hidden_dim) * out.input_dim);
    out.b1.reserve(static_cast<std::size_t>(out.hidden_dim));
    for (int j = 0; j < model.hidden_dim; ++j) {
        if (to_remove.test(j)) continue;
        const double* row = model.w1.data() + static_cast<std::size_t>(j) * model.input_dim;
        out.w1.insert(out.w1.end(), row, row + model.input_dim);
        out.b1.push_back(model.b1[static_cast<std::size_t>(j)]);
    }
    out.w2.reserve(static_cast<std::size_t>(model.output_dim) * out.hidden_dim);
    for (int c = 0; c < model.output_dim; ++c) {
        const double* row = model.w2.data() + static_cast<std::size_t>(c) * model.hidden_dim;
        for (int j = 0; j < model.hidden_dim; ++j)
            if (!to_remove.test(j)) out.w2.push_back(row[j]);
    }
    out.b2 = model.b2;
    return out;
}

CoalitionalGame as_game(const MlpModel& model, const Dataset& eval_data) {
    check_dims(model);
    if (eval_data.size() == 0) throw ValidationError("as_game: empty payoff dataset");
    if (eval_data.dims != model.input_dim)
        throw ValidationError("as_game: dataset width does not match input dimension");

    struct State {
        MlpModel model;
        std::vector<double> hidden; // rows x hidden_dim, ReLU already applied
        std::vector<int> labels;
        double empty_accuracy = 0.0;
    };
    auto state = std::make_shared<State>();
    state->model = model;
    state->labels = eval_data.labels;

    const int rows = eval_data.size();
    const int h = model.hidden_dim;
    state->hidden.resize(static_cast<std::size_t>(rows) * h);
    const Coalition full = Coalition::full(h);
    for (int r = 0; r < rows; ++r)
        hidden_activations(model, eval_data.row(r),
                           full, state->hidden.data() + static_cast<std::size_t>(r) * h);

    auto masked_accuracy = [state, rows, h](const Coalition& members) {
        const MlpModel& m = state->model;
        std::vector<double> a(static_cast<std::size_t>(h));
        std::vector<double> logit(static_cast<std::size_t>(m.output_dim));
        int correct = 0;
        for (int r = 0; r < rows; ++r) {
            const double* cached = state->hidden.data() + static_cast<std::size_t>(r) * h;
            for (int j = 0; j < h; ++j)
                a[static_cast<std::size_t>(j)] = members.test(j) ? cached[j] : 0.0;
            output_logits(m, a.data(), logit.data());
            if (argmax(logit.data(), m.output_dim) == state->labels[static_cast<std::size_t>(r)])
                ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(rows);
    };

    state->empty_accuracy = masked_accuracy(Coalition(h));

    return CoalitionalGame{h, [state, masked_accuracy, h](const Coalition& members) {
        if (members.player_count() != h)
            throw ValidationError("payoff coalition width does not match hidden size");
        return masked_accuracy(members) - state->empty_accuracy;
    }};
}

// --- serialization ----------------------------------------------------------

std::string model_to_json(const MlpModel& model) {
    check_dims(model);
    nlohmann::json doc{
        {"format", "shapnn.model/1"},
        {"input_dim", model.input_dim},
        {"hidden_dim", model.hidden_dim},
        {"output_dim", model.output_dim},
        {"w1", doubles_to_json(model.w1)},
        {"b1", doubles_to_json(model.b1)},
        {"w2", doubles_to_json(model.w2)},
        {"b2", doubles_to_json(model.b2)},
    };
    return doc.dump(2);
}

MlpModel model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "shapnn.model/1")
        throw ValidationError("model JSON: missing or unknown format tag");
    MlpModel m;
    m.input_dim = doc.at("input_dim").get<int>();
    m.hidden_dim = doc.at("hidden_dim").get<int>();
    m.output_dim = doc.at("output_dim").get<int>();
    m.w1 = json_to_doubles(doc.at("w1"), "w1");
    m.b1 = json_to_doubles(doc.at("b1"), "b1");
    m.w2 = json_to_doubles(doc.at("w2"), "w2");
    m.b2 = json_to_doubles(doc.at("b2"), "b2");
    check_dims(m);
    return m;
}

void save_model(const MlpModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path);
    out << model_to_json(model) << '\n';
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

} // namespace shapnn
