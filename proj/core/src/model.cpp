#include "colearn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>

#include "colearn/errors.hpp"
#include "colearn/rng.hpp"

namespace colearn {
namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw InvalidInputError(message);
}

double activate(Activation act, double z) {
  switch (act) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
  }
  return 0.0;
}

// Derivative expressed through the activation output a = act(z).
double activate_grad(Activation act, double a) {
  switch (act) {
    case Activation::kRelu:
      return a > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh:
      return 1.0 - a * a;
  }
  return 0.0;
}

void check_model_inputs(const ModelSpec& spec, const ParameterVector& params,
                        const Matrix& features) {
  spec.validate();
  check(params.size() == spec.param_count(),
        "parameter vector length does not match the model spec");
  check(features.cols == static_cast<std::size_t>(spec.input_width()),
        "feature width does not match the model input width");
}

void check_batch(const ModelSpec& spec, const Batch& data) {
  check(data.features.rows >= 1, "empty batch");
  check(data.labels.size() == data.features.rows,
        "label count does not match the sample count");
  for (int y : data.labels) {
    check(y >= 0 && y < spec.class_count(), "label out of class range");
  }
}

// z[l] = W[l] * a[l-1] + b[l]; parameters are stored per layer as the
// (out x in) weight matrix in row-major order followed by the biases.
void layer_forward(std::span<const double> params, std::size_t offset,
                   std::size_t in_width, std::size_t out_width,
                   const Matrix& input, Matrix& output) {
  const double* weights = params.data() + offset;
  const double* biases = weights + in_width * out_width;
  for (std::size_t r = 0; r < input.rows; ++r) {
    const double* x = input.data.data() + r * in_width;
    double* z = output.data.data() + r * out_width;
    for (std::size_t o = 0; o < out_width; ++o) {
      const double* w = weights + o * in_width;
      double acc = biases[o];
      for (std::size_t i = 0; i < in_width; ++i) acc += w[i] * x[i];
      z[o] = acc;
    }
  }
}

// Activations per layer: acts[0] is the input, acts[l] the output of layer
// l-1 (post-activation for hidden layers, raw logits for the last).
std::vector<Matrix> forward_pass(const ModelSpec& spec,
                                 const ParameterVector& params,
                                 const Matrix& features) {
  std::vector<Matrix> acts;
  acts.reserve(spec.layer_count() + 1);
  acts.push_back(features);
  std::size_t offset = 0;
  for (std::size_t layer = 0; layer < spec.layer_count(); ++layer) {
    const auto in_width = static_cast<std::size_t>(spec.layer_widths[layer]);
    const auto out_width =
        static_cast<std::size_t>(spec.layer_widths[layer + 1]);
    Matrix z(features.rows, out_width);
    layer_forward(params.values(), offset, in_width, out_width, acts.back(), z);
    offset += in_width * out_width + out_width;
    if (layer + 1 < spec.layer_count()) {
      for (double& v : z.data) v = activate(spec.activation, v);
    }
    acts.push_back(std::move(z));
  }
  return acts;
}

void softmax_row(std::span<const double> z, std::span<double> out) {
  double zmax = z[0];
  for (double v : z) zmax = std::max(zmax, v);
  double denom = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - zmax);
    denom += out[i];
  }
  for (std::size_t i = 0; i < z.size(); ++i) out[i] /= denom;
}

double log_sum_exp(std::span<const double> z) {
  double zmax = z[0];
  for (double v : z) zmax = std::max(zmax, v);
  double acc = 0.0;
  for (double v : z) acc += std::exp(v - zmax);
  return zmax + std::log(acc);
}

}  // namespace

ModelSpec ModelSpec::logistic_regression(int inputs, int classes) {
  ModelSpec spec;
  spec.kind = ModelKind::kLogisticRegression;
  spec.layer_widths = {inputs, classes};
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::mlp(int inputs, std::vector<int> hidden, int classes,
                         Activation activation) {
  ModelSpec spec;
  spec.kind = ModelKind::kMlp;
  spec.layer_widths.push_back(inputs);
  for (int width : hidden) spec.layer_widths.push_back(width);
  spec.layer_widths.push_back(classes);
  spec.activation = activation;
  spec.validate();
  return spec;
}

std::size_t ModelSpec::param_count() const {
  std::size_t count = 0;
  for (std::size_t layer = 0; layer + 1 < layer_widths.size(); ++layer) {
    const auto in_width = static_cast<std::size_t>(layer_widths[layer]);
    const auto out_width = static_cast<std::size_t>(layer_widths[layer + 1]);
    count += in_width * out_width + out_width;
  }
  return count;
}

void ModelSpec::validate() const {
  check(layer_widths.size() >= 2, "layer_widths needs at least two entries");
  for (int width : layer_widths) {
    check(width >= 1, "layer widths must be positive");
  }
  if (kind == ModelKind::kLogisticRegression) {
    check(layer_widths.size() == 2,
          "logistic regression has no hidden layers");
  }
}

ParameterVector::ParameterVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (double v : values_) {
    check(std::isfinite(v), "parameter vector contains a non-finite value");
  }
}

ParameterVector ParameterVector::zeros(std::size_t size) {
  return ParameterVector(std::vector<double>(size, 0.0));
}

Matrix logits(const ModelSpec& spec, const ParameterVector& params,
              const Matrix& features) {
  check_model_inputs(spec, params, features);
  auto acts = forward_pass(spec, params, features);
  return std::move(acts.back());
}

Matrix forward(const ModelSpec& spec, const ParameterVector& params,
               const Matrix& features) {
  Matrix z = logits(spec, params, features);
  for (std::size_t r = 0; r < z.rows; ++r) softmax_row(z.row(r), z.row(r));
  return z;
}

double empirical_loss(const ModelSpec& spec, const ParameterVector& params,
                      const Batch& data) {
  check_model_inputs(spec, params, data.features);
  check_batch(spec, data);
  const Matrix z = logits(spec, params, data.features);
  double total = 0.0;
  for (std::size_t r = 0; r < z.rows; ++r) {
    total += log_sum_exp(z.row(r)) - z.at(r, data.labels[r]);
  }
  return total / static_cast<double>(z.rows);
}

LossGrad loss_and_gradient(const ModelSpec& spec, const ParameterVector& params,
                           const Batch& data) {
  check_model_inputs(spec, params, data.features);
  check_batch(spec, data);
  const auto acts = forward_pass(spec, params, data.features);
  const Matrix& z = acts.back();
  const std::size_t n = z.rows;
  const auto classes = static_cast<std::size_t>(spec.class_count());

  double loss = 0.0;
  // delta of the output layer: (softmax(z) - onehot(y)) / n, which pairs the
  // softmax with the mean cross-entropy.
  Matrix delta(n, classes);
  for (std::size_t r = 0; r < n; ++r) {
    loss += log_sum_exp(z.row(r)) - z.at(r, data.labels[r]);
    softmax_row(z.row(r), delta.row(r));
    for (std::size_t c = 0; c < classes; ++c) {
      delta.at(r, c) /= static_cast<double>(n);
    }
    delta.at(r, data.labels[r]) -= 1.0 / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);

  std::vector<double> grad(spec.param_count(), 0.0);
  std::vector<std::size_t> offsets(spec.layer_count());
  std::size_t offset = 0;
  for (std::size_t layer = 0; layer < spec.layer_count(); ++layer) {
    offsets[layer] = offset;
    const auto in_width = static_cast<std::size_t>(spec.layer_widths[layer]);
    const auto out_width =
        static_cast<std::size_t>(spec.layer_widths[layer + 1]);
    offset += in_width * out_width + out_width;
  }

  const std::span<const double> values = params.values();
  for (std::size_t layer = spec.layer_count(); layer-- > 0;) {
    const auto in_width = static_cast<std::size_t>(spec.layer_widths[layer]);
    const auto out_width =
        static_cast<std::size_t>(spec.layer_widths[layer + 1]);
    const Matrix& input = acts[layer];
    double* w_grad = grad.data() + offsets[layer];
    double* b_grad = w_grad + in_width * out_width;
    for (std::size_t r = 0; r < n; ++r) {
      const double* d = delta.data.data() + r * out_width;
      const double* x = input.data.data() + r * in_width;
      for (std::size_t o = 0; o < out_width; ++o) {
        double* w_row = w_grad + o * in_width;
        for (std::size_t i = 0; i < in_width; ++i) w_row[i] += d[o] * x[i];
        b_grad[o] += d[o];
      }
    }
    if (layer == 0) break;

    // Backpropagate: delta_prev = (W^T delta) .* act'(a_prev).
    const double* weights = values.data() + offsets[layer];
    Matrix prev_delta(n, in_width);
    for (std::size_t r = 0; r < n; ++r) {
      const double* d = delta.data.data() + r * out_width;
      const double* a = input.data.data() + r * in_width;
      double* pd = prev_delta.data.data() + r * in_width;
      for (std::size_t i = 0; i < in_width; ++i) {
        double acc = 0.0;
        for (std::size_t o = 0; o < out_width; ++o) {
          acc += weights[o * in_width + i] * d[o];
        }
        pd[i] = acc * activate_grad(spec.activation, a[i]);
      }
    }
    delta = std::move(prev_delta);
  }

  return {loss, ParameterVector(std::move(grad))};
}

ParameterVector gradient(const ModelSpec& spec, const ParameterVector& params,
                         const Batch& data) {
  return loss_and_gradient(spec, params, data).grad;
}

ParameterVector sgd_step(const ParameterVector& params,
                         const ParameterVector& grad, double learning_rate) {
  check(params.size() == grad.size(),
        "parameter and gradient lengths differ");
  check(std::isfinite(learning_rate), "learning rate must be finite");
  std::vector<double> next(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    next[i] = params[i] - learning_rate * grad[i];
  }
  return ParameterVector(std::move(next));
}

ParameterVector average(const std::vector<ParameterVector>& models) {
  check(!models.empty(), "cannot average an empty model list");
  const std::size_t size = models.front().size();
  for (const ParameterVector& m : models) {
    check(m.size() == size, "model lengths differ");
  }
  std::vector<double> mean(size, 0.0);
  for (const ParameterVector& m : models) {
    for (std::size_t i = 0; i < size; ++i) mean[i] += m[i];
  }
  const auto k = static_cast<double>(models.size());
  for (double& v : mean) v /= k;
  return ParameterVector(std::move(mean));
}

double rel_change(const ParameterVector& w_new, const ParameterVector& w_old,
                  NormKind norm) {
  check(w_new.size() == w_old.size(), "vector lengths differ");
  double num = 0.0;
  double den = 0.0;
  if (norm == NormKind::kL2) {
    for (std::size_t i = 0; i < w_new.size(); ++i) {
      const double d = w_new[i] - w_old[i];
      num += d * d;
      den += w_old[i] * w_old[i];
    }
    num = std::sqrt(num);
    den = std::sqrt(den);
  } else {
    for (std::size_t i = 0; i < w_new.size(); ++i) {
      num = std::max(num, std::abs(w_new[i] - w_old[i]));
      den = std::max(den, std::abs(w_old[i]));
    }
  }
  if (den == 0.0) {
    throw DegenerateReferenceError("reference vector has zero norm");
  }
  return num / den;
}

ParameterVector init_params(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<double> values(spec.param_count());
  std::size_t offset = 0;
  for (std::size_t layer = 0; layer < spec.layer_count(); ++layer) {
    const auto fan_in = static_cast<std::size_t>(spec.layer_widths[layer]);
    const auto fan_out =
        static_cast<std::size_t>(spec.layer_widths[layer + 1]);
    const double limit =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < fan_in * fan_out; ++i) {
      values[offset + i] = rng.uniform(-limit, limit);
    }
    offset += fan_in * fan_out + fan_out;  // biases stay zero
  }
  return ParameterVector(std::move(values));
}

std::uint64_t params_hash(const ParameterVector& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : params.values()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int shift = 0; shift < 64; shift += 8) {
      h ^= (bits >> shift) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace colearn
