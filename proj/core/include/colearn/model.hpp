#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "colearn/matrix.hpp"

namespace colearn {

enum class Activation { kRelu, kTanh };
enum class ModelKind { kLogisticRegression, kMlp };
enum class NormKind { kL2, kLinf };

// Architecture of a softmax classifier. layer_widths runs input width ->
// hidden widths... -> class count; logistic regression is the
// no-hidden-layer case.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogisticRegression;
  std::vector<int> layer_widths;               // >= 2 entries, all >= 1
  Activation activation = Activation::kTanh;   // hidden layers only

  static ModelSpec logistic_regression(int inputs, int classes);
  static ModelSpec mlp(int inputs, std::vector<int> hidden, int classes,
                       Activation activation = Activation::kTanh);

  int input_width() const { return layer_widths.front(); }
  int class_count() const { return layer_widths.back(); }
  std::size_t layer_count() const { return layer_widths.size() - 1; }

  // Weights plus biases across all layers; a pure function of layer_widths.
  std::size_t param_count() const;

  void validate() const;  // throws InvalidInputError

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Flat weight vector. Length is fixed at construction and every element is
// finite; both are enforced here so downstream arithmetic can rely on them.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::vector<double> values);  // throws on NaN/Inf
  static ParameterVector zeros(std::size_t size);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const ParameterVector&,
                         const ParameterVector&) = default;

 private:
  std::vector<double> values_;
};

// One minibatch (or a whole dataset viewed as one): features row per sample,
// integer class labels.
struct Batch {
  Matrix features;
  std::vector<int> labels;
};

// Class logits, one row per sample.
Matrix logits(const ModelSpec& spec, const ParameterVector& params,
              const Matrix& features);

// Class probabilities (softmax over logits); each row sums to 1.
Matrix forward(const ModelSpec& spec, const ParameterVector& params,
               const Matrix& features);

// Mean cross-entropy over the batch. Non-negative; zero iff the model puts
// probability 1 on every true label.
double empirical_loss(const ModelSpec& spec, const ParameterVector& params,
                      const Batch& data);

// d empirical_loss / d params via backpropagation.
ParameterVector gradient(const ModelSpec& spec, const ParameterVector& params,
                         const Batch& data);

struct LossGrad {
  double loss = 0.0;
  ParameterVector grad;
};

// Loss and gradient from one forward/backward pass.
LossGrad loss_and_gradient(const ModelSpec& spec, const ParameterVector& params,
                           const Batch& data);

// params - learning_rate * grad, elementwise. learning_rate may be negative
// (which inverts a previous step); training callers pass positive rates.
ParameterVector sgd_step(const ParameterVector& params,
                         const ParameterVector& grad, double learning_rate);

// Elementwise unweighted mean. Summation runs in vector order so the result
// is bitwise independent of who finished training first.
ParameterVector average(const std::vector<ParameterVector>& models);

// ||w_new - w_old|| / ||w_old||. Throws DegenerateReferenceError when the
// reference norm is zero.
double rel_change(const ParameterVector& w_new, const ParameterVector& w_old,
                  NormKind norm = NormKind::kL2);

// Per-layer uniform init in +-sqrt(6 / (fan_in + fan_out)), biases zero.
ParameterVector init_params(const ModelSpec& spec, std::uint64_t seed);

// FNV-1a over the raw little-endian bytes; used for provenance checks.
std::uint64_t params_hash(const ParameterVector& params);

}  // namespace colearn
