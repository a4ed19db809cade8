#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmgesture/augmentation.hpp"
#include "mmgesture/common.hpp"
#include "mmgesture/segmentation.hpp"

namespace mmg {

enum class InputNormalization : std::uint8_t {
  kFixedScale = 0,      // log1p(x / input_scale), scale fixed per dataset
  kPerSequenceMax = 1,  // log1p(x / max(sequence))
};

/// Frame model: conv(3x3, same) -> batch norm -> ReLU -> 2x2 max pool per
/// entry of conv_filters, then a ReLU embedding layer with dropout. Sequence
/// model: one LSTM layer whose final hidden state feeds a linear head.
struct ModelConfig {
  int input_rows = 32;
  int input_cols = 32;
  std::vector<int> conv_filters{8, 16, 32};
  int embedding_size = 128;
  int recurrent_hidden = 128;
  int classes = kNumGestureClasses;
  double dropout = 0.5;
  InputNormalization normalization = InputNormalization::kFixedScale;
  double input_scale = 0.0;  // <= 0: derived from the training set

  static ModelConfig full();
  static ModelConfig lite();

  void validate() const;
  int pooled_rows() const;
  int pooled_cols() const;
  std::size_t flattened_size() const;
  std::size_t parameter_count() const;
};

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
};

class Model {
 public:
  Model() = default;

  /// Fan-in scaled uniform weights for conv and dense layers, small uniform
  /// recurrent weights, unit BN gains, forget-gate bias of one.
  static Model initialize(const ModelConfig& config, std::uint64_t seed);

  /// Every parameter zero, including BN gains.
  static Model zeros(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }
  std::vector<Tensor>& tensors() { return tensors_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }
  std::size_t parameter_count() const;

 private:
  explicit Model(ModelConfig config);

  ModelConfig config_;
  std::vector<Tensor> tensors_;  // declaration order
};

/// Names and shapes of every parameter tensor in declaration order.
std::vector<Tensor> make_parameter_layout(const ModelConfig& config);

/// Logits for one sequence, dropout off.
std::vector<double> forward(const Model& model, const DraiSequence& seq);

std::vector<double> softmax(std::span<const double> logits);

/// -Y[c] + log sum_j exp(Y[j]), evaluated with max subtraction.
double cross_entropy_loss(std::span<const double> logits, int true_class);

struct Gradients {
  std::vector<Tensor> tensors;  // same layout as the model
  std::vector<double> logits;
  double loss = 0.0;
};

/// Exact gradients of the loss for one labeled sequence. With a dropout seed
/// the pass runs in training mode using a mask drawn from that seed.
Gradients backward(const Model& model, const DraiSequence& seq, int true_class,
                   std::optional<std::uint64_t> dropout_seed = std::nullopt);

struct EpochStats {
  int epoch = 0;
  int steps = 0;
  double mean_loss = 0.0;
};

struct TrainConfig {
  double learning_rate = 1e-4;
  int batch_size = 128;
  int epochs = 100;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_steps = 0;          // 0: no limit
  double target_loss = 0.0;   // stop once a batch loss falls below; 0: off
  std::function<void(const EpochStats&)> on_epoch;

  static TrainConfig plain();      // 100 epochs
  static TrainConfig augmented();  // 200 epochs
  void validate() const;
};

struct TrainResult {
  Model model;
  std::vector<double> loss_curve;   // mean loss per epoch
  std::vector<double> step_losses;  // mean batch loss per optimizer step
  int steps = 0;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adam mini-batch training. Batches are drawn from length buckets so each
/// batch holds sequences of similar length; every sequence is run at its own
/// length. Deterministic for a fixed seed.
TrainResult train(std::span<const DraiSequence> dataset, const ModelConfig& model_config,
                  const TrainConfig& train_config);

/// Median of per-sequence maxima, used as the fixed input scale.
double derive_input_scale(std::span<const DraiSequence> dataset);

struct Prediction {
  GestureKind kind = GestureKind::kNegative;
  double confidence = 0.0;
  std::vector<double> probabilities;
};

Prediction predict(const Model& model, const DraiSequence& seq);
Prediction predict(const Model& model, const SegmentWindow& segment);

/// Checkpoint: "DIGM", u16 version, config block, u64 parameter count, then
/// every tensor in declaration order as little-endian float32.
void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::string& path);
Model load_model(std::istream& in);
Model load_model(const std::string& path);

struct LabeledProfile {
  TrajectoryProfile profile;
  GestureKind label = GestureKind::kNegative;
};

enum class ProfileAlignment : std::uint8_t { kNone, kCentroid };

/// Dynamic time warping with Euclidean point cost.
double dtw_distance(const TrajectoryProfile& a, const TrajectoryProfile& b,
                    ProfileAlignment alignment = ProfileAlignment::kNone);

/// Label of the nearest template; the first template wins ties.
GestureKind dtw_nearest_neighbor(const TrajectoryProfile& query,
                                 std::span<const LabeledProfile> templates,
                                 ProfileAlignment alignment = ProfileAlignment::kCentroid);

}  // namespace mmg
