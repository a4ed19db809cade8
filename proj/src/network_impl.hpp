#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmgesture/classifier.hpp"

namespace mmg::detail {

// Forward pass that keeps every intermediate needed by backward(). One
// instance per thread; holds a reference to the model.
class Evaluator {
 public:
  explicit Evaluator(const Model& model);

  std::vector<double> forward(const DraiSequence& seq, std::optional<std::uint64_t> dropout_seed);

  // Accumulates (+=) parameter gradients of the loss for the last forward().
  void backward(int true_class, std::vector<Tensor>& grads);

 private:
  struct LayerCache {
    std::size_t cin = 0, cout = 0, h = 0, w = 0;
    std::vector<double> in_pad;   // [T][cin][h+2][w+2]
    std::vector<double> xhat;     // normalized conv output [T][cout][h][w]
    std::vector<double> act;      // post-ReLU [T][cout][h][w]
    std::vector<double> inv_std;  // [cout]
    std::vector<std::uint32_t> pool_idx;
  };

  double input_scale(const DraiSequence& seq) const;

  const Model& model_;
  ModelConfig cfg_;
  std::size_t T_ = 0;
  std::vector<LayerCache> layers_;
  std::vector<double> flat_, pre_embed_, embed_, mask_;
  std::vector<double> gates_, cell_, hidden_, logits_;
};

}  // namespace mmg::detail
