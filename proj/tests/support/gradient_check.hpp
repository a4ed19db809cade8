#pragma once

// Central finite-difference check of classifier gradients.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmgesture/classifier.hpp"

namespace mmg::oracle {

struct TensorGradientError {
  std::string name;
  double relative_error = 0.0;  // |g_num - g_ana| / max(|g_num|, |g_ana|), Euclidean norms
  double numeric_norm = 0.0;
};

/// Loss for a fixed dropout mask, evaluated through backward so that the
/// same mask is used for every perturbation.
inline double loss_at(const Model& model, const DraiSequence& seq, int cls,
                      std::optional<std::uint64_t> dropout_seed) {
  if (!dropout_seed) return cross_entropy_loss(forward(model, seq), cls);
  return backward(model, seq, cls, dropout_seed).loss;
}

inline std::vector<TensorGradientError> check_gradients(const Model& model, const DraiSequence& seq, int cls,
                                                        std::optional<std::uint64_t> dropout_seed = std::nullopt,
                                                        double h = 1e-5) {
  const Gradients analytic = backward(model, seq, cls, dropout_seed);
  Model probe = model;
  std::vector<TensorGradientError> out;
  for (std::size_t t = 0; t < probe.tensors().size(); ++t) {
    auto& data = probe.tensors()[t].data;
    double diff_sq = 0.0, num_sq = 0.0, ana_sq = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double keep = data[i];
      data[i] = keep + h;
      const double up = loss_at(probe, seq, cls, dropout_seed);
      data[i] = keep - h;
      const double down = loss_at(probe, seq, cls, dropout_seed);
      data[i] = keep;
      const double num = (up - down) / (2.0 * h);
      const double ana = analytic.tensors[t].data[i];
      diff_sq += (num - ana) * (num - ana);
      num_sq += num * num;
      ana_sq += ana * ana;
    }
    const double scale = std::max({std::sqrt(num_sq), std::sqrt(ana_sq), 1e-12});
    out.push_back({probe.tensors()[t].name, std::sqrt(diff_sq) / scale, std::sqrt(num_sq)});
  }
  return out;
}

/// The small network used for gradient checks: two conv layers of two
/// filters on 8x8 frames, embedding and hidden size 8.
inline ModelConfig tiny_config() {
  ModelConfig c;
  c.input_rows = 8;
  c.input_cols = 8;
  c.conv_filters = {2, 2};
  c.embedding_size = 8;
  c.recurrent_hidden = 8;
  c.classes = 7;
  c.dropout = 0.5;
  c.input_scale = 1.0;
  return c;
}

}  // namespace mmg::oracle
