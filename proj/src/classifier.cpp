#include "mmgesture/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "network_impl.hpp"

namespace mmg {

TrainConfig TrainConfig::plain() { return TrainConfig{}; }

TrainConfig TrainConfig::augmented() {
  TrainConfig c;
  c.epochs = 200;
  return c;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be > 0");
  }
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  if (max_steps < 0) throw ValidationError("max_steps must be >= 0");
  if (!(target_loss >= 0.0)) throw ValidationError("target_loss must be >= 0");
}

double derive_input_scale(std::span<const DraiSequence> dataset) {
  std::vector<double> maxima;
  for (const auto& seq : dataset) {
    float mx = 0.0f;
    for (const auto& f : seq.frames) {
      for (float v : f.values) mx = std::max(mx, v);
    }
    if (mx > 0.0f) maxima.push_back(mx);
  }
  if (maxima.empty()) return 1.0;
  const auto mid = maxima.begin() + static_cast<std::ptrdiff_t>(maxima.size() / 2);
  std::nth_element(maxima.begin(), mid, maxima.end());
  return *mid;
}

namespace {

// Length buckets of this many frames share batches.
constexpr std::size_t kBucketWidth = 4;

std::vector<std::vector<std::size_t>> make_batches(std::span<const DraiSequence> dataset,
                                                   std::size_t batch_size, std::mt19937_64& rng) {
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::map<std::size_t, std::vector<std::size_t>> buckets;
  for (auto i : order) buckets[dataset[i].length() / kBucketWidth].push_back(i);
  std::vector<std::vector<std::size_t>> batches;
  for (auto& [key, members] : buckets) {
    for (std::size_t s = 0; s < members.size(); s += batch_size) {
      const std::size_t e = std::min(members.size(), s + batch_size);
      batches.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(s),
                           members.begin() + static_cast<std::ptrdiff_t>(e));
    }
  }
  std::shuffle(batches.begin(), batches.end(), rng);
  return batches;
}

}  // namespace

TrainResult train(std::span<const DraiSequence> dataset, const ModelConfig& model_config,
                  const TrainConfig& tc) {
  tc.validate();
  model_config.validate();
  if (dataset.empty()) throw ValidationError("empty training set");
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset[i].label) throw ValidationError("training sequence " + std::to_string(i) + " has no label");
    if (static_cast<int>(*dataset[i].label) >= model_config.classes) {
      throw ValidationError("training label out of range at sequence " + std::to_string(i));
    }
    if (dataset[i].frames.empty()) throw ValidationError("training sequence " + std::to_string(i) + " is empty");
  }

  ModelConfig cfg = model_config;
  if (cfg.normalization == InputNormalization::kFixedScale && !(cfg.input_scale > 0.0)) {
    cfg.input_scale = derive_input_scale(dataset);
  }

  TrainResult result;
  result.model = Model::initialize(cfg, tc.seed);
  auto& params = result.model.tensors();
  std::vector<Tensor> m = make_parameter_layout(cfg);
  std::vector<Tensor> v = make_parameter_layout(cfg);
  std::vector<Tensor> grad = make_parameter_layout(cfg);

  std::mt19937_64 rng(mix_seed(tc.seed, 0xBA7C4ULL));
  const auto batch_size = static_cast<std::size_t>(tc.batch_size);
  int step = 0;
  bool stop = false;

  for (int epoch = 0; epoch < tc.epochs && !stop; ++epoch) {
    const auto batches = make_batches(dataset, batch_size, rng);
    double epoch_loss = 0.0;
    std::size_t epoch_samples = 0;
    for (const auto& batch : batches) {
      for (auto& g : grad) std::fill(g.data.begin(), g.data.end(), 0.0);
      double batch_loss = 0.0;
      detail::Evaluator ev(result.model);
      for (auto i : batch) {
        const int cls = static_cast<int>(*dataset[i].label);
        const auto logits = ev.forward(dataset[i], mix_seed(tc.seed, (static_cast<std::uint64_t>(step) << 24) ^ i));
        const double loss = cross_entropy_loss(logits, cls);
        if (!std::isfinite(loss)) {
          std::ostringstream os;
          os << "non-finite loss at step " << step << " (epoch " << epoch << ", sample " << i << ")";
          throw TrainingError(os.str());
        }
        batch_loss += loss;
        ev.backward(cls, grad);
      }
      const double inv_n = 1.0 / static_cast<double>(batch.size());
      batch_loss *= inv_n;
      epoch_loss += batch_loss * static_cast<double>(batch.size());
      epoch_samples += batch.size();

      ++step;
      const double bc1 = 1.0 - std::pow(tc.beta1, step);
      const double bc2 = 1.0 - std::pow(tc.beta2, step);
      for (std::size_t k = 0; k < params.size(); ++k) {
        auto& p = params[k].data;
        auto& mk = m[k].data;
        auto& vk = v[k].data;
        const auto& gk = grad[k].data;
        for (std::size_t j = 0; j < p.size(); ++j) {
          const double g = gk[j] * inv_n;
          mk[j] = tc.beta1 * mk[j] + (1.0 - tc.beta1) * g;
          vk[j] = tc.beta2 * vk[j] + (1.0 - tc.beta2) * g * g;
          p[j] -= tc.learning_rate * (mk[j] / bc1) / (std::sqrt(vk[j] / bc2) + tc.epsilon);
        }
      }
      result.step_losses.push_back(batch_loss);
      if ((tc.target_loss > 0.0 && batch_loss < tc.target_loss) ||
          (tc.max_steps > 0 && step >= tc.max_steps)) {
        stop = true;
        break;
      }
    }
    const double mean = epoch_loss / static_cast<double>(std::max<std::size_t>(1, epoch_samples));
    result.loss_curve.push_back(mean);
    if (tc.on_epoch) tc.on_epoch({epoch, step, mean});
  }
  result.steps = step;
  return result;
}

Prediction predict(const Model& model, const DraiSequence& seq) {
  const auto logits = forward(model, seq);
  Prediction p;
  p.probabilities = softmax(logits);
  const auto best = std::max_element(p.probabilities.begin(), p.probabilities.end());
  p.kind = gesture_from_index(static_cast<int>(best - p.probabilities.begin()));
  p.confidence = *best;
  return p;
}

Prediction predict(const Model& model, const SegmentWindow& segment) {
  return predict(model, segment.frames);
}

}  // namespace mmg
