#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "gradient_check.hpp"
#include "mmgesture/classifier.hpp"
#include "mmgesture/synthetic.hpp"

using namespace mmg;

namespace {

DraiSequence random_sequence(gen::Gen& g, std::size_t T, std::size_t rows, std::size_t cols,
                             GestureKind label) {
  DraiSequence s;
  s.label = label;
  for (std::size_t t = 0; t < T; ++t) {
    auto f = g.noise_frame(rows, cols, 3.0);
    f.frame_index = static_cast<std::int64_t>(t);
    s.frames.push_back(std::move(f));
  }
  return s;
}

// Parameter count written out layer by layer.
std::size_t count_by_hand(const ModelConfig& c) {
  std::size_t n = 0;
  int in = 1;
  for (int f : c.conv_filters) {
    n += static_cast<std::size_t>(9 * in * f + 2 * f);
    in = f;
  }
  const std::size_t shrink = std::size_t{1} << c.conv_filters.size();
  const std::size_t flat = static_cast<std::size_t>(in) * (c.input_rows / shrink) * (c.input_cols / shrink);
  const std::size_t E = c.embedding_size, H = c.recurrent_hidden, C = c.classes;
  return n + flat * E + E + 4 * H * E + 4 * H * H + 4 * H + C * H + C;
}

}  // namespace

TEST_CASE("model configurations and parameter counts") {
  const auto full = ModelConfig::full();
  const auto lite = ModelConfig::lite();
  CHECK(full.conv_filters == std::vector<int>{8, 16, 32});
  CHECK(lite.conv_filters == std::vector<int>{8, 16, 32});
  CHECK(full.embedding_size == 128);
  CHECK(full.recurrent_hidden == 128);
  CHECK(lite.embedding_size == 32);
  CHECK(lite.recurrent_hidden == 64);
  CHECK(full.classes == 7);
  CHECK(full.dropout == 0.5);
  CHECK(lite.parameter_count() == count_by_hand(lite));
  CHECK(full.parameter_count() == count_by_hand(full));
  CHECK(lite.parameter_count() == 47647);
  CHECK(lite.parameter_count() >= 30000);
  CHECK(lite.parameter_count() <= 50000);
  const auto m = Model::initialize(lite, 1);
  CHECK(m.parameter_count() == lite.parameter_count());

  ModelConfig bad = lite;
  bad.input_rows = 30;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = lite;
  bad.classes = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("parameter layout follows the conv stack 8, 16, 32") {
  const auto layout = make_parameter_layout(ModelConfig::full());
  REQUIRE(layout.size() == 9 + 7);
  CHECK(layout[0].name == "conv1.weight");
  CHECK(layout[0].shape == std::vector<std::size_t>{8, 1, 3, 3});
  CHECK(layout[3].shape == std::vector<std::size_t>{16, 8, 3, 3});
  CHECK(layout[6].shape == std::vector<std::size_t>{32, 16, 3, 3});
  CHECK(layout[9].name == "embed.weight");
  CHECK(layout[9].shape == std::vector<std::size_t>{128, 512});
  CHECK(layout.back().name == "head.bias");
}

TEST_CASE("initialization is finite, seeded and sets the documented constants") {
  const auto a = Model::initialize(ModelConfig::lite(), 5);
  const auto b = Model::initialize(ModelConfig::lite(), 5);
  const auto c = Model::initialize(ModelConfig::lite(), 6);
  bool differs = false;
  for (std::size_t t = 0; t < a.tensors().size(); ++t) {
    CHECK(a.tensors()[t].data == b.tensors()[t].data);
    differs = differs || a.tensors()[t].data != c.tensors()[t].data;
    for (double v : a.tensors()[t].data) CHECK(std::isfinite(v));
  }
  CHECK(differs);
  for (const auto& t : a.tensors()) {
    if (t.name.find("bn_gamma") != std::string::npos) {
      CHECK(std::all_of(t.data.begin(), t.data.end(), [](double v) { return v == 1.0; }));
    }
    if (t.name == "lstm.bias") {
      const std::size_t H = t.size() / 4;
      for (std::size_t i = H; i < 2 * H; ++i) CHECK(t.data[i] == 1.0);  // forget gate
    }
  }
}

TEST_CASE("forward produces C logits and a zero model is uniform") {
  gen::Gen g(40);
  const auto seq = random_sequence(g, 7, 32, 32, GestureKind::kPush);
  const auto m = Model::initialize(ModelConfig::lite(), 2);
  CHECK(forward(m, seq).size() == 7);
  const auto z = Model::zeros(ModelConfig::lite());
  const auto logits = forward(z, seq);
  for (double y : logits) CHECK(y == logits[0]);
  for (double p : softmax(logits)) CHECK(p == doctest::Approx(1.0 / 7.0));
  CHECK_THROWS_AS(forward(m, DraiSequence{}), ValidationError);
  CHECK_THROWS_AS(forward(m, random_sequence(g, 3, 16, 16, GestureKind::kPush)), ValidationError);
}

TEST_CASE("loss examples") {
  const std::vector<double> zeros(7, 0.0);
  CHECK(cross_entropy_loss(zeros, 3) == doctest::Approx(std::log(7.0)));
  const std::vector<double> y{1.0, 2.0, 3.0};
  CHECK(cross_entropy_loss(y, 2) == doctest::Approx(std::log(1.0 + std::exp(-1.0) + std::exp(-2.0))));
  CHECK(cross_entropy_loss(y, 2) == doctest::Approx(0.4076).epsilon(1e-4));
  const std::vector<double> sure{0.0, 800.0, 0.0};
  CHECK(cross_entropy_loss(sure, 1) == doctest::Approx(0.0));
  CHECK(std::isfinite(cross_entropy_loss(sure, 0)));
  CHECK_THROWS_AS(cross_entropy_loss(y, 3), ValidationError);
  CHECK_THROWS_AS(cross_entropy_loss(y, -1), ValidationError);
}

TEST_CASE("softmax is shift invariant") {
  gen::Gen g(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(7);
    for (auto& v : y) v = g.real(-5, 5);
    auto shifted = y;
    const double k = g.real(-100, 100);
    for (auto& v : shifted) v += k;
    const auto p = softmax(y);
    const auto q = softmax(shifted);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 7; ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-9));
    CHECK(std::max_element(p.begin(), p.end()) - p.begin() ==
          std::max_element(q.begin(), q.end()) - q.begin());
    CHECK(cross_entropy_loss(y, 2) == doctest::Approx(cross_entropy_loss(shifted, 2)).epsilon(1e-9));
  }
}

TEST_CASE("logit gradient is softmax minus one-hot") {
  gen::Gen g(42);
  const auto m = Model::initialize(ModelConfig::lite(), 3);
  const auto seq = random_sequence(g, 5, 32, 32, GestureKind::kLeftSwipe);
  const auto grads = backward(m, seq, 2);
  const auto p = softmax(grads.logits);
  const auto& head_bias = grads.tensors.back();
  REQUIRE(head_bias.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(head_bias.data[i] == doctest::Approx(p[i] - (i == 2 ? 1.0 : 0.0)).epsilon(1e-12));
  }
  CHECK(grads.loss == doctest::Approx(cross_entropy_loss(grads.logits, 2)));
  CHECK(grads.logits == forward(m, seq));
}

TEST_CASE("zero input with zero biases gives zero conv weight gradients") {
  auto m = Model::initialize(oracle::tiny_config(), 4);
  for (auto& t : m.tensors()) {
    if (t.name.find("bn_beta") != std::string::npos) std::fill(t.data.begin(), t.data.end(), 0.0);
  }
  DraiSequence zero;
  for (int t = 0; t < 3; ++t) zero.frames.emplace_back(8, 8);
  const auto grads = backward(m, zero, 1);
  for (const auto& t : grads.tensors) {
    if (t.name.find(".weight") != std::string::npos && t.name.rfind("conv", 0) == 0) {
      for (double v : t.data) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("analytic gradients match central differences on the tiny model") {
  gen::Gen g(43);
  const auto m = Model::initialize(oracle::tiny_config(), 7);
  const auto seq = random_sequence(g, 3, 8, 8, GestureKind::kClockwise);
  for (auto dropout : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{99}}) {
    for (const auto& e : oracle::check_gradients(m, seq, 4, dropout)) {
      INFO(e.name);
      CHECK(e.relative_error <= 1e-4);
      CHECK(e.numeric_norm > 0.0);
    }
  }
}

TEST_CASE("gradients also match with three conv layers and the per-sequence normalization") {
  gen::Gen g(44);
  auto cfg = oracle::tiny_config();
  cfg.conv_filters = {2, 2, 2};
  cfg.normalization = InputNormalization::kPerSequenceMax;
  const auto m = Model::initialize(cfg, 8);
  const auto seq = random_sequence(g, 4, 8, 8, GestureKind::kPull);
  for (const auto& e : oracle::check_gradients(m, seq, 0)) {
    INFO(e.name);
    CHECK(e.relative_error <= 1e-4);
  }
}

TEST_CASE("training overfits eight samples") {
  gen::Gen g(45);
  std::vector<DraiSequence> data;
  for (int i = 0; i < 8; ++i) data.push_back(g.walking_sequence(8, 32, 32, 4));
  for (int i = 0; i < 8; ++i) data[i].label = gesture_from_index(i % 7);
  auto cfg = ModelConfig::lite();
  cfg.dropout = 0.0;
  TrainConfig tc;
  tc.learning_rate = 3e-3;
  tc.batch_size = 8;
  tc.epochs = 500;
  tc.max_steps = 500;
  tc.target_loss = 0.01;
  tc.seed = 1;
  const auto result = train(data, cfg, tc);
  CHECK(result.steps <= 500);
  CHECK(result.step_losses.back() < 0.01);
  double worst = 0.0;
  for (const auto& s : data) worst = std::max(worst, cross_entropy_loss(forward(result.model, s), static_cast<int>(*s.label)));
  CHECK(worst < 0.05);
  CHECK(result.model.config().input_scale > 0.0);
}

TEST_CASE("training is deterministic for a seed") {
  gen::Gen g(46);
  std::vector<DraiSequence> data;
  for (int i = 0; i < 12; ++i) data.push_back(g.walking_sequence(static_cast<std::size_t>(6 + i % 5)));
  TrainConfig tc;
  tc.batch_size = 4;
  tc.epochs = 2;
  tc.learning_rate = 1e-3;
  tc.seed = 9;
  int epochs_seen = 0;
  tc.on_epoch = [&](const EpochStats&) { ++epochs_seen; };
  const auto a = train(data, ModelConfig::lite(), tc);
  const auto b = train(data, ModelConfig::lite(), tc);
  CHECK(epochs_seen == 4);
  CHECK(a.loss_curve.size() == 2);
  for (std::size_t t = 0; t < a.model.tensors().size(); ++t) {
    CHECK(a.model.tensors()[t].data == b.model.tensors()[t].data);
  }
  tc.seed = 10;
  const auto c = train(data, ModelConfig::lite(), tc);
  CHECK(c.model.tensors()[0].data != a.model.tensors()[0].data);
}

TEST_CASE("training input and config validation") {
  CHECK_THROWS_AS(train(std::vector<DraiSequence>{}, ModelConfig::lite(), TrainConfig{}), ValidationError);
  gen::Gen g(47);
  auto s = g.walking_sequence(5);
  s.label.reset();
  CHECK_THROWS_AS(train(std::vector<DraiSequence>{s}, ModelConfig::lite(), TrainConfig{}), ValidationError);
  TrainConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK(TrainConfig::plain().epochs == 100);
  CHECK(TrainConfig::augmented().epochs == 200);
  CHECK(TrainConfig{}.batch_size == 128);
  CHECK(TrainConfig{}.learning_rate == 1e-4);
}

TEST_CASE("non-finite inputs are rejected and a non-finite loss aborts training") {
  gen::Gen g(48);
  auto s = g.walking_sequence(5);
  s.frames[2].values[17] = std::numeric_limits<float>::quiet_NaN();
  auto cfg = ModelConfig::lite();
  cfg.input_scale = 1.0;
  TrainConfig tc;
  tc.epochs = 3;
  CHECK_THROWS_AS(train(std::vector<DraiSequence>{s}, cfg, tc), ValidationError);
  // A diverging step size overflows the parameters.
  s.frames[2].values[17] = 1.0f;
  tc.learning_rate = 1e300;
  CHECK_THROWS_AS(train(std::vector<DraiSequence>{s}, cfg, tc), TrainingError);
}

TEST_CASE("input scale is the median of per-sequence maxima") {
  std::vector<DraiSequence> data(3);
  const float peaks[] = {2.0f, 10.0f, 4.0f};
  for (int i = 0; i < 3; ++i) {
    DraiFrame f(4, 4);
    f.at(1, 1) = peaks[i];
    data[i].frames.push_back(f);
  }
  CHECK(derive_input_scale(data) == doctest::Approx(4.0));
}

TEST_CASE("prediction probabilities form a distribution") {
  gen::Gen g(49);
  const auto m = Model::initialize(ModelConfig::lite(), 11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto seq = random_sequence(g, static_cast<std::size_t>(g.integer(1, 20)), 32, 32, GestureKind::kPush);
    const auto p = predict(m, seq);
    REQUIRE(p.probabilities.size() == 7);
    CHECK(std::accumulate(p.probabilities.begin(), p.probabilities.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(p.confidence >= 0.0);
    CHECK(p.confidence <= 1.0);
    CHECK(p.confidence == *std::max_element(p.probabilities.begin(), p.probabilities.end()));
    CHECK(static_cast<int>(p.kind) == std::max_element(p.probabilities.begin(), p.probabilities.end()) - p.probabilities.begin());
    SegmentWindow w;
    w.frames = seq;
    w.end_frame = static_cast<std::int64_t>(seq.length()) - 1;
    CHECK(predict(m, w).probabilities == p.probabilities);
  }
}

TEST_CASE("checkpoints round-trip and validate their contents") {
  auto m = Model::initialize(ModelConfig::lite(), 12);
  m.mutable_config().input_scale = 3.5;
  std::stringstream buf;
  save_model(m, buf);
  const auto bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "DIGM");
  const auto back = load_model(buf);
  CHECK(back.config().input_scale == 3.5);
  CHECK(back.config().conv_filters == m.config().conv_filters);
  for (std::size_t t = 0; t < m.tensors().size(); ++t) {
    const auto& a = m.tensors()[t].data;
    const auto& b = back.tensors()[t].data;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == static_cast<double>(static_cast<float>(a[i])));
  }
  // A second save of the loaded model is byte-identical.
  std::stringstream again;
  save_model(back, again);
  CHECK(again.str() == bytes);

  std::stringstream truncated(bytes.substr(0, bytes.size() - 10));
  CHECK_THROWS_AS(load_model(truncated), ValidationError);
  std::string wrong = bytes;
  wrong[0] = 'X';
  std::stringstream bad_magic(wrong);
  CHECK_THROWS_AS(load_model(bad_magic), ValidationError);
}

TEST_CASE("DTW distance basics") {
  gen::Gen g(50);
  for (int trial = 0; trial < 50; ++trial) {
    TrajectoryProfile a, b;
    for (int i = g.integer(1, 20); i > 0; --i) a.points.push_back({g.real(1, 32), g.real(1, 32)});
    for (int i = g.integer(1, 20); i > 0; --i) b.points.push_back({g.real(1, 32), g.real(1, 32)});
    CHECK(dtw_distance(a, a) == 0.0);
    CHECK(dtw_distance(a, b) == doctest::Approx(dtw_distance(b, a)));
    CHECK(dtw_distance(a, b) >= 0.0);
    CHECK(dtw_distance(a, b, ProfileAlignment::kCentroid) == doctest::Approx(dtw_distance(b, a, ProfileAlignment::kCentroid)));
  }
  TrajectoryProfile p{{{1, 1}, {2, 2}, {3, 3}}};
  TrajectoryProfile q{{{1, 1}, {1, 1}, {2, 2}, {3, 3}, {3, 3}}};
  CHECK(dtw_distance(p, q) == 0.0);
  TrajectoryProfile r{{{1, 2}, {2, 3}, {3, 4}}};
  CHECK(dtw_distance(p, r) == doctest::Approx(3.0));
  CHECK(dtw_distance(p, r, ProfileAlignment::kCentroid) == doctest::Approx(0.0));
  CHECK_THROWS_AS(dtw_distance(p, TrajectoryProfile{}), ValidationError);
}

TEST_CASE("nearest neighbor picks the closest template and breaks ties by order") {
  TrajectoryProfile p{{{1, 1}, {2, 2}}};
  std::vector<LabeledProfile> templates{{p, GestureKind::kPull}, {p, GestureKind::kPush}};
  CHECK(dtw_nearest_neighbor(p, templates) == GestureKind::kPull);
  CHECK_THROWS_AS(dtw_nearest_neighbor(p, std::vector<LabeledProfile>{}), ValidationError);
}

TEST_CASE("DTW recognizes clean synthetic gestures against clean templates") {
  const auto c = default_config();
  const AnchorLocation where{"t", 0.8, 0.0};
  const auto templates = make_dtw_templates(where, c, PipelineParams{}, SceneOptions{});
  REQUIRE(templates.size() == 6);
  for (int k = 0; k < 6; ++k) {
    GestureScript s;
    s.kind = gesture_from_index(k);
    s.anchor_distance = 0.8;
    s.duration = 1.0;
    const auto seq = synthesize_sequence(s, c, PipelineParams{}, SceneOptions{}, 100 + k).drai;
    CHECK(dtw_nearest_neighbor(extract_trajectory_profile(seq), templates) == s.kind);
  }
}
