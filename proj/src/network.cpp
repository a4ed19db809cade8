#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mmgesture/classifier.hpp"
#include "network_impl.hpp"

namespace mmg {

ModelConfig ModelConfig::full() { return ModelConfig{}; }

ModelConfig ModelConfig::lite() {
  ModelConfig c;
  c.embedding_size = 32;
  c.recurrent_hidden = 64;
  return c;
}

void ModelConfig::validate() const {
  if (classes < 2) throw ValidationError("classes must be >= 2");
  if (input_rows < 1 || input_cols < 1) throw ValidationError("input size must be >= 1");
  if (conv_filters.empty()) throw ValidationError("at least one conv layer required");
  for (int f : conv_filters) {
    if (f < 1) throw ValidationError("conv filter counts must be >= 1");
  }
  if (embedding_size < 1 || recurrent_hidden < 1) throw ValidationError("layer sizes must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("dropout must lie in [0, 1)");
  const int div = 1 << conv_filters.size();
  if (input_rows % div != 0 || input_cols % div != 0) {
    throw ValidationError("input size must be divisible by 2^(conv layers)");
  }
  if (!std::isfinite(input_scale)) throw ValidationError("input_scale must be finite");
}

int ModelConfig::pooled_rows() const { return input_rows >> conv_filters.size(); }
int ModelConfig::pooled_cols() const { return input_cols >> conv_filters.size(); }

std::size_t ModelConfig::flattened_size() const {
  return static_cast<std::size_t>(conv_filters.back()) * pooled_rows() * pooled_cols();
}

std::size_t ModelConfig::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : make_parameter_layout(*this)) n += t.size();
  return n;
}

std::vector<Tensor> make_parameter_layout(const ModelConfig& c) {
  c.validate();
  std::vector<Tensor> out;
  auto add = [&](std::string name, std::vector<std::size_t> shape) {
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    out.push_back({std::move(name), std::move(shape), std::vector<double>(n, 0.0)});
  };
  std::size_t cin = 1;
  for (std::size_t l = 0; l < c.conv_filters.size(); ++l) {
    const auto f = static_cast<std::size_t>(c.conv_filters[l]);
    const std::string p = "conv" + std::to_string(l + 1);
    add(p + ".weight", {f, cin, 3, 3});
    add(p + ".bn_gamma", {f});
    add(p + ".bn_beta", {f});
    cin = f;
  }
  const auto E = static_cast<std::size_t>(c.embedding_size);
  const auto H = static_cast<std::size_t>(c.recurrent_hidden);
  const auto C = static_cast<std::size_t>(c.classes);
  add("embed.weight", {E, c.flattened_size()});
  add("embed.bias", {E});
  add("lstm.input_weight", {4 * H, E});
  add("lstm.recurrent_weight", {4 * H, H});
  add("lstm.bias", {4 * H});
  add("head.weight", {C, H});
  add("head.bias", {C});
  return out;
}

Model::Model(ModelConfig config) : config_(std::move(config)), tensors_(make_parameter_layout(config_)) {}

Model Model::zeros(const ModelConfig& config) { return Model(config); }

Model Model::initialize(const ModelConfig& config, std::uint64_t seed) {
  Model m(config);
  std::mt19937_64 rng(seed);
  auto fill_uniform = [&](Tensor& t, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& v : t.data) v = u(rng);
  };
  const std::size_t L = config.conv_filters.size();
  const auto H = static_cast<std::size_t>(config.recurrent_hidden);
  auto& ts = m.tensors_;
  for (std::size_t l = 0; l < L; ++l) {
    Tensor& w = ts[3 * l];
    const double fan_in = static_cast<double>(w.shape[1] * 9);
    fill_uniform(w, std::sqrt(6.0 / fan_in));
    std::fill(ts[3 * l + 1].data.begin(), ts[3 * l + 1].data.end(), 1.0);
  }
  const std::size_t e = 3 * L;
  fill_uniform(ts[e], std::sqrt(6.0 / static_cast<double>(config.flattened_size())));
  const double rec = 1.0 / std::sqrt(static_cast<double>(H));
  fill_uniform(ts[e + 2], rec);
  fill_uniform(ts[e + 3], rec);
  for (std::size_t j = H; j < 2 * H; ++j) ts[e + 4].data[j] = 1.0;  // forget gate
  fill_uniform(ts[e + 5], rec);
  return m;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw ValidationError("empty logits");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double cross_entropy_loss(std::span<const double> logits, int true_class) {
  if (true_class < 0 || static_cast<std::size_t>(true_class) >= logits.size()) {
    throw ValidationError("class index out of range: " + std::to_string(true_class));
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double y : logits) sum += std::exp(y - mx);
  return -(logits[static_cast<std::size_t>(true_class)] - mx) + std::log(sum);
}

std::vector<double> forward(const Model& model, const DraiSequence& seq) {
  detail::Evaluator ev(model);
  return ev.forward(seq, std::nullopt);
}

Gradients backward(const Model& model, const DraiSequence& seq, int true_class,
                   std::optional<std::uint64_t> dropout_seed) {
  if (true_class < 0 || true_class >= model.config().classes) {
    throw ValidationError("class index out of range: " + std::to_string(true_class));
  }
  detail::Evaluator ev(model);
  Gradients g;
  g.tensors = make_parameter_layout(model.config());
  g.logits = ev.forward(seq, dropout_seed);
  g.loss = cross_entropy_loss(g.logits, true_class);
  ev.backward(true_class, g.tensors);
  return g;
}

namespace detail {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// y[o] = b[o] + sum_i W[o][i] x[i]
void dense(const double* W, const double* b, const double* x, std::size_t out, std::size_t in,
           double* y) {
  for (std::size_t o = 0; o < out; ++o) {
    const double* row = W + o * in;
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (std::size_t i = 0; i < in; ++i) s += row[i] * x[i];
    y[o] = (b ? b[o] : 0.0) + s;
  }
}

// dW += d x^T
void outer_accumulate(const double* d, const double* x, std::size_t out, std::size_t in, double* dW) {
  for (std::size_t o = 0; o < out; ++o) {
    const double g = d[o];
    if (g == 0.0) continue;
    double* row = dW + o * in;
#pragma omp simd
    for (std::size_t i = 0; i < in; ++i) row[i] += g * x[i];
  }
}

// dx += W^T d
void transpose_accumulate(const double* W, const double* d, std::size_t out, std::size_t in,
                          double* dx) {
  for (std::size_t o = 0; o < out; ++o) {
    const double g = d[o];
    if (g == 0.0) continue;
    const double* row = W + o * in;
#pragma omp simd
    for (std::size_t i = 0; i < in; ++i) dx[i] += g * row[i];
  }
}

constexpr double kBnEps = 1e-5;

}  // namespace

Evaluator::Evaluator(const Model& model) : model_(model), cfg_(model.config()) {
  cfg_.validate();
  if (model.tensors().size() != 3 * cfg_.conv_filters.size() + 7) {
    throw ValidationError("model tensor layout does not match its config");
  }
}

double Evaluator::input_scale(const DraiSequence& seq) const {
  if (cfg_.normalization == InputNormalization::kPerSequenceMax) {
    float mx = 0.0f;
    for (const auto& f : seq.frames) {
      for (float v : f.values) mx = std::max(mx, v);
    }
    return mx > 0.0f ? static_cast<double>(mx) : 1.0;
  }
  return cfg_.input_scale > 0.0 ? cfg_.input_scale : 1.0;
}

std::vector<double> Evaluator::forward(const DraiSequence& seq,
                                       std::optional<std::uint64_t> dropout_seed) {
  if (seq.frames.empty()) throw ValidationError("empty sequence");
  const auto rows = static_cast<std::size_t>(cfg_.input_rows);
  const auto cols = static_cast<std::size_t>(cfg_.input_cols);
  for (const auto& f : seq.frames) {
    if (f.range_bins != rows || f.angle_bins != cols || f.values.size() != rows * cols) {
      throw ValidationError("frame shape " + std::to_string(f.range_bins) + "x" +
                            std::to_string(f.angle_bins) + " does not match model input " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!std::all_of(f.values.begin(), f.values.end(), [](float v) { return std::isfinite(v); })) {
      throw ValidationError("non-finite pixel in frame " + std::to_string(f.frame_index));
    }
  }
  T_ = seq.frames.size();
  const auto& ts = model_.tensors();
  const std::size_t L = cfg_.conv_filters.size();

  // Input plane, zero padded.
  layers_.assign(L, {});
  std::size_t cin = 1, h = rows, w = cols;
  {
    auto& lc = layers_[0];
    lc.cin = 1;
    lc.h = h;
    lc.w = w;
    lc.in_pad.assign(T_ * (h + 2) * (w + 2), 0.0);
    const double scale = input_scale(seq);
    for (std::size_t t = 0; t < T_; ++t) {
      const auto& vals = seq.frames[t].values;
      for (std::size_t y = 0; y < h; ++y) {
        double* dst = &lc.in_pad[(t * (h + 2) + y + 1) * (w + 2) + 1];
        for (std::size_t x = 0; x < w; ++x) {
          dst[x] = std::log1p(std::max(0.0, static_cast<double>(vals[y * w + x])) / scale);
        }
      }
    }
  }

  for (std::size_t l = 0; l < L; ++l) {
    auto& lc = layers_[l];
    const auto cout = static_cast<std::size_t>(cfg_.conv_filters[l]);
    lc.cin = cin;
    lc.cout = cout;
    lc.h = h;
    lc.w = w;
    const std::size_t hp = h + 2, wp = w + 2, hw = h * w;
    const double* W = ts[3 * l].data.data();
    const double* gamma = ts[3 * l + 1].data.data();
    const double* beta = ts[3 * l + 2].data.data();

    lc.xhat.assign(T_ * cout * hw, 0.0);
    for (std::size_t t = 0; t < T_; ++t) {
      for (std::size_t co = 0; co < cout; ++co) {
        double* z = &lc.xhat[(t * cout + co) * hw];
        for (std::size_t ci = 0; ci < cin; ++ci) {
          const double* in = &lc.in_pad[(t * cin + ci) * hp * wp];
          const double* k = W + (co * cin + ci) * 9;
          for (std::size_t ky = 0; ky < 3; ++ky) {
            for (std::size_t kx = 0; kx < 3; ++kx) {
              const double wv = k[ky * 3 + kx];
              for (std::size_t y = 0; y < h; ++y) {
                const double* src = in + (y + ky) * wp + kx;
                double* dst = z + y * w;
#pragma omp simd
                for (std::size_t x = 0; x < w; ++x) dst[x] += wv * src[x];
              }
            }
          }
        }
      }
    }

    // Batch norm over (t, y, x) per channel.
    const double M = static_cast<double>(T_ * hw);
    lc.inv_std.assign(cout, 0.0);
    lc.act.assign(T_ * cout * hw, 0.0);
    for (std::size_t co = 0; co < cout; ++co) {
      double sum = 0.0;
      for (std::size_t t = 0; t < T_; ++t) {
        const double* z = &lc.xhat[(t * cout + co) * hw];
#pragma omp simd reduction(+ : sum)
        for (std::size_t i = 0; i < hw; ++i) sum += z[i];
      }
      const double mean = sum / M;
      double var = 0.0;
      for (std::size_t t = 0; t < T_; ++t) {
        const double* z = &lc.xhat[(t * cout + co) * hw];
#pragma omp simd reduction(+ : var)
        for (std::size_t i = 0; i < hw; ++i) var += (z[i] - mean) * (z[i] - mean);
      }
      var /= M;
      const double inv = 1.0 / std::sqrt(var + kBnEps);
      lc.inv_std[co] = inv;
      for (std::size_t t = 0; t < T_; ++t) {
        double* z = &lc.xhat[(t * cout + co) * hw];
        double* a = &lc.act[(t * cout + co) * hw];
        for (std::size_t i = 0; i < hw; ++i) {
          z[i] = (z[i] - mean) * inv;
          a[i] = std::max(0.0, gamma[co] * z[i] + beta[co]);
        }
      }
    }

    // 2x2 max pool into the next layer's padded input (or the flattened output).
    const std::size_t h2 = h / 2, w2 = w / 2;
    lc.pool_idx.assign(T_ * cout * h2 * w2, 0);
    const bool last = l + 1 == L;
    if (!last) {
      auto& nx = layers_[l + 1];
      nx.in_pad.assign(T_ * cout * (h2 + 2) * (w2 + 2), 0.0);
    } else {
      flat_.assign(T_ * cout * h2 * w2, 0.0);
    }
    for (std::size_t t = 0; t < T_; ++t) {
      for (std::size_t co = 0; co < cout; ++co) {
        const double* a = &lc.act[(t * cout + co) * hw];
        for (std::size_t y = 0; y < h2; ++y) {
          for (std::size_t x = 0; x < w2; ++x) {
            const std::size_t cand[4] = {(2 * y) * w + 2 * x, (2 * y) * w + 2 * x + 1,
                                         (2 * y + 1) * w + 2 * x, (2 * y + 1) * w + 2 * x + 1};
            std::size_t best = cand[0];
            for (int q = 1; q < 4; ++q) {
              if (a[cand[q]] > a[best]) best = cand[q];
            }
            const std::size_t pi = ((t * cout + co) * h2 + y) * w2 + x;
            lc.pool_idx[pi] = static_cast<std::uint32_t>(best);
            if (!last) {
              layers_[l + 1].in_pad[((t * cout + co) * (h2 + 2) + y + 1) * (w2 + 2) + x + 1] = a[best];
            } else {
              flat_[pi] = a[best];
            }
          }
        }
      }
    }
    cin = cout;
    h = h2;
    w = w2;
  }

  // Frame embedding with dropout.
  const std::size_t F = cfg_.flattened_size();
  const auto E = static_cast<std::size_t>(cfg_.embedding_size);
  const auto H = static_cast<std::size_t>(cfg_.recurrent_hidden);
  const auto C = static_cast<std::size_t>(cfg_.classes);
  const std::size_t e0 = 3 * L;
  pre_embed_.assign(T_ * E, 0.0);
  embed_.assign(T_ * E, 0.0);
  mask_.assign(T_ * E, 1.0);
  if (dropout_seed && cfg_.dropout > 0.0) {
    std::mt19937_64 rng(*dropout_seed);
    std::bernoulli_distribution keep(1.0 - cfg_.dropout);
    const double s = 1.0 / (1.0 - cfg_.dropout);
    for (auto& m : mask_) m = keep(rng) ? s : 0.0;
  }
  for (std::size_t t = 0; t < T_; ++t) {
    dense(ts[e0].data.data(), ts[e0 + 1].data.data(), &flat_[t * F], E, F, &pre_embed_[t * E]);
    for (std::size_t j = 0; j < E; ++j) {
      embed_[t * E + j] = std::max(0.0, pre_embed_[t * E + j]) * mask_[t * E + j];
    }
  }

  // LSTM, gate order i, f, g, o.
  gates_.assign(T_ * 4 * H, 0.0);
  cell_.assign((T_ + 1) * H, 0.0);
  hidden_.assign((T_ + 1) * H, 0.0);
  std::vector<double> a(4 * H), r(4 * H);
  for (std::size_t t = 0; t < T_; ++t) {
    dense(ts[e0 + 2].data.data(), ts[e0 + 4].data.data(), &embed_[t * E], 4 * H, E, a.data());
    dense(ts[e0 + 3].data.data(), nullptr, &hidden_[t * H], 4 * H, H, r.data());
    double* g = &gates_[t * 4 * H];
    for (std::size_t j = 0; j < H; ++j) {
      g[j] = sigmoid(a[j] + r[j]);
      g[H + j] = sigmoid(a[H + j] + r[H + j]);
      g[2 * H + j] = std::tanh(a[2 * H + j] + r[2 * H + j]);
      g[3 * H + j] = sigmoid(a[3 * H + j] + r[3 * H + j]);
      const double c = g[H + j] * cell_[t * H + j] + g[j] * g[2 * H + j];
      cell_[(t + 1) * H + j] = c;
      hidden_[(t + 1) * H + j] = g[3 * H + j] * std::tanh(c);
    }
  }

  logits_.assign(C, 0.0);
  dense(ts[e0 + 5].data.data(), ts[e0 + 6].data.data(), &hidden_[T_ * H], C, H, logits_.data());
  return logits_;
}

void Evaluator::backward(int true_class, std::vector<Tensor>& grads) {
  const auto& ts = model_.tensors();
  const std::size_t L = cfg_.conv_filters.size();
  const std::size_t F = cfg_.flattened_size();
  const auto E = static_cast<std::size_t>(cfg_.embedding_size);
  const auto H = static_cast<std::size_t>(cfg_.recurrent_hidden);
  const auto C = static_cast<std::size_t>(cfg_.classes);
  const std::size_t e0 = 3 * L;

  std::vector<double> dlogits = softmax(logits_);
  dlogits[static_cast<std::size_t>(true_class)] -= 1.0;
  outer_accumulate(dlogits.data(), &hidden_[T_ * H], C, H, grads[e0 + 5].data.data());
  for (std::size_t k = 0; k < C; ++k) grads[e0 + 6].data[k] += dlogits[k];

  std::vector<double> dh(H, 0.0), dc_next(H, 0.0), da(4 * H), dh_prev(H);
  transpose_accumulate(ts[e0 + 5].data.data(), dlogits.data(), C, H, dh.data());
  std::vector<double> dembed(T_ * E, 0.0);
  for (std::size_t t = T_; t-- > 0;) {
    const double* g = &gates_[t * 4 * H];
    for (std::size_t j = 0; j < H; ++j) {
      const double c = cell_[(t + 1) * H + j];
      const double tc = std::tanh(c);
      const double i = g[j], f = g[H + j], gg = g[2 * H + j], o = g[3 * H + j];
      const double dc = dc_next[j] + dh[j] * o * (1.0 - tc * tc);
      da[j] = dc * gg * i * (1.0 - i);
      da[H + j] = dc * cell_[t * H + j] * f * (1.0 - f);
      da[2 * H + j] = dc * i * (1.0 - gg * gg);
      da[3 * H + j] = dh[j] * tc * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    outer_accumulate(da.data(), &embed_[t * E], 4 * H, E, grads[e0 + 2].data.data());
    outer_accumulate(da.data(), &hidden_[t * H], 4 * H, H, grads[e0 + 3].data.data());
    for (std::size_t k = 0; k < 4 * H; ++k) grads[e0 + 4].data[k] += da[k];
    transpose_accumulate(ts[e0 + 2].data.data(), da.data(), 4 * H, E, &dembed[t * E]);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    transpose_accumulate(ts[e0 + 3].data.data(), da.data(), 4 * H, H, dh_prev.data());
    dh.swap(dh_prev);
  }

  std::vector<double> dflat(T_ * F, 0.0);
  std::vector<double> du(E);
  for (std::size_t t = 0; t < T_; ++t) {
    for (std::size_t j = 0; j < E; ++j) {
      du[j] = pre_embed_[t * E + j] > 0.0 ? dembed[t * E + j] * mask_[t * E + j] : 0.0;
    }
    outer_accumulate(du.data(), &flat_[t * F], E, F, grads[e0].data.data());
    for (std::size_t j = 0; j < E; ++j) grads[e0 + 1].data[j] += du[j];
    transpose_accumulate(ts[e0].data.data(), du.data(), E, F, &dflat[t * F]);
  }

  // dpool holds the gradient w.r.t. the current layer's pooled output.
  std::vector<double> dpool = std::move(dflat);
  for (std::size_t l = L; l-- > 0;) {
    auto& lc = layers_[l];
    const std::size_t cin = lc.cin, cout = lc.cout, h = lc.h, w = lc.w;
    const std::size_t hw = h * w, h2 = h / 2, w2 = w / 2, hp = h + 2, wp = w + 2;
    const double* W = ts[3 * l].data.data();
    const double* gamma = ts[3 * l + 1].data.data();
    double* dW = grads[3 * l].data.data();
    double* dgamma = grads[3 * l + 1].data.data();
    double* dbeta = grads[3 * l + 2].data.data();

    // Unpool and ReLU.
    std::vector<double> dz(T_ * cout * hw, 0.0);
    for (std::size_t t = 0; t < T_; ++t) {
      for (std::size_t co = 0; co < cout; ++co) {
        const std::size_t plane = (t * cout + co);
        for (std::size_t p = 0; p < h2 * w2; ++p) {
          const std::size_t src = plane * h2 * w2 + p;
          const std::size_t pos = lc.pool_idx[src];
          if (lc.act[plane * hw + pos] > 0.0) dz[plane * hw + pos] += dpool[src];
        }
      }
    }

    // Batch norm backward; dz first holds dy, then dL/dz.
    const double M = static_cast<double>(T_ * hw);
    for (std::size_t co = 0; co < cout; ++co) {
      double sum_dy = 0.0, sum_dy_xhat = 0.0;
      for (std::size_t t = 0; t < T_; ++t) {
        const double* d = &dz[(t * cout + co) * hw];
        const double* xh = &lc.xhat[(t * cout + co) * hw];
        for (std::size_t i = 0; i < hw; ++i) {
          sum_dy += d[i];
          sum_dy_xhat += d[i] * xh[i];
        }
      }
      dgamma[co] += sum_dy_xhat;
      dbeta[co] += sum_dy;
      const double k = gamma[co] * lc.inv_std[co] / M;
      for (std::size_t t = 0; t < T_; ++t) {
        double* d = &dz[(t * cout + co) * hw];
        const double* xh = &lc.xhat[(t * cout + co) * hw];
        for (std::size_t i = 0; i < hw; ++i) {
          d[i] = k * (M * d[i] - sum_dy - xh[i] * sum_dy_xhat);
        }
      }
    }

    // Conv weight gradient and input gradient.
    const bool need_input_grad = l > 0;
    std::vector<double> din_pad;
    if (need_input_grad) din_pad.assign(T_ * cin * hp * wp, 0.0);
    for (std::size_t t = 0; t < T_; ++t) {
      for (std::size_t co = 0; co < cout; ++co) {
        const double* d = &dz[(t * cout + co) * hw];
        for (std::size_t ci = 0; ci < cin; ++ci) {
          const double* in = &lc.in_pad[(t * cin + ci) * hp * wp];
          double* din = need_input_grad ? &din_pad[(t * cin + ci) * hp * wp] : nullptr;
          for (std::size_t ky = 0; ky < 3; ++ky) {
            for (std::size_t kx = 0; kx < 3; ++kx) {
              const std::size_t widx = (co * cin + ci) * 9 + ky * 3 + kx;
              double s = 0.0;
              for (std::size_t y = 0; y < h; ++y) {
                const double* src = in + (y + ky) * wp + kx;
                const double* dd = d + y * w;
#pragma omp simd reduction(+ : s)
                for (std::size_t x = 0; x < w; ++x) s += dd[x] * src[x];
              }
              dW[widx] += s;
              if (din) {
                const double wv = W[widx];
                for (std::size_t y = 0; y < h; ++y) {
                  double* dst = din + (y + ky) * wp + kx;
                  const double* dd = d + y * w;
#pragma omp simd
                  for (std::size_t x = 0; x < w; ++x) dst[x] += wv * dd[x];
                }
              }
            }
          }
        }
      }
    }

    if (need_input_grad) {
      // Strip the padding: gradient w.r.t. the previous layer's pooled output.
      dpool.assign(T_ * cin * hw, 0.0);
      for (std::size_t t = 0; t < T_; ++t) {
        for (std::size_t ci = 0; ci < cin; ++ci) {
          for (std::size_t y = 0; y < h; ++y) {
            const double* src = &din_pad[((t * cin + ci) * hp + y + 1) * wp + 1];
            std::copy(src, src + w, &dpool[((t * cin + ci) * h + y) * w]);
          }
        }
      }
    }
  }
}

}  // namespace detail
}  // namespace mmg
