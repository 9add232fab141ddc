// Copyright 2026 The iobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iobs/mlp.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "iobs/error.hpp"
#include "iobs/matrix_io.hpp"

namespace iobs {
namespace {

void apply_activation(DenseMatrix& z, Activation a) {
  if (a == Activation::kIdentity) return;
  for (std::size_t r = 0; r < z.rows(); ++r)
    for (double& v : z.row(r)) v = v > 0.0 ? v : 0.0;
}

std::string expect_line(std::istream& in, std::string_view key) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  const std::string prefix = std::string(key) + "=";
  if (line.rfind(prefix, 0) != 0) {
    throw Error(ErrorCode::kParseError, "model file: expected '" + prefix + "...', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

std::string_view activation_name(Activation a) { return a == Activation::kRelu ? "relu" : "identity"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw Error(ErrorCode::kParseError, "unknown activation '" + std::string(name) + "'");
}

TinyMlp::TinyMlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].weights.cols() != layers_[l - 1].weights.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "layer " + std::to_string(l) + " expects " +
                                                     std::to_string(layers_[l].weights.cols()) + " inputs, previous layer emits " +
                                                     std::to_string(layers_[l - 1].weights.rows()));
    }
  }
}

std::size_t TinyMlp::input_dim() const { return layers_.empty() ? 0 : layers_.front().weights.cols(); }
std::size_t TinyMlp::output_dim() const { return layers_.empty() ? 0 : layers_.back().weights.rows(); }

void TinyMlp::set_weights(std::size_t l, DenseMatrix w) {
  DenseLayer& layer = layers_.at(l);
  if (w.rows() != layer.weights.rows() || w.cols() != layer.weights.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "set_weights: shape change for layer " + std::to_string(l));
  }
  layer.weights = std::move(w);
}

std::vector<DenseMatrix> TinyMlp::activations(const DenseMatrix& x) const {
  if (x.rows() != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.rows()) + " rows, network expects " + std::to_string(input_dim()));
  }
  std::vector<DenseMatrix> acts;
  acts.reserve(layers_.size() + 1);
  acts.push_back(x);
  for (const auto& layer : layers_) {
    DenseMatrix z = multiply(layer.weights, acts.back());
    apply_activation(z, layer.activation);
    acts.push_back(std::move(z));
  }
  return acts;
}

DenseMatrix TinyMlp::forward(const DenseMatrix& x) const { return std::move(activations(x).back()); }

double mse_loss(const TinyMlp& mlp, const DenseMatrix& x, const DenseMatrix& y) {
  const DenseMatrix out = mlp.forward(x);
  if (out.rows() != y.rows() || out.cols() != y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "targets do not match network output shape");
  }
  const double f = frobenius_norm(out - y);
  return f * f / static_cast<double>(x.cols());
}

std::vector<DenseMatrix> backprop(const TinyMlp& mlp, const DenseMatrix& x, const DenseMatrix& y) {
  const std::vector<DenseMatrix> acts = mlp.activations(x);
  const DenseMatrix& out = acts.back();
  if (out.rows() != y.rows() || out.cols() != y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "targets do not match network output shape");
  }
  const double scale = 2.0 / static_cast<double>(x.cols());
  DenseMatrix delta = scale * (out - y);  // dL/dA_L

  std::vector<DenseMatrix> grads(mlp.num_layers());
  for (std::size_t l = mlp.num_layers(); l-- > 0;) {
    const DenseLayer& layer = mlp.layer(l);
    if (layer.activation == Activation::kRelu) {
      // A_l > 0 exactly where the pre-activation is positive.
      const DenseMatrix& a = acts[l + 1];
      for (std::size_t r = 0; r < delta.rows(); ++r) {
        auto d = delta.row(r);
        const auto av = a.row(r);
        for (std::size_t c = 0; c < d.size(); ++c)
          if (!(av[c] > 0.0)) d[c] = 0.0;
      }
    }
    grads[l] = multiply(delta, transpose(acts[l]));
    if (l > 0) delta = multiply(transpose(layer.weights), delta);
  }
  return grads;
}

double sparsity(const DenseMatrix& w) {
  const std::size_t total = w.rows() * w.cols();
  if (total == 0) return 0.0;
  std::size_t zeros = 0;
  for (double v : w.data())
    if (v == 0.0) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(total);
}

void write_model(std::ostream& out, const TinyMlp& mlp) {
  out << "layers=" << mlp.num_layers() << '\n';
  for (const auto& layer : mlp.layers()) {
    out << "activation=" << activation_name(layer.activation) << '\n';
    write_matrix(out, layer.weights);
  }
}

TinyMlp read_model(std::istream& in) {
  const std::string count_text = expect_line(in, "layers");
  std::size_t count = 0;
  try {
    count = std::stoull(count_text);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kParseError, "model file: bad layer count '" + count_text + "'");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < count; ++l) {
    DenseLayer layer;
    layer.activation = parse_activation(expect_line(in, "activation"));
    layer.weights = read_matrix(in);
    layers.push_back(std::move(layer));
  }
  return TinyMlp(std::move(layers));
}

void save_model(const std::filesystem::path& path, const TinyMlp& mlp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_model(out, mlp);
}

TinyMlp load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return read_model(in);
}

TinyMlp random_mlp(const std::vector<std::size_t>& widths, Rng& rng) {
  if (widths.size() < 2) throw Error(ErrorCode::kInvalidArgument, "random_mlp needs at least two widths");
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(widths[l])));
    DenseMatrix w(widths[l + 1], widths[l]);
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (double& v : w.row(r)) v = normal(rng);
    const bool last = l + 2 == widths.size();
    layers.push_back({std::move(w), last ? Activation::kIdentity : Activation::kRelu});
  }
  return TinyMlp(std::move(layers));
}

DenseMatrix gaussian_inputs(std::size_t dim, std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix x(dim, n);
  for (std::size_t r = 0; r < dim; ++r)
    for (double& v : x.row(r)) v = normal(rng);
  return x;
}

}  // namespace iobs
