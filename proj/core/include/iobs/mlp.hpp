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

// A small bias-free feedforward network with hand-written backpropagation.
//
// Activations are stored one sample per column: the input X is d_in x n and
// layer l maps A_{l-1} to A_l = act(W_l A_{l-1}). The loss against targets Y
// is (1/n) ||f(X) - Y||_F^2.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "iobs/numerics.hpp"
#include "iobs/rng.hpp"

namespace iobs {

enum class Activation { kRelu, kIdentity };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct DenseLayer {
  DenseMatrix weights;  // out x in
  Activation activation = Activation::kIdentity;

  bool operator==(const DenseLayer&) const = default;
};

class TinyMlp {
 public:
  TinyMlp() = default;
  /// Throws DimensionMismatch unless layer l's input width equals layer
  /// l-1's output width.
  explicit TinyMlp(std::vector<DenseLayer> layers);

  std::size_t num_layers() const noexcept { return layers_.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  const DenseLayer& layer(std::size_t l) const { return layers_.at(l); }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  /// Replacement must keep the layer's shape.
  void set_weights(std::size_t l, DenseMatrix w);

  DenseMatrix forward(const DenseMatrix& x) const;
  /// Input to every layer plus the network output: result[l] feeds layer l,
  /// result[num_layers()] is f(X).
  std::vector<DenseMatrix> activations(const DenseMatrix& x) const;

  bool operator==(const TinyMlp&) const = default;

 private:
  std::vector<DenseLayer> layers_;
};

/// (1/n) ||f(X) - Y||_F^2
double mse_loss(const TinyMlp& mlp, const DenseMatrix& x, const DenseMatrix& y);

/// Gradient of mse_loss with respect to each weight matrix; relu'(0) = 0.
std::vector<DenseMatrix> backprop(const TinyMlp& mlp, const DenseMatrix& x, const DenseMatrix& y);

/// Fraction of exactly-zero weights.
double sparsity(const DenseMatrix& w);

/// Text format: "layers=<L>", then per layer "activation=<relu|identity>"
/// followed by a matrix block.
void write_model(std::ostream& out, const TinyMlp& mlp);
TinyMlp read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const TinyMlp& mlp);
TinyMlp load_model(const std::filesystem::path& path);

/// Gaussian weights with variance 1/fan_in. widths = {d_in, h_1, ..., d_out};
/// relu on hidden layers, identity on the last.
TinyMlp random_mlp(const std::vector<std::size_t>& widths, Rng& rng);

/// X with N(0,1) entries (dim x n).
DenseMatrix gaussian_inputs(std::size_t dim, std::size_t n, Rng& rng);

}  // namespace iobs
