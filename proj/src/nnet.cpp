// Copyright 2026 The grlt Authors
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

#include "grlt/nnet.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "grlt/atomic_file.hpp"
#include "grlt/errors.hpp"

namespace grlt {

namespace {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }

double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::relu: return z.cwiseMax(0.0);
    case Activation::gelu: return z.unaryExpr(&gelu);
    case Activation::sigmoid: return z.unaryExpr(&sigmoid);
    case Activation::none: return z;
  }
  return z;
}

// dL/dz from dL/dy, given z (pre-activation) and y (post-activation).
Eigen::MatrixXd activation_backward(Activation a, const Eigen::MatrixXd& z,
                                    const Eigen::MatrixXd& y, const Eigen::MatrixXd& upstream) {
  switch (a) {
    case Activation::relu: return upstream.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    case Activation::gelu: return upstream.cwiseProduct(z.unaryExpr(&gelu_grad));
    case Activation::sigmoid:
      return upstream.cwiseProduct((y.array() * (1.0 - y.array())).matrix());
    case Activation::none: return upstream;
  }
  return upstream;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_positive(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1) throw ConfigError("bad " + what + " '" + s + "' in network spec");
  return v;
}

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  std::string get_bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n)
      throw FormatError(std::string("truncated checkpoint while reading ") + what, bytes_.size());
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::gelu: return "gelu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::none: return "none";
  }
  return "none";
}

Activation parse_activation(const std::string& name) {
  for (Activation a : {Activation::relu, Activation::gelu, Activation::sigmoid, Activation::none})
    if (name == activation_name(a)) return a;
  throw ConfigError("unknown activation '" + name + "' (expected relu, gelu, sigmoid or none)");
}

std::string NetSpec::describe() const {
  std::ostringstream ss;
  ss << input_dim;
  for (const LayerSpec& l : layers) ss << " -> " << l.out << ':' << activation_name(l.activation);
  return ss.str();
}

NetSpec NetSpec::parse(const std::string& text) {
  NetSpec spec;
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const std::size_t arrow = text.find("->", start);
    const std::string part = trim(text.substr(start, arrow == std::string::npos ? std::string::npos : arrow - start));
    if (first) {
      spec.input_dim = parse_positive(part, "input dimension");
      first = false;
    } else {
      const auto colon = part.find(':');
      LayerSpec l;
      l.out = parse_positive(trim(part.substr(0, colon)), "layer width");
      l.activation = colon == std::string::npos ? Activation::none
                                                : parse_activation(trim(part.substr(colon + 1)));
      spec.layers.push_back(l);
    }
    if (arrow == std::string::npos) break;
    start = arrow + 2;
  }
  if (spec.layers.empty()) throw ConfigError("network spec '" + text + "' has no layers");
  return spec;
}

DenseNet::DenseNet(NetSpec spec) : spec_(std::move(spec)) {
  if (spec_.layers.empty()) throw ConfigError("network needs at least one layer");
  if (spec_.input_dim < 1) throw ConfigError("network input dimension must be positive");
  int in = spec_.input_dim;
  for (const LayerSpec& l : spec_.layers) {
    if (l.out < 1) throw ConfigError("layer widths must be positive");
    layers_.push_back({Eigen::MatrixXd::Zero(l.out, in), Eigen::VectorXd::Zero(l.out), l.activation});
    in = l.out;
  }
}

DenseNet DenseNet::init(const NetSpec& spec, std::uint64_t seed) {
  DenseNet net(spec);
  std::mt19937_64 rng(seed);
  for (DenseLayer& layer : net.layers_) {
    const double a = std::sqrt(3.0 / static_cast<double>(layer.weight.cols()));
    std::uniform_real_distribution<double> u(-a, a);
    for (Eigen::Index k = 0; k < layer.weight.size(); ++k) layer.weight(k) = u(rng);
  }
  return net;
}

Eigen::Index DenseNet::parameter_count() const {
  Eigen::Index n = 0;
  for (const DenseLayer& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

Eigen::VectorXd DenseNet::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  for (const DenseLayer& l : layers_) {
    flat.segment(at, l.weight.size()) = l.weight.reshaped();
    at += l.weight.size();
    flat.segment(at, l.bias.size()) = l.bias;
    at += l.bias.size();
  }
  return flat;
}

void DenseNet::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != parameter_count())
    throw ShapeError("expected " + std::to_string(parameter_count()) + " parameters, got " +
                     std::to_string(flat.size()));
  Eigen::Index at = 0;
  for (DenseLayer& l : layers_) {
    l.weight.reshaped() = flat.segment(at, l.weight.size());
    at += l.weight.size();
    l.bias = flat.segment(at, l.bias.size());
    at += l.bias.size();
  }
}

Tape DenseNet::forward(const Eigen::MatrixXd& batch) const {
  if (layers_.empty()) throw ContractError("forward on an empty network");
  if (batch.cols() != input_dim())
    throw ShapeError("batch has " + std::to_string(batch.cols()) + " columns, network expects " +
                     std::to_string(input_dim()));
  if (!batch.allFinite()) throw NumericalError("non-finite network input");
  Tape tape;
  tape.inputs.reserve(layers_.size());
  tape.pre.reserve(layers_.size());
  Eigen::MatrixXd x = batch;
  for (const DenseLayer& l : layers_) {
    Eigen::MatrixXd z = x * l.weight.transpose();
    z.rowwise() += l.bias.transpose();
    tape.inputs.push_back(std::move(x));
    x = activate(l.activation, z);
    tape.pre.push_back(std::move(z));
  }
  tape.output = std::move(x);
  return tape;
}

NetGradients DenseNet::backward(const Tape& tape, const Eigen::MatrixXd& upstream) const {
  if (tape.empty()) throw ContractError("backward called before forward");
  if (tape.inputs.size() != layers_.size()) throw ContractError("tape belongs to another network");
  if (upstream.rows() != tape.output.rows() || upstream.cols() != tape.output.cols())
    throw ShapeError("upstream gradient shape does not match the network output");
  NetGradients out;
  out.params.resize(parameter_count());
  Eigen::Index end = out.params.size();
  Eigen::MatrixXd g = upstream;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const DenseLayer& l = layers_[i];
    const Eigen::MatrixXd& y = i + 1 < layers_.size() ? tape.inputs[i + 1] : tape.output;
    const Eigen::MatrixXd dz = activation_backward(l.activation, tape.pre[i], y, g);
    end -= l.bias.size();
    out.params.segment(end, l.bias.size()) = dz.colwise().sum().transpose();
    end -= l.weight.size();
    const Eigen::MatrixXd dw = dz.transpose() * tape.inputs[i];
    out.params.segment(end, l.weight.size()) = dw.reshaped();
    g = dz * l.weight;
  }
  out.input = std::move(g);
  return out;
}

std::string serialize_checkpoint(const ModelCheckpoint& checkpoint) {
  std::ostringstream desc;
  desc << "net " << checkpoint.spec.describe() << "\nseed " << checkpoint.seed << "\nstep "
       << checkpoint.step << "\n";
  const std::string text = desc.str();
  std::string out = "GRLT";
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, text.size());
  out += text;
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(checkpoint.parameters.size()));
  for (Eigen::Index k = 0; k < checkpoint.parameters.size(); ++k) {
    std::uint64_t bits = 0;
    const double v = checkpoint.parameters(k);
    std::memcpy(&bits, &v, sizeof bits);
    put_le<std::uint64_t>(out, bits);
  }
  return out;
}

void save_checkpoint(const ModelCheckpoint& checkpoint, const std::string& path) {
  write_file_atomic(path, serialize_checkpoint(checkpoint));
}

ModelCheckpoint parse_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  if (r.get_bytes(4, "magic") != "GRLT") throw FormatError("bad checkpoint magic", 0);
  const auto version = r.get_le<std::uint32_t>("version");
  if (version != kCheckpointVersion)
    throw UnsupportedVersionError("unsupported checkpoint version " + std::to_string(version) +
                                      " (this build reads version " +
                                      std::to_string(kCheckpointVersion) + ")",
                                  4);
  const auto len = r.get_le<std::uint64_t>("descriptor length");
  if (len > r.remaining()) throw FormatError("truncated checkpoint descriptor", bytes.size());
  const std::size_t desc_at = r.pos();
  const std::string text = r.get_bytes(static_cast<std::size_t>(len), "descriptor");

  ModelCheckpoint cp;
  bool have_net = false, have_seed = false, have_step = false;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
    try {
      if (key == "net") {
        cp.spec = NetSpec::parse(value);
        have_net = true;
      } else if (key == "seed") {
        cp.seed = std::stoull(value);
        have_seed = true;
      } else if (key == "step") {
        cp.step = std::stoull(value);
        have_step = true;
      } else {
        throw FormatError("unknown descriptor key '" + key + "'", desc_at);
      }
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError("bad checkpoint descriptor line '" + line + "': " + e.what(), desc_at);
    }
  }
  if (!have_net || !have_seed || !have_step)
    throw FormatError("checkpoint descriptor lacks net, seed or step", desc_at);

  const std::size_t count_at = r.pos();
  const auto count = r.get_le<std::uint64_t>("parameter count");
  const auto expected = static_cast<std::uint64_t>(DenseNet(cp.spec).parameter_count());
  if (count != expected)
    throw FormatError("checkpoint stores " + std::to_string(count) + " parameters but the network has " +
                          std::to_string(expected),
                      count_at);
  if (r.remaining() != count * 8)
    throw FormatError("checkpoint payload has " + std::to_string(r.remaining()) +
                          " bytes, expected " + std::to_string(count * 8),
                      r.pos());
  cp.parameters.resize(static_cast<Eigen::Index>(count));
  for (Eigen::Index k = 0; k < cp.parameters.size(); ++k) {
    const auto bits = r.get_le<std::uint64_t>("parameters");
    double v = 0;
    std::memcpy(&v, &bits, sizeof v);
    cp.parameters(k) = v;
  }
  return cp;
}

ModelCheckpoint load_checkpoint(const std::string& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const Error& e) {
    throw FormatError(e.what(), 0);
  }
  return parse_checkpoint(bytes);
}

DenseNet restore(const ModelCheckpoint& checkpoint) {
  DenseNet net(checkpoint.spec);
  net.set_parameters(checkpoint.parameters);
  return net;
}

}  // namespace grlt
