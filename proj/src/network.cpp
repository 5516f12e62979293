#include "cmfn/network.hpp"

#include <cmath>

namespace cmfn {

namespace {

// splitmix64 (Steele, Lea & Flood 2014); stable across platforms.
struct SplitMix64 {
  uint64_t state;
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

void check_widths(const std::vector<int>& widths) {
  if (widths.size() < 2) throw ConfigError("network needs at least input and output widths");
  for (int w : widths)
    if (w <= 0) throw ConfigError("network widths must be positive");
}

template <class S>
S activate(Activation act, const S& z) {
  switch (act) {
    case Activation::Tanh:
      return tanh(z);
    case Activation::Sigmoid:
      return 0.5 * tanh(z * 0.5) + 0.5;
  }
  throw ConfigError("unknown activation");
}

}  // namespace

Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw ConfigError("unknown activation: " + s);
}

std::string to_string(Activation a) {
  return a == Activation::Tanh ? "tanh" : "sigmoid";
}

int Mfn::param_count() const {
  int n = 0;
  for (size_t i = 0; i + 1 < widths.size(); ++i) n += widths[i + 1] * widths[i] + widths[i + 1];
  return n;
}

Mfn mfn_init(const std::vector<int>& widths, uint64_t seed, Activation activation) {
  check_widths(widths);
  Mfn net;
  net.widths = widths;
  net.activation = activation;
  net.seed = seed;
  SplitMix64 rng{seed};
  for (size_t i = 0; i + 1 < widths.size(); ++i) {
    const int fan_in = widths[i];
    const int fan_out = widths[i + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd theta(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) theta(r, c) = limit * (2.0 * rng.uniform01() - 1.0);
    net.thetas.push_back(std::move(theta));
    net.betas.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

Eigen::VectorXd get_params(const Mfn& net) {
  Eigen::VectorXd v(net.param_count());
  Eigen::Index p = 0;
  for (size_t i = 0; i < net.thetas.size(); ++i) {
    const Eigen::MatrixXd& th = net.thetas[i];
    for (Eigen::Index r = 0; r < th.rows(); ++r)
      for (Eigen::Index c = 0; c < th.cols(); ++c) v[p++] = th(r, c);
    for (Eigen::Index r = 0; r < net.betas[i].size(); ++r) v[p++] = net.betas[i][r];
  }
  return v;
}

Mfn set_params(Mfn net, const Eigen::VectorXd& v) {
  if (v.size() != net.param_count()) throw ShapeError("parameter vector length mismatch");
  Eigen::Index p = 0;
  for (size_t i = 0; i < net.thetas.size(); ++i) {
    Eigen::MatrixXd& th = net.thetas[i];
    for (Eigen::Index r = 0; r < th.rows(); ++r)
      for (Eigen::Index c = 0; c < th.cols(); ++c) th(r, c) = v[p++];
    for (Eigen::Index r = 0; r < net.betas[i].size(); ++r) net.betas[i][r] = v[p++];
  }
  return net;
}

std::vector<Jet> mfn_forward(const Mfn& net, const std::vector<Jet>& x) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw ShapeError("network input dimension mismatch");
  const int order = x.front().order();
  for (const Jet& xi : x)
    if (xi.order() != order) throw ShapeError("network inputs must share one jet order");

  std::vector<Jet> y = x;
  if (net.in_scale.size() > 0)
    for (size_t d = 0; d < y.size(); ++d)
      y[d] = net.in_scale[static_cast<Eigen::Index>(d)] * y[d] +
             net.in_shift[static_cast<Eigen::Index>(d)];
  const size_t layers = net.thetas.size();
  for (size_t i = 0; i < layers; ++i) {
    const Eigen::MatrixXd& th = net.thetas[i];
    std::vector<Jet> z;
    z.reserve(th.rows());
    for (Eigen::Index r = 0; r < th.rows(); ++r) {
      Jet acc = Jet::constant(net.betas[i][r], order);
      for (Eigen::Index c = 0; c < th.cols(); ++c) acc += th(r, c) * y[c];
      if (i + 1 < layers) acc = activate(net.activation, acc);
      z.push_back(std::move(acc));
    }
    y = std::move(z);
  }
  return y;
}

std::vector<TracedJet> mfn_forward(const Mfn& net, std::span<const TracedJet> params,
                                   std::span<const TracedJet> x) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw ShapeError("network input dimension mismatch");
  if (static_cast<int>(params.size()) != net.param_count())
    throw ShapeError("parameter span length mismatch");
  AdjointTrace& trace = *x.front().trace;

  std::vector<TracedJet> y(x.begin(), x.end());
  if (net.in_scale.size() > 0)
    for (size_t d = 0; d < y.size(); ++d)
      y[d] = y[d] * net.in_scale[static_cast<Eigen::Index>(d)] +
             net.in_shift[static_cast<Eigen::Index>(d)];
  size_t p = 0;
  const size_t layers = net.thetas.size();
  for (size_t i = 0; i < layers; ++i) {
    const int fan_in = net.widths[i];
    const int fan_out = net.widths[i + 1];
    const size_t bias_base = p + static_cast<size_t>(fan_out) * fan_in;
    std::vector<TracedJet> z;
    z.reserve(fan_out);
    std::vector<TracedJet> row(fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) row[c] = params[p + static_cast<size_t>(r) * fan_in + c];
      TracedJet acc = trace.dot(row, y, params[bias_base + r]);
      if (i + 1 < layers) acc = activate(net.activation, acc);
      z.push_back(acc);
    }
    y = std::move(z);
    p = bias_base + fan_out;
  }
  return y;
}

}  // namespace cmfn
