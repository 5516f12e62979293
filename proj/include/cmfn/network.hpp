#ifndef CMFN_NETWORK_HPP
#define CMFN_NETWORK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cmfn/jet.hpp"
#include "cmfn/trace.hpp"

namespace cmfn {

enum class Activation { Tanh, Sigmoid };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

/// Fully connected feedforward network with an affine output layer.
/// Immutable after construction; set_params returns a new value.
///
/// "Four-layer network" throughout this project means input + 2 hidden +
/// output, so widths (1, 20, 20, 1) is the default 1D architecture.
struct Mfn {
  std::vector<int> widths;                // input, hidden..., output
  std::vector<Eigen::MatrixXd> thetas;    // thetas[i]: widths[i+1] x widths[i]
  std::vector<Eigen::VectorXd> betas;     // betas[i]: widths[i+1]
  Activation activation = Activation::Tanh;
  uint64_t seed = 0;
  // Optional affine input map x -> in_scale .* x + in_shift (empty: identity).
  Eigen::VectorXd in_scale, in_shift;

  int param_count() const;
  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }
};

/// Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases.
/// Identical (widths, seed) gives bit-identical parameters; the RNG is
/// splitmix64 mapped to [0, 1) via the top 53 bits.
Mfn mfn_init(const std::vector<int>& widths, uint64_t seed,
             Activation activation = Activation::Tanh);

/// Flat parameter vector: per layer, weights row-major, then biases.
Eigen::VectorXd get_params(const Mfn& net);
Mfn set_params(Mfn net, const Eigen::VectorXd& v);

/// Forward pass on jet inputs with the network's own (double) parameters.
std::vector<Jet> mfn_forward(const Mfn& net, const std::vector<Jet>& x);

/// Forward pass where the parameters are trace leaves, in get_params order.
/// Affine layers contract through fused dot nodes.
std::vector<TracedJet> mfn_forward(const Mfn& net, std::span<const TracedJet> params,
                                   std::span<const TracedJet> x);

}  // namespace cmfn

#endif
