#ifndef CMFN_TRACE_HPP
#define CMFN_TRACE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cmfn/jet.hpp"

namespace cmfn {

class AdjointTrace;

/// Handle to a node of an AdjointTrace. Carries the same arithmetic surface
/// as Jet, so jet-generic code can be instantiated with either type.
struct TracedJet {
  AdjointTrace* trace = nullptr;
  int32_t id = -1;

  int order() const;
  double value() const;   // constant term
  Jet jet() const;        // full coefficient copy
};

/// Append-only tape of elementary operations on jet values. Nodes are stored
/// in topological order; a reverse sweep from a scalar output accumulates
/// per-coefficient adjoints, yielding exact gradients with respect to all
/// registered leaves (the network parameters).
///
/// The local Jacobian of every nonlinear jet operation c = f(a) is the
/// lower-triangular Toeplitz matrix of the series f'(a), so adjoint
/// propagation reduces to one transposed-convolution per stored partial.
class AdjointTrace {
 public:
  explicit AdjointTrace(int order);

  int order() const { return order_; }
  int size() const { return static_cast<int>(meta_.size()); }
  int leaf_count() const { return static_cast<int>(leaves_.size()); }

  /// Parameter leaf: constant jet [v, 0, ...]; gradients are reported over
  /// leaves in creation order.
  TracedJet leaf(double v);
  /// Non-differentiated constant.
  TracedJet constant(const Jet& j);
  TracedJet constant(double c);

  /// Fused affine contraction: sum_j weights[j]*inputs[j] + bias.
  /// weights and bias must be leaf or constant nodes holding constant jets.
  TracedJet dot(const std::vector<TracedJet>& weights, const std::vector<TracedJet>& inputs,
                TracedJet bias);

  /// Reverse sweep from a scalar output (its constant coefficient), seeded
  /// with `seed`. Returns dL/d(leaf value) for every leaf, creation order.
  /// Throws NumericFault naming the first non-finite node if the output is
  /// not finite.
  Eigen::VectorXd gradient(const TracedJet& output, double seed = 1.0);

  /// Drop all nodes, keep buffer capacity.
  void clear();

  Jet node_jet(int32_t id) const;
  double node_value(int32_t id) const { return val_[static_cast<size_t>(id) * width_]; }

  // Node constructors used by the TracedJet operators.
  TracedJet add(TracedJet a, TracedJet b);
  TracedJet sub(TracedJet a, TracedJet b);
  TracedJet neg(TracedJet a);
  TracedJet add_const(TracedJet a, double c);
  TracedJet mul_const(TracedJet a, double c);
  TracedJet mul(TracedJet a, TracedJet b);
  TracedJet div(TracedJet a, TracedJet b);
  TracedJet exp_(TracedJet a);
  TracedJet sin_(TracedJet a);
  TracedJet cos_(TracedJet a);
  TracedJet tanh_(TracedJet a);
  TracedJet extract_(TracedJet a, int k);

 private:
  enum class Op : uint8_t {
    kLeaf,
    kConst,
    kAdd,
    kSub,
    kNeg,
    kAddC,
    kMulC,
    kMul,
    kDiv,
    kExp,
    kSin,
    kCos,
    kTanh,
    kExtract,
    kDot,
  };

  struct Meta {
    Op op;
    int32_t a = -1;
    int32_t b = -1;
    int32_t partial = -1;  // slot index into partial arena, or -1
    double c = 0.0;        // scalar payload (kAddC/kMulC/kExtract factorial)
    int32_t args = -1;     // offset into args_ for kDot
    int32_t fan = 0;       // kDot fan-in
  };

  double* val(int32_t id) { return val_.data() + static_cast<size_t>(id) * width_; }
  const double* val(int32_t id) const { return val_.data() + static_cast<size_t>(id) * width_; }
  double* par(int32_t slot) { return par_.data() + static_cast<size_t>(slot) * width_; }
  const double* par(int32_t slot) const {
    return par_.data() + static_cast<size_t>(slot) * width_;
  }

  int32_t new_node(Op op);
  int32_t new_partial();
  void check_mine(TracedJet t) const;
  static std::string op_name(Op op);

  int order_;
  int width_;  // order_ + 1
  std::vector<Meta> meta_;
  std::vector<double> val_;
  std::vector<double> par_;
  std::vector<int32_t> args_;
  std::vector<int32_t> leaves_;
  std::vector<double> adj_;      // scratch for the reverse sweep
  std::vector<double> scratch_;  // one jet of scratch (kDiv)
};

// Arithmetic surface mirroring Jet.
TracedJet operator+(TracedJet a, TracedJet b);
TracedJet operator-(TracedJet a, TracedJet b);
TracedJet operator*(TracedJet a, TracedJet b);
TracedJet operator/(TracedJet a, TracedJet b);
TracedJet operator-(TracedJet a);
TracedJet operator+(TracedJet a, double c);
TracedJet operator+(double c, TracedJet a);
TracedJet operator-(TracedJet a, double c);
TracedJet operator-(double c, TracedJet a);
TracedJet operator*(TracedJet a, double c);
TracedJet operator*(double c, TracedJet a);
TracedJet operator/(TracedJet a, double c);
TracedJet operator/(double c, TracedJet a);

TracedJet exp(TracedJet a);
TracedJet sin(TracedJet a);
TracedJet cos(TracedJet a);
TracedJet tanh(TracedJet a);
TracedJet pow_int(TracedJet a, int n);
TracedJet extract(TracedJet a, int k);

TracedJet lift_like(TracedJet exemplar, const Jet& j);
TracedJet lift_like(TracedJet exemplar, double c);

}  // namespace cmfn

#endif
