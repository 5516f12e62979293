#include "cmfn/trace.hpp"

#include <cmath>

#include "cmfn/taylor_kernels.hpp"

namespace cmfn {

namespace {
double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}
}  // namespace

int TracedJet::order() const { return trace->order(); }
double TracedJet::value() const { return trace->node_value(id); }
Jet TracedJet::jet() const { return trace->node_jet(id); }

AdjointTrace::AdjointTrace(int order) : order_(order), width_(order + 1) {
  if (order < 0) throw ConfigError("trace order must be >= 0");
  scratch_.resize(width_);
}

int32_t AdjointTrace::new_node(Op op) {
  meta_.push_back(Meta{op});
  val_.resize(val_.size() + width_, 0.0);
  return static_cast<int32_t>(meta_.size()) - 1;
}

int32_t AdjointTrace::new_partial() {
  const int32_t slot = static_cast<int32_t>(par_.size() / width_);
  par_.resize(par_.size() + width_, 0.0);
  return slot;
}

void AdjointTrace::check_mine(TracedJet t) const {
  if (t.trace != this || t.id < 0 || t.id >= size())
    throw ShapeError("traced jet does not belong to this trace");
}

TracedJet AdjointTrace::leaf(double v) {
  const int32_t id = new_node(Op::kLeaf);
  val(id)[0] = v;
  leaves_.push_back(id);
  return {this, id};
}

TracedJet AdjointTrace::constant(const Jet& j) {
  if (j.order() != order_) throw ShapeError("constant jet order mismatch");
  const int32_t id = new_node(Op::kConst);
  Eigen::Map<Eigen::VectorXd>(val(id), width_) = j.coeffs();
  return {this, id};
}

TracedJet AdjointTrace::constant(double c) {
  const int32_t id = new_node(Op::kConst);
  val(id)[0] = c;
  return {this, id};
}

Jet AdjointTrace::node_jet(int32_t id) const {
  return Jet::from_coeffs(Eigen::Map<const Eigen::VectorXd>(val(id), width_));
}

TracedJet AdjointTrace::add(TracedJet a, TracedJet b) {
  check_mine(a);
  check_mine(b);
  const int32_t id = new_node(Op::kAdd);
  meta_[id].a = a.id;
  meta_[id].b = b.id;
  for (int k = 0; k < width_; ++k) val(id)[k] = val(a.id)[k] + val(b.id)[k];
  return {this, id};
}

TracedJet AdjointTrace::sub(TracedJet a, TracedJet b) {
  check_mine(a);
  check_mine(b);
  const int32_t id = new_node(Op::kSub);
  meta_[id].a = a.id;
  meta_[id].b = b.id;
  for (int k = 0; k < width_; ++k) val(id)[k] = val(a.id)[k] - val(b.id)[k];
  return {this, id};
}

TracedJet AdjointTrace::neg(TracedJet a) {
  check_mine(a);
  const int32_t id = new_node(Op::kNeg);
  meta_[id].a = a.id;
  for (int k = 0; k < width_; ++k) val(id)[k] = -val(a.id)[k];
  return {this, id};
}

TracedJet AdjointTrace::add_const(TracedJet a, double c) {
  check_mine(a);
  const int32_t id = new_node(Op::kAddC);
  meta_[id].a = a.id;
  meta_[id].c = c;
  for (int k = 0; k < width_; ++k) val(id)[k] = val(a.id)[k];
  val(id)[0] += c;
  return {this, id};
}

TracedJet AdjointTrace::mul_const(TracedJet a, double c) {
  check_mine(a);
  const int32_t id = new_node(Op::kMulC);
  meta_[id].a = a.id;
  meta_[id].c = c;
  for (int k = 0; k < width_; ++k) val(id)[k] = c * val(a.id)[k];
  return {this, id};
}

TracedJet AdjointTrace::mul(TracedJet a, TracedJet b) {
  check_mine(a);
  check_mine(b);
  const int32_t id = new_node(Op::kMul);
  meta_[id].a = a.id;
  meta_[id].b = b.id;
  taylor::mul(val(a.id), val(b.id), val(id), width_);
  return {this, id};
}

TracedJet AdjointTrace::div(TracedJet a, TracedJet b) {
  check_mine(a);
  check_mine(b);
  if (val(b.id)[0] == 0.0) throw SingularOperation("traced jet division by zero constant term");
  const int32_t id = new_node(Op::kDiv);
  meta_[id].a = a.id;
  meta_[id].b = b.id;
  meta_[id].partial = new_partial();
  taylor::recip(val(b.id), par(meta_[id].partial), width_);
  taylor::mul(val(a.id), par(meta_[id].partial), val(id), width_);
  return {this, id};
}

TracedJet AdjointTrace::exp_(TracedJet a) {
  check_mine(a);
  const int32_t id = new_node(Op::kExp);
  meta_[id].a = a.id;
  taylor::exp_(val(a.id), val(id), width_);
  return {this, id};
}

TracedJet AdjointTrace::sin_(TracedJet a) {
  check_mine(a);
  const int32_t id = new_node(Op::kSin);
  meta_[id].a = a.id;
  meta_[id].partial = new_partial();
  taylor::sincos(val(a.id), val(id), par(meta_[id].partial), width_);
  return {this, id};
}

TracedJet AdjointTrace::cos_(TracedJet a) {
  check_mine(a);
  const int32_t id = new_node(Op::kCos);
  meta_[id].a = a.id;
  meta_[id].partial = new_partial();
  // partial holds -sin(a)
  std::vector<double> s(width_);
  taylor::sincos(val(a.id), s.data(), val(id), width_);
  for (int k = 0; k < width_; ++k) par(meta_[id].partial)[k] = -s[k];
  return {this, id};
}

TracedJet AdjointTrace::tanh_(TracedJet a) {
  check_mine(a);
  const int32_t id = new_node(Op::kTanh);
  meta_[id].a = a.id;
  meta_[id].partial = new_partial();  // sech^2
  taylor::tanh_(val(a.id), val(id), par(meta_[id].partial), width_);
  return {this, id};
}

TracedJet AdjointTrace::extract_(TracedJet a, int k) {
  check_mine(a);
  if (k < 0 || k > order_) throw ConfigError("extract order exceeds trace order");
  const int32_t id = new_node(Op::kExtract);
  meta_[id].a = a.id;
  meta_[id].c = factorial(k);
  meta_[id].fan = k;  // reuse as the coefficient index
  val(id)[0] = meta_[id].c * val(a.id)[k];
  return {this, id};
}

TracedJet AdjointTrace::dot(const std::vector<TracedJet>& weights,
                            const std::vector<TracedJet>& inputs, TracedJet bias) {
  if (weights.size() != inputs.size()) throw ShapeError("dot: fan-in mismatch");
  check_mine(bias);
  const int m = static_cast<int>(weights.size());
  for (int j = 0; j < m; ++j) {
    check_mine(weights[j]);
    check_mine(inputs[j]);
    const Op op = meta_[weights[j].id].op;
    if (op != Op::kLeaf && op != Op::kConst)
      throw ShapeError("dot weights must be leaf or constant nodes");
  }
  {
    const Op op = meta_[bias.id].op;
    if (op != Op::kLeaf && op != Op::kConst)
      throw ShapeError("dot bias must be a leaf or constant node");
  }
  const int32_t args = static_cast<int32_t>(args_.size());
  for (int j = 0; j < m; ++j) args_.push_back(weights[j].id);
  for (int j = 0; j < m; ++j) args_.push_back(inputs[j].id);
  const int32_t id = new_node(Op::kDot);
  meta_[id].a = bias.id;
  meta_[id].args = args;
  meta_[id].fan = m;
  double* out = val(id);
  for (int k = 0; k < width_; ++k) out[k] = val(bias.id)[k];
  for (int j = 0; j < m; ++j) {
    const double w = val_[static_cast<size_t>(args_[args + j]) * width_];
    const double* y = val(args_[args + m + j]);
    for (int k = 0; k < width_; ++k) out[k] += w * y[k];
  }
  return {this, id};
}

Eigen::VectorXd AdjointTrace::gradient(const TracedJet& output, double seed) {
  check_mine(output);
  if (!std::isfinite(val(output.id)[0])) {
    for (int32_t i = 0; i <= output.id; ++i) {
      for (int k = 0; k < width_; ++k) {
        if (!std::isfinite(val(i)[k]))
          throw NumericFault("non-finite value in trace", op_name(meta_[i].op) + "#" + std::to_string(i));
      }
    }
    throw NumericFault("non-finite output", op_name(meta_[output.id].op));
  }

  adj_.assign(val_.size(), 0.0);
  adj_[static_cast<size_t>(output.id) * width_] = seed;

  for (int32_t i = output.id; i >= 0; --i) {
    const Meta& m = meta_[i];
    double* a = adj_.data() + static_cast<size_t>(i) * width_;
    bool live = false;
    for (int k = 0; k < width_; ++k)
      if (a[k] != 0.0) {
        live = true;
        break;
      }
    if (!live) continue;

    auto adj_of = [&](int32_t id) { return adj_.data() + static_cast<size_t>(id) * width_; };

    switch (m.op) {
      case Op::kLeaf:
      case Op::kConst:
        break;
      case Op::kAdd:
        for (int k = 0; k < width_; ++k) adj_of(m.a)[k] += a[k];
        for (int k = 0; k < width_; ++k) adj_of(m.b)[k] += a[k];
        break;
      case Op::kSub:
        for (int k = 0; k < width_; ++k) adj_of(m.a)[k] += a[k];
        for (int k = 0; k < width_; ++k) adj_of(m.b)[k] -= a[k];
        break;
      case Op::kNeg:
        for (int k = 0; k < width_; ++k) adj_of(m.a)[k] -= a[k];
        break;
      case Op::kAddC:
        for (int k = 0; k < width_; ++k) adj_of(m.a)[k] += a[k];
        break;
      case Op::kMulC:
        for (int k = 0; k < width_; ++k) adj_of(m.a)[k] += m.c * a[k];
        break;
      case Op::kMul:
        taylor::corr(a, val(m.b), adj_of(m.a), width_);
        taylor::corr(a, val(m.a), adj_of(m.b), width_);
        break;
      case Op::kDiv: {
        const double* r = par(m.partial);
        taylor::corr(a, r, adj_of(m.a), width_);
        // d(a/b)/db = -Toeplitz((a/b) * (1/b))
        taylor::mul(val(i), r, scratch_.data(), width_);
        for (int k = 0; k < width_; ++k) scratch_[k] = -scratch_[k];
        taylor::corr(a, scratch_.data(), adj_of(m.b), width_);
        break;
      }
      case Op::kExp:
        taylor::corr(a, val(i), adj_of(m.a), width_);
        break;
      case Op::kSin:
      case Op::kCos:
      case Op::kTanh:
        taylor::corr(a, par(m.partial), adj_of(m.a), width_);
        break;
      case Op::kExtract:
        adj_of(m.a)[m.fan] += m.c * a[0];
        break;
      case Op::kDot: {
        for (int k = 0; k < width_; ++k) adj_of(m.a)[k] += a[k];
        const int fan = m.fan;
        for (int j = 0; j < fan; ++j) {
          const int32_t wid = args_[m.args + j];
          const int32_t yid = args_[m.args + fan + j];
          const double* y = val(yid);
          const double w = val(wid)[0];
          // weights hold constant jets: only their value coefficient matters
          double acc = 0.0;
          double* ay = adj_of(yid);
          for (int k = 0; k < width_; ++k) {
            acc += a[k] * y[k];
            ay[k] += w * a[k];
          }
          adj_of(wid)[0] += acc;
        }
        break;
      }
    }
  }

  Eigen::VectorXd g(leaves_.size());
  for (size_t j = 0; j < leaves_.size(); ++j)
    g[static_cast<Eigen::Index>(j)] = adj_[static_cast<size_t>(leaves_[j]) * width_];
  return g;
}

void AdjointTrace::clear() {
  meta_.clear();
  val_.clear();
  par_.clear();
  args_.clear();
  leaves_.clear();
}

std::string AdjointTrace::op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kConst: return "const";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kNeg: return "neg";
    case Op::kAddC: return "add_const";
    case Op::kMulC: return "mul_const";
    case Op::kMul: return "mul";
    case Op::kDiv: return "div";
    case Op::kExp: return "exp";
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kTanh: return "tanh";
    case Op::kExtract: return "extract";
    case Op::kDot: return "dot";
  }
  return "?";
}

TracedJet operator+(TracedJet a, TracedJet b) { return a.trace->add(a, b); }
TracedJet operator-(TracedJet a, TracedJet b) { return a.trace->sub(a, b); }
TracedJet operator*(TracedJet a, TracedJet b) { return a.trace->mul(a, b); }
TracedJet operator/(TracedJet a, TracedJet b) { return a.trace->div(a, b); }
TracedJet operator-(TracedJet a) { return a.trace->neg(a); }
TracedJet operator+(TracedJet a, double c) { return a.trace->add_const(a, c); }
TracedJet operator+(double c, TracedJet a) { return a.trace->add_const(a, c); }
TracedJet operator-(TracedJet a, double c) { return a.trace->add_const(a, -c); }
TracedJet operator-(double c, TracedJet a) { return a.trace->add_const(a.trace->neg(a), c); }
TracedJet operator*(TracedJet a, double c) { return a.trace->mul_const(a, c); }
TracedJet operator*(double c, TracedJet a) { return a.trace->mul_const(a, c); }
TracedJet operator/(TracedJet a, double c) {
  if (c == 0.0) throw SingularOperation("traced jet division by zero scalar");
  return a.trace->mul_const(a, 1.0 / c);
}
TracedJet operator/(double c, TracedJet a) { return a.trace->div(a.trace->constant(c), a); }

TracedJet exp(TracedJet a) { return a.trace->exp_(a); }
TracedJet sin(TracedJet a) { return a.trace->sin_(a); }
TracedJet cos(TracedJet a) { return a.trace->cos_(a); }
TracedJet tanh(TracedJet a) { return a.trace->tanh_(a); }

TracedJet pow_int(TracedJet a, int n) {
  if (n == 0) return a.trace->constant(1.0);
  const bool neg = n < 0;
  unsigned e = neg ? static_cast<unsigned>(-static_cast<long long>(n)) : static_cast<unsigned>(n);
  TracedJet base = a;
  TracedJet acc = a.trace->constant(1.0);
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  if (neg) return a.trace->div(a.trace->constant(1.0), acc);
  return acc;
}

TracedJet extract(TracedJet a, int k) { return a.trace->extract_(a, k); }

TracedJet lift_like(TracedJet exemplar, const Jet& j) { return exemplar.trace->constant(j); }
TracedJet lift_like(TracedJet exemplar, double c) { return exemplar.trace->constant(c); }

}  // namespace cmfn
