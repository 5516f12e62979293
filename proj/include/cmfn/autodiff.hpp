#ifndef CMFN_AUTODIFF_HPP
#define CMFN_AUTODIFF_HPP

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "cmfn/trace.hpp"

namespace cmfn {

/// A scalar program over parameter leaves. The program may seed jet-valued
/// inputs through trace.constant(Jet::variable(...)), so residuals containing
/// input derivatives differentiate exactly (reverse over Taylor forward).
/// The returned node's constant coefficient is the scalar value.
using LossProgram = std::function<TracedJet(AdjointTrace&, std::span<const TracedJet>)>;

/// Evaluate the program without a reverse sweep.
double eval_program(const LossProgram& program, const Eigen::VectorXd& params, int order = 0);

/// One reverse sweep: dL/dparams, same length as params.
Eigen::VectorXd grad(const LossProgram& program, const Eigen::VectorXd& params, int order = 0,
                     double* value_out = nullptr);

/// Compare grad against central finite differences component-wise and return
/// the worst relative error (absolute below 1e-8 magnitude).
double gradcheck(const LossProgram& program, const Eigen::VectorXd& params, double fd_step,
                 int order = 0);

}  // namespace cmfn

#endif
