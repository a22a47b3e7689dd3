// Numeric oracle: instantiates abstract functions with concrete evaluators
// (random polynomials, user closed forms, or adaptive integration of their
// rewrite ODEs) and evaluates expression trees in double precision.
//
// The evaluator is deliberately independent of the simplifier: expressions are
// walked as-is, so agreement between a simplified and an unsimplified tree is
// evidence for the symbolic kernel.
#pragma once

#include "liesym/expr.hpp"

#include <complex>
#include <functional>
#include <random>

namespace liesym {

using Cplx = std::complex<double>;

struct SamplePoint {
    double t = 0;
    std::vector<double> x;      // x1..xn
    Cplx psi{1.0, 0.0};         // rho := |psi|
    std::map<std::string, double> syms;             // overrides for named syms
    std::map<std::pair<int, std::vector<int>>, Cplx> jets; // (jt, jx) -> value
};

// closed-form evaluator: (derivative multi-index, argument values) -> value
using ClosedForm = std::function<Cplx(const std::vector<int>&, const std::vector<Cplx>&)>;

class NumericInstance {
  public:
    NumericInstance(const Context& ctx, std::uint64_t seed);

    void setSym(const std::string& name, double v);
    void setClosedForm(const std::string& name, ClosedForm f);
    // initial data at t=0 for a ruled function: y, y', ..., y^{(order-1)}
    void setInit(const std::string& name, std::vector<double> y0);
    // exclude |t - ts| < margin from sampling (singular potentials)
    void avoid(double ts, double margin = 0.05);
    // resample until |x_a| >= r for every coordinate (spatially singular
    // potentials: 1/|x|^2, 1/x_2^2, ...)
    void xFloor(double r);

    // restricts the time window sampled by randomPoint (default [-2, 2])
    void tRange(double lo, double hi);

    Cplx eval(const Ex& e, const SamplePoint& p) const;
    SamplePoint randomPoint();

    const Context& ctx() const { return ctx_; }
    std::mt19937_64& rng() { return rng_; }

  private:
    struct PolyEval;  // random multivariate polynomial
    struct OdeState;  // joint integrator over all ruled functions

    const Context& ctx_;
    mutable std::mt19937_64 rng_;
    std::map<std::string, double> symVals_;
    std::map<std::string, ClosedForm> closed_;
    std::map<std::string, std::vector<double>> inits_;
    std::vector<std::pair<double, double>> avoid_;
    double xfloor_ = 0;
    double tlo_ = -2.0, thi_ = 2.0;
    mutable std::map<std::string, std::shared_ptr<PolyEval>> polys_;
    mutable std::shared_ptr<OdeState> ode_;

    Cplx evalFunc(const std::string& name, const std::vector<int>& mid,
                  const std::vector<Cplx>& args, bool conj) const;
    Cplx ruled(const std::string& name, int order, double u) const;
    friend struct OdeProbe;
};

// max |residual| over npoints random points
double numericResidual(NumericInstance& inst, const Ex& residual, int npoints);

// rank of the row span of `rows` (each row a tuple of component expressions)
// sampled at `samples` random points; singular-value threshold 1e-8 relative
int numericRank(NumericInstance& inst, const std::vector<std::vector<Ex>>& rows,
                int samples);

} // namespace liesym
