// Infinitesimal invariance criterion, on-shell reduction, determining-system
// derivation and the per-class classifying residuals.
#pragma once

#include "liesym/classes.hpp"
#include "liesym/fields.hpp"

namespace liesym {

struct Residual {
    Ex expr;
    std::string provenance;
};

// second-prolongation coefficients of a raw field for psi_t, psi_ab and their
// conjugates:
//   eta^t  = D_t(eta - tau psi_t - xi^a psi_a) + tau psi_tt + xi^a psi_ta
//   eta^ab = D_a D_b(eta - tau psi_t - xi^c psi_c) + tau psi_tab + xi^c psi_abc
struct Prolong2 {
    Ex etaT, etaTs;
    std::vector<std::vector<Ex>> etaXX, etaXXs;
};
Prolong2 prolong2(const Context& ctx, const RawField& q);

// substitutes psi_t = i psi_aa + i S psi and psi*_t = -i psi*_aa - i S* psi*
// (recursively through mixed t-derivatives)
Ex onShell(const Context& ctx, const Ex& e, const Ex& S);

// Q_(2)(i psi_t + psi_aa + S psi) confined to the solution manifold
Residual invarianceResidual(const Context& ctx, const RawField& q, const Ex& S);
Residual invarianceResidual(Context& ctx, const VectorField& q,
                            const EquationInstance& e);

// determining system derived from a fully general ansatz; the three groups in
// the canonical arrangement.  Every emitted equation is cross-checked against
// the raw coefficient split during the derivation.
struct DetSystem {
    Context ctx;                 // owns the declarations of tau, xi^a, eta, S
    std::vector<Ex> groupA;      // tau_psi, ..., xi^a_b + xi^b_a
    std::vector<Ex> groupB;      // eta_psi*, ..., psi eta_psi - eta
    Ex groupC;                   // residual equation with S
    std::vector<std::string> rendered; // pretty-printed, for reports
};
DetSystem deriveDeterminingSystem(int n);

// classifying residual (left minus right side of the class's classifying
// condition); enforces the structured admissibility reductions per class
Residual classifyingResidual(Context& ctx, const VectorField& q,
                             const EquationInstance& e);

// asserts invariance_residual = (coefficient) * psi * classifying_residual
bool consistencyCheck(Context& ctx, const VectorField& q, const EquationInstance& e,
                      std::string* note = nullptr);

// coefficient equations of a residual polynomial in x, split into real and
// imaginary parts; throws on non-polynomial x-dependence
struct SplitEq {
    Mono xmono;
    Ex re, im;
};
std::vector<SplitEq> splitX(const Context& ctx, const Ex& residual);

} // namespace liesym
