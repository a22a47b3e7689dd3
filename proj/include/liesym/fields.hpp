// Structured Lie symmetry vector fields of the class S and its subclasses.
//
// Every field is stored in the canonical decomposition
//     Q = D(tau) + kappa_{ab} x_b d_a + P(chi) + sigma M + zeta I
// with
//     D(tau) = tau d_t + (1/2) tau_t x_a d_a + (1/8) tau_tt x_a x_a M,
//     P(chi) = chi^a d_a + (1/2) chi^a_t x_a M,
//     M = i psi d_psi - i psi~ d_psi~,   I = psi d_psi + psi~ d_psi~.
// The composite generators D^lambda(tau), I', P' of the power/logarithmic
// subclasses are expanded into this decomposition at construction.
#pragma once

#include "liesym/expr.hpp"

namespace liesym {

struct VectorField {
    Ex tau;
    std::vector<std::vector<Ex>> kappa; // kappa[a][b]: xi^a += kappa[a][b] x_b
    std::vector<Ex> chi;
    Ex sigma, zeta;

    static VectorField zero(const Context& ctx);
};

// elementary generators
VectorField fD(const Context& ctx, Ex tau);
// D^lambda(tau) = D(tau) - lambda^{-1} tau_t I
VectorField fDl(const Context& ctx, Ex tau, const Rat& lambda);
// J_{ab} = x_a d_b - x_b d_a (0-based indices)
VectorField fJ(const Context& ctx, int a, int b);
VectorField fP(const Context& ctx, std::vector<Ex> chi);
VectorField fM(const Context& ctx, Ex sigma);
VectorField fI(const Context& ctx, Ex zeta);
// I' = e^{-d2 t}(d2 I - d1 M) if d2 != 0, I + d1 t M if d2 == 0
VectorField fIprime(const Context& ctx, Ex d1, Ex d2, bool d2zero);
// P'(chi) = P(chi) - zh I - d1 (int zh) M where zh_t = -d2 zh + h^{0b} chi^b;
// synthesizes fresh ruled functions in ctx
VectorField fPprime(Context& ctx, std::vector<Ex> chi, const std::vector<Ex>& h0,
                    Ex d1, Ex d2);

VectorField vfAdd(const Context& ctx, const VectorField& a, const VectorField& b);
VectorField vfScale(const Context& ctx, const VectorField& a, const Ex& c);
bool vfIsZero(const Context& ctx, const VectorField& a);
bool vfEqual(const Context& ctx, const VectorField& a, const VectorField& b);
std::string vfDescribe(const VectorField& a);

// raw components on (t, x, psi, psi~)
struct RawField {
    Ex xt;
    std::vector<Ex> xs;
    Ex eta, etaStar;
};
RawField vfRaw(const Context& ctx, const VectorField& q);

// first-order action of a raw field on an expression in (t, x, psi, psi~, rho)
Ex applyRaw(const Context& ctx, const RawField& q, const Ex& e);

// structured commutator (from the g_<> commutation relations)
VectorField commutator(const Context& ctx, const VectorField& a, const VectorField& b);
// reference implementation expanding to raw components
RawField commutatorRaw(const Context& ctx, const RawField& a, const RawField& b);

} // namespace liesym
