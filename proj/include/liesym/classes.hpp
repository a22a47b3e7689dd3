// Models of the equation classes and their arbitrary elements.
//
// The hierarchy, from general to specific:
//   F        i psi_t + psi_aa + F(t,x,psi,psi*) = 0
//   F1       F = S psi with S = S(t,x)  (linear superposable level)
//   S        i psi_t + psi_aa + S(t,x,rho) psi = 0,  S_rho != 0
//   Vtilde   S = f(rho) + V(t,x) viewed inside S
//   V        same equations, (f, V) taken as the arbitrary elements
//   Vf       V-level with f fixed, rho f_rho_rho / f_rho not a real constant
//   P0delta  f = delta ln rho, delta a fixed nonzero complex constant
//   Pldelta  f = delta rho^lambda, lambda a fixed nonzero real constant
#pragma once

#include "liesym/expr.hpp"
#include "liesym/rational.hpp"

namespace liesym {

enum class ClassId { F, F1, S, Vtilde, V, Vf, P0delta, Pldelta };

struct EquationInstance {
    ClassId id = ClassId::S;
    int n = 2;
    Ex S;        // S-level arbitrary element (present for every instance)
    Ex f;        // V-level nonlinearity (Vf)
    Ex V;        // V-level potential (Vf, P0delta, Pldelta)
    CRat delta;  // P0delta / Pldelta
    Rat lambda;  // Pldelta; 0 marks the logarithmic class
    // assumption flag: membership of an abstract nonlinearity could not be
    // decided symbolically and is carried as a recorded hypothesis
    bool assumed = false;

    Rat lambdaPrime() const; // lambda' = 1/lambda - n/4 (power classes only)
};

// spanning generators of g_<> and the defining constraints, per class
struct ClassDescriptor {
    ClassId id;
    const char* name;
    bool hasD, hasDlam, hasJ, hasP, hasM, hasI;
    const char* classifying;  // which classifying condition applies
    const char* groupConstraints; // constraints on equivalence transformations
};
const ClassDescriptor& descriptor(ClassId id);

// bundled arbitrary elements for buildEquation
struct Elements {
    Ex S, f, V;
    CRat delta;
    Rat lambda;
};

// constructs an instance and verifies the class membership constraints; throws
// kernel_error naming the violated residual otherwise
EquationInstance buildEquation(Context& ctx, ClassId id, const Elements& el, int n);

// the S-level arbitrary element of a V-level instance
Ex asS(Context& ctx, const EquationInstance& e);

// partition of the class V by the value of rho f_rho_rho / f_rho
enum class PartitionKind { Vprime, P0, Plambda, Assumed };
struct PartitionResult {
    PartitionKind kind;
    double lambda = 0; // for Plambda (lambda = ratio + 1); exactRat set if exact
    bool exact = false;
    Rat exactLambda;
};
PartitionResult classifyNonlinearity(Context& ctx, const Ex& f);

// |delta| = 1, Im delta >= 0 normalization helper (numeric, for reports)
std::pair<double, double> normalizedDeltaHint(const CRat& delta);

} // namespace liesym
