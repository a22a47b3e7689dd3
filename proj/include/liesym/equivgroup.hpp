// Point transformations of the equivalence groups: action on variables and
// arbitrary elements, composition/inverse, pushforward on structured vector
// fields, the differential invariant and the reducibility predicates.
#pragma once

#include "liesym/classes.hpp"
#include "liesym/fields.hpp"

#include <map>
#include <optional>

namespace liesym {

// A transformation
//   t~ = T(t),  x~_a = |T_t|^{1/2} O^{ab} x_b + X^a(t),
//   psi~ = exp(i/8 (T_tt/|T_t|) x_a x_a
//          + i/2 (eps' X^b_t/|T_t|^{1/2}) O^{ba} x_a + i Sigma + Z) psi-hat,
// with psi-hat = psi if T_t > 0 and psi* if T_t < 0 (eps' = sgn T_t).
//
// The class tag imposes the structural constraints:
//   S level        : T_t != 0 only
//   V level (V, Vtilde, Vf) : T_tt = 0 and Z constant; Vf additionally
//                    T_t = +-1, Z = 0, c = 0
//   P0delta        : T affine (T_tt = 0)
//   Pldelta        : e^Z = |T_t|^{-1/lambda} (mu = 1), lambda on the tag
struct PointTransformation {
    ClassId tag = ClassId::S;
    int n = 2;
    Ex T;      // function of t
    Ex Tinv;   // symbolic inverse of T, may be null (deferred composition)
    int sgnTt = 1; // declared sign of T_t
    std::vector<std::vector<Rat>> O;
    std::vector<Ex> X; // functions of t
    Ex Sigma, Z;
    Ex c;          // gauge shift of the (f, V) split, V level only
    Rat lambda;    // Pldelta tag only
};

// factories (validated); the elementary transformations D, J, P, M, I
PointTransformation ptIdentity(Context& ctx, ClassId tag = ClassId::S);
PointTransformation ptD(Context& ctx, Ex T, Ex Tinv, int sgnTt,
                        ClassId tag = ClassId::S, Rat lambda = Rat(0));
PointTransformation ptJ(Context& ctx, std::vector<std::vector<Rat>> O,
                        ClassId tag = ClassId::S);
PointTransformation ptP(Context& ctx, std::vector<Ex> X, ClassId tag = ClassId::S);
PointTransformation ptM(Context& ctx, Ex Sigma, ClassId tag = ClassId::S);
PointTransformation ptI(Context& ctx, Ex Z, ClassId tag = ClassId::S);
void validate(Context& ctx, const PointTransformation& g);

// inverse of an affine or fractional-linear T (detected via the Schwarzian)
std::optional<Ex> invertFracLinear(Context& ctx, const Ex& T);

struct VarFormulas {
    Ex t;
    std::vector<Ex> x;
    Ex psi;
};
// formulas for (t~, x~, psi~) in the old variables
VarFormulas actVars(Context& ctx, const PointTransformation& g);

// S~ expressed in the new variables (requires Tinv) / in the old variables
Ex actOnS(Context& ctx, const PointTransformation& g, const Ex& S);
Ex actOnSOldVars(Context& ctx, const PointTransformation& g, const Ex& S);

// transformed instance of the same class; membership re-asserted
EquationInstance actOnElements(Context& ctx, const PointTransformation& g,
                               const EquationInstance& e);

// V~ in the old variables for an instance and a candidate transformation;
// identically zero iff g maps e to the zero potential (numeric checks use this
// form, which avoids inverting T)
Ex transformedPotentialOldVars(Context& ctx, const PointTransformation& g,
                               const EquationInstance& e);

// g2 after g1; parameter-level composition
PointTransformation compose(Context& ctx, const PointTransformation& g2,
                            const PointTransformation& g1);
PointTransformation inverse(Context& ctx, const PointTransformation& g);

// pushforward of a structured field, factoring g = I M P J D
VectorField pushforward(Context& ctx, const PointTransformation& g,
                        const VectorField& q);

// F-class action: F~ for a general substitution psi~ = Psi(t, x, psi-hat),
// result in the old variables
Ex transformFClass(Context& ctx, const PointTransformation& g, const Ex& Psi,
                   const Ex& F);

// rho S_rhorho / S_rho
Ex diffInvariant(Context& ctx, const Ex& S);

struct Reducibility {
    bool applicable = false;     // V polynomial in x of the admissible degree
    bool toXIndependent = false; // P_lambda only
    bool toZero = false;
    bool hasWitness = false;
    PointTransformation witness;
    std::string note;
    // initial values for ruled parameter functions of the witness
    std::map<std::string, std::vector<double>> ruledInits;
    // times a numeric check of the witness must avoid (poles of T)
    std::vector<double> avoidTimes;
};
// reducibility of the potential of e per the class's corollary
Reducibility reducible(Context& ctx, const EquationInstance& e);

} // namespace liesym
