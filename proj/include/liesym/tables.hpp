// Verification of the classification tables: per-case checks (membership,
// classifying condition, closure, signature), corpus-level structural bounds,
// and the remark-level mappings between equivalent cases.
#pragma once

#include "liesym/caseio.hpp"
#include "liesym/detsys.hpp"
#include "liesym/equivgroup.hpp"

namespace liesym {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CaseReport {
    TheoremId theorem = TheoremId::Vf;
    std::string id;
    bool pass = true;
    std::vector<CheckResult> checks;
    std::array<int, 5> signature{}; // computed r1, k0, k1, k2, k3
    int dim = 0;                    // computed basis size
    double worstResidual = 0;       // worst numeric classifying residual
};

// classifying residual rebuilt as an unsimplified tree; suitable for the
// numeric oracle, where the canonical form would collapse to a literal zero
Ex rawClassifyingResidual(const Context& ctx, const VectorField& q,
                          const EquationInstance& e);

// (r1, k0, k1, k2, k3) of a basis: counts by leading structural part and the
// numeric rank of the translation coefficient pairs
std::array<int, 5> signatureOf(const Context& ctx,
                               const std::vector<VectorField>& basis,
                               NumericInstance& inst);

// component rows (tau, kappa^{12}, chi^1, chi^2, sigma, zeta) for rank tests
std::vector<std::vector<Ex>> componentRows(const std::vector<VectorField>& fs);

// all per-case checks; `seed` controls the oracle sampling (three consecutive
// seeds are used for the numeric residual check)
CaseReport verifyCase(const ClassificationCase& c, unsigned seed = 1);

// corpus-wide structural invariants: dimension maxima, admissible signature
// ranges, and the coupling between r1 and k1
std::vector<CheckResult> verifyBounds(const std::vector<ClassificationCase>& corpus);

// the four stationary companion cases: the listed point transformation maps
// the potential onto the target normal form and pushes the listed basis onto
// the span of the target basis
std::vector<CheckResult> verifyRemarkMappings(const std::string& dir = "",
                                              unsigned seed = 7);

} // namespace liesym
