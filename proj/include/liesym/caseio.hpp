// Classification-case corpus: JSON schema, loading, and materialization of a
// case record into a Context, an EquationInstance and the listed basis fields.
//
// Case files store expressions as s-expressions (see parseSexpr).  Before
// parsing, `$name` tokens are macro-expanded: every case sees the built-in
// derived coordinates ($xx, $absx, $phi, $w1, $w2), the per-case constants
// ($delta, $lambda, $lamp) and any case-local "defs".
#pragma once

#include "liesym/classes.hpp"
#include "liesym/fields.hpp"
#include "liesym/oracle.hpp"

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace liesym {

enum class TheoremId { Vf, Log, Power };

const char* theoremName(TheoremId id);
ClassId theoremClass(TheoremId id);

// declared real constant with the sample value used by the numeric oracle
struct ConstSpec {
    std::string name;
    bool positive = false;
    double sample = 1.0;
};

// declared parameter function; either abstract (oracle: random polynomial),
// ruled (oracle: ODE integration from `init`), or numerically overridden by a
// closed-form template `sample` in t
struct FuncSpec {
    std::string name;
    int nargs = 1;
    bool realValued = true;
    int ruleOrder = 0;
    std::string rule; // sexpr template in @1
    std::vector<double> init;
    std::string sample; // sexpr in t
};

// one summand of a listed generator: M, I, Iprime, J, D, Dl, P, Pprime
//   M/I/J/D/Dl: args = {coefficient or tau}
//   P/Pprime:   args = {chi1, chi2}
struct TermSpec {
    std::string kind;
    std::vector<std::string> args;
};

struct ClassificationCase {
    TheoremId theorem = TheoremId::Vf;
    std::string id;
    std::string title;
    Rat lambda;  // Power only
    CRat delta;  // Log / Power
    std::string potential;
    std::vector<std::string> h0; // h^{0a} of the x_a-linear imaginary part
    std::vector<std::vector<TermSpec>> basis;
    std::array<int, 5> signature{}; // r1, k0, k1, k2, k3
    int dim = 0;
    std::vector<ConstSpec> constants;
    std::vector<FuncSpec> functions;
    std::vector<double> avoid;
    double xfloor = 0;
    std::map<std::string, std::string> defs; // case-local macros
    std::vector<std::string> constraints;    // metadata, not machine-checked
    std::string maximality;                  // metadata, not machine-checked
    std::map<std::string, std::string> subsumes; // case id -> mapping note
    std::vector<std::string> notes;
};

// case directory: explicit argument, else $LIESYM_CASE_DIR, else the build
// default
std::string caseDir(const std::string& override_ = "");

std::vector<ClassificationCase> loadTheorem(TheoremId id,
                                            const std::string& dir = "");
std::vector<ClassificationCase> loadAll(const std::string& dir = "");
const ClassificationCase* findCase(const std::vector<ClassificationCase>& cs,
                                   const std::string& id);

// `$name` macro expansion (throws on unknown macros)
std::string expandMacros(const std::string& text,
                         const std::map<std::string, std::string>& defs);

// case materialized into a live context
struct CaseInstance {
    std::unique_ptr<Context> ctx;
    EquationInstance eq;
    std::vector<VectorField> basis;
    Ex potential;
};
CaseInstance materialize(const ClassificationCase& c);

// sample values, initial data, closed-form overrides, avoided times and the
// spatial sampling floor; `inst` must outlive neither `m` nor further moves
void configureOracle(const ClassificationCase& c, const CaseInstance& m,
                     NumericInstance& inst);

} // namespace liesym
