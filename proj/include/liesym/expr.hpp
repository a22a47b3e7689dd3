// Core expression tree of the symbolic kernel.
//
// An expression is an immutable shared tree over:
//   Num  - exact complex-rational constant
//   Sym  - named real scalar (t, x1..xn, rho, named constants, formals @1..@k)
//   Jet  - jet coordinate psi and its derivatives, with a conjugation flag
//   Func - application of a declared function, with a derivative multi-index
//          and a conjugation flag (conjugation is pushed to atoms; there is no
//          Conj operator node)
//   Add / Mul / Pow - algebraic operators; Pow has an exact rational exponent.
//
// Declared functions come in three flavours:
//   * builtins (sin, cos, tan, exp, ln, atan, abs, sgn, phi2) carrying explicit
//     gradient templates,
//   * abstract functions whose derivatives stay symbolic, and
//   * abstract functions of one variable with an order-reducing rewrite rule
//     (e.g. theta_tt -> h11 * theta), applied at construction time.
#pragma once

#include "liesym/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace liesym {

enum class K { Num, Sym, Jet, Func, Add, Mul, Pow };

struct Node;
using Ex = std::shared_ptr<const Node>;

struct Node {
    K k;
    CRat c;                  // Num
    std::string name;        // Sym, Func
    bool cj = false;         // Jet, Func: conjugated atom
    int jt = 0;              // Jet: order in t
    std::vector<int> jx;     // Jet: orders in x1..xn
    std::vector<int> mid;    // Func: derivative multi-index over argument slots
    std::vector<Ex> a;       // children (Add/Mul), args (Func), base (Pow at a[0])
    Rat e;                   // Pow exponent
};

// ---- raw builders (no context needed; only trivial folding) ----
Ex num(long long v);
Ex num(const Rat& r);
Ex cnum(const CRat& c);
Ex iu(); // imaginary unit
Ex sym(const std::string& name);
Ex jet(bool conj, int jt, std::vector<int> jx);
Ex add(std::vector<Ex> ch);
Ex mul(std::vector<Ex> ch);
Ex powr(Ex base, const Rat& e);

inline Ex operator+(const Ex& a, const Ex& b) { return add({a, b}); }
inline Ex operator-(const Ex& a) { return mul({num(-1), a}); }
inline Ex operator-(const Ex& a, const Ex& b) { return add({a, -b}); }
inline Ex operator*(const Ex& a, const Ex& b) { return mul({a, b}); }
inline Ex operator/(const Ex& a, const Ex& b) { return mul({a, powr(b, Rat(-1))}); }
inline Ex operator*(long long a, const Ex& b) { return mul({num(a), b}); }
inline Ex operator*(const Rat& a, const Ex& b) { return mul({num(a), b}); }
inline Ex operator+(const Ex& a, long long b) { return add({a, num(b)}); }
inline Ex operator-(const Ex& a, long long b) { return add({a, num(-b)}); }
inline Ex operator-(long long a, const Ex& b) { return add({num(a), -b}); }
inline Ex operator+(long long a, const Ex& b) { return add({num(a), b}); }
inline Ex operator*(const Ex& a, long long b) { return mul({a, num(b)}); }
inline Ex operator/(const Ex& a, long long b) { return mul({a, num(Rat(1, b))}); }
inline Ex operator/(long long a, const Ex& b) { return mul({num(a), powr(b, Rat(-1))}); }

bool isNum(const Ex& e, const CRat& v);
inline bool isZeroNode(const Ex& e) { return e->k == K::Num && e->c.isZero(); }

// total deterministic order on canonical expressions (atom-class precedence:
// constants < t < x_a < rho < jets < functions < sum bases)
int exCmp(const Ex& a, const Ex& b);
inline bool exEq(const Ex& a, const Ex& b) { return exCmp(a, b) == 0; }

// ---- declarations ----
enum class EvalKind { Abstract, Sin, Cos, Tan, Exp, Ln, Atan, Abs, Sgn, Phi2 };

struct FuncDecl {
    std::string name;
    int nargs = 1;
    bool realValued = true;
    bool positive = false;
    int pairA = -1, pairB = -1;        // conjugate-paired argument slots
    std::vector<Ex> grads;             // builtin gradient templates in @1..@k
    int ruleOrder = 0;                 // 0 = no rewrite rule
    Ex ruleRhs;                        // template in @1 (functions applied to @1)
    EvalKind eval = EvalKind::Abstract;
};

struct SymDecl {
    bool positive = false;
};

struct Context {
    int n = 2; // number of space variables
    std::map<std::string, FuncDecl> funcs;
    std::map<std::string, SymDecl> syms;

    Context();
    explicit Context(int n);

    void declareSym(const std::string& name, bool positive = false);
    FuncDecl& declareFunc(const std::string& name, int nargs, bool realValued,
                          bool positive = false);
    void setRule(const std::string& name, int order, Ex rhs);

    // function application; applies gradient templates / rewrite rules
    Ex fn(const std::string& name, std::vector<Ex> args, std::vector<int> mid = {},
          bool conj = false) const;
    // convenience: k-th t-derivative of a declared function of t
    Ex fd(const std::string& name, int order = 0) const;

    bool isDeclared(const std::string& name) const { return funcs.count(name) != 0; }

    // fresh names for synthesized functions (P' integrals etc.)
    std::string freshName(const std::string& stem);

    // convenience jets for dimension n
    Ex psi(bool conj = false) const;
    Ex psiT(bool conj = false) const;
    Ex psiX(int a, bool conj = false) const;
    Ex psiXX(int a, int b, bool conj = false) const;
    Ex psiTX(int a, bool conj = false) const;
    Ex xvar(int a) const; // x_{a+1}, 0-based

  private:
    mutable std::map<std::pair<std::string, int>, Ex> ruleMemo_;
    mutable std::map<std::pair<std::string, std::vector<int>>, Ex> gradMemo_;
    int fresh_ = 0;
    Ex ruleDeriv(const std::string& name, int k) const;
    Ex gradDeriv(const std::string& name, const std::vector<int>& mid) const;
};

Ex formal(int i); // @i, 1-based

// conjugation (pushed to atoms)
Ex conjugate(const Context& ctx, const Ex& e);

// partial derivative with respect to a Sym or zero-order Jet atom.
// d rho / d psi = psi*/(2 rho) etc.
Ex diffP(const Context& ctx, const Ex& e, const Ex& var);
// total derivatives: jets are differentiated as functions of (t,x)
Ex Dt(const Context& ctx, const Ex& e);
Ex Dx(const Context& ctx, const Ex& e, int a); // a 0-based

// substitution
struct Subst {
    std::map<std::string, Ex> symMap;
    // jet replacement hook; key fields of the node are (cj, jt, jx)
    std::optional<Ex> (*jetHook)(const Node&, const void*) = nullptr;
    const void* jetCtx = nullptr;
    // function name -> template in formals @1..@k; derivative indices are
    // applied to the template, conjugation flag conjugates the result
    std::map<std::string, Ex> funcMap;
};
Ex substitute(const Context& ctx, const Ex& e, const Subst& s);
Ex substSym(const Context& ctx, const Ex& e, const std::string& name, const Ex& v);
Ex substFormals(const Context& ctx, const Ex& e, const std::vector<Ex>& args);

// ---- canonicalization (simplify.cpp) ----
struct Factor {
    Ex base;
    Rat e;
};
using Mono = std::vector<Factor>; // sorted by exCmp on base
struct MonoCmp {
    bool operator()(const Mono& a, const Mono& b) const;
};
struct Poly {
    std::map<Mono, CRat, MonoCmp> t;
    bool empty() const { return t.empty(); }
};

Poly toPoly(const Context& ctx, const Ex& e);
Ex fromPoly(const Context& ctx, const Poly& p);
Poly polyMul(const Context& ctx, const Poly& a, const Poly& b);
Poly polyAdd(const Poly& a, const Poly& b);
Poly polyScale(const Poly& a, const CRat& c);
Poly polyPow(const Context& ctx, const Poly& p, const Rat& q);

Ex simplify(const Context& ctx, const Ex& e);
// decides whether e is identically zero; clears polynomial denominators and
// applies the trigonometric/absolute-value reductions before concluding
bool isZero(const Context& ctx, const Ex& e);

// groups a canonicalized expression by monomials in the given key atoms;
// returns key-monomial -> coefficient expression.  Throws if a key atom occurs
// inside a non-key factor unless allowInside is set.
std::map<Mono, Ex, MonoCmp> collect(const Context& ctx, const Ex& e,
                                    const std::vector<Ex>& keys,
                                    bool allowInside = false);

bool containsSym(const Ex& e, const std::string& name);
bool containsJet(const Ex& e);

// ---- serialization (parse.cpp) ----
std::string toSexpr(const Ex& e);
std::string pretty(const Ex& e);
// parse an s-expression; bare single-argument declared function names are
// applied to defaultArg (the time variable in case files, @1 in rule bodies)
Ex parseSexpr(const Context& ctx, const std::string& src, const Ex& defaultArg);
Ex parseSexpr(const Context& ctx, const std::string& src);

} // namespace liesym
