// Expression builders, ordering, context and conjugation.

#include "liesym/expr.hpp"

#include <algorithm>
#include <cassert>

namespace liesym {

static Ex mk(Node n) { return std::make_shared<const Node>(std::move(n)); }

Ex num(long long v) { Node n; n.k = K::Num; n.c = CRat(v); return mk(std::move(n)); }
Ex num(const Rat& r) { Node n; n.k = K::Num; n.c = CRat(r); return mk(std::move(n)); }
Ex cnum(const CRat& c) { Node n; n.k = K::Num; n.c = c; return mk(std::move(n)); }
Ex iu() { return cnum(CRat(Rat(0), Rat(1))); }

Ex sym(const std::string& name) {
    Node n; n.k = K::Sym; n.name = name;
    return mk(std::move(n));
}

Ex jet(bool conj, int jt, std::vector<int> jx) {
    Node n; n.k = K::Jet; n.cj = conj; n.jt = jt; n.jx = std::move(jx);
    return mk(std::move(n));
}

bool isNum(const Ex& e, const CRat& v) { return e->k == K::Num && e->c == v; }

Ex add(std::vector<Ex> ch) {
    std::vector<Ex> out;
    CRat acc;
    for (auto& c : ch) {
        if (!c) throw kernel_error("null child in add");
        if (c->k == K::Num) { acc = acc + c->c; continue; }
        if (c->k == K::Add) { out.insert(out.end(), c->a.begin(), c->a.end()); continue; }
        out.push_back(c);
    }
    if (!acc.isZero() || out.empty()) out.insert(out.begin(), cnum(acc));
    if (out.size() == 1) return out[0];
    Node n; n.k = K::Add; n.a = std::move(out);
    return mk(std::move(n));
}

Ex mul(std::vector<Ex> ch) {
    std::vector<Ex> out;
    CRat acc(1);
    for (auto& c : ch) {
        if (!c) throw kernel_error("null child in mul");
        if (c->k == K::Num) {
            acc = acc * c->c;
            if (acc.isZero()) return num(0);
            continue;
        }
        if (c->k == K::Mul) {
            for (auto& g : c->a) {
                if (g->k == K::Num) acc = acc * g->c;
                else out.push_back(g);
            }
            continue;
        }
        out.push_back(c);
    }
    if (acc.isZero()) return num(0);
    if (!acc.isOne() || out.empty()) out.insert(out.begin(), cnum(acc));
    if (out.size() == 1) return out[0];
    Node n; n.k = K::Mul; n.a = std::move(out);
    return mk(std::move(n));
}

Ex powr(Ex base, const Rat& e) {
    if (!base) throw kernel_error("null base in powr");
    if (e.isZero()) return num(1);
    if (e.isOne()) return base;
    if (base->k == K::Num) {
        if (base->c.isZero()) {
            if (e.n < 0) throw kernel_error("zero to negative power");
            return num(0);
        }
        if (base->c.isOne()) return num(1);
        if (e.isInt()) return cnum(base->c.ipow(e.n));
    }
    if (base->k == K::Pow) return powr(base->a[0], base->e * e);
    Node n; n.k = K::Pow; n.a = {std::move(base)}; n.e = e;
    return mk(std::move(n));
}

// ---- ordering ----

static int symPrec(const std::string& s) {
    if (!s.empty() && s[0] == '@') return 1;
    if (s == "t") return 2;
    if (s.size() >= 2 && s[0] == 'x' && s.find_first_not_of("0123456789", 1) == std::string::npos)
        return 3;
    if (s == "rho") return 4;
    return 0; // named constants first
}

static int prec(const Ex& e) {
    switch (e->k) {
        case K::Num: return -1;
        case K::Sym: return symPrec(e->name);
        case K::Jet: return 5;
        case K::Func: return 6;
        case K::Pow: return 8;
        case K::Mul: return 9;
        case K::Add: return 10;
    }
    return 11;
}

static int cmpVec(const std::vector<Ex>& a, const std::vector<Ex>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i)
        if (int c = exCmp(a[i], b[i])) return c;
    return 0;
}

int exCmp(const Ex& a, const Ex& b) {
    if (a.get() == b.get()) return 0;
    int pa = prec(a), pb = prec(b);
    if (pa != pb) return pa < pb ? -1 : 1;
    switch (a->k) {
        case K::Num:
            if (a->c == b->c) return 0;
            return a->c < b->c ? -1 : 1;
        case K::Sym:
            return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
        case K::Jet: {
            if (a->cj != b->cj) return a->cj < b->cj ? -1 : 1;
            if (a->jt != b->jt) return a->jt < b->jt ? -1 : 1;
            if (a->jx != b->jx) return a->jx < b->jx ? -1 : 1;
            return 0;
        }
        case K::Func: {
            if (a->name != b->name) return a->name < b->name ? -1 : 1;
            if (a->cj != b->cj) return a->cj < b->cj ? -1 : 1;
            if (a->mid != b->mid) return a->mid < b->mid ? -1 : 1;
            return cmpVec(a->a, b->a);
        }
        case K::Pow: {
            if (int c = exCmp(a->a[0], b->a[0])) return c;
            if (a->e == b->e) return 0;
            return a->e < b->e ? -1 : 1;
        }
        case K::Add:
        case K::Mul:
            return cmpVec(a->a, b->a);
    }
    return 0;
}

// ---- context ----

Context::Context() : Context(2) {}

Context::Context(int nn) : n(nn) {
    declareSym("t");
    for (int a = 1; a <= n; ++a) declareSym("x" + std::to_string(a));
    declareSym("rho", /*positive=*/true);

    auto builtin = [&](const std::string& name, EvalKind ev, Ex grad, bool positive = false) {
        FuncDecl& d = declareFunc(name, 1, true, positive);
        d.eval = ev;
        d.grads = {std::move(grad)};
    };
    Ex u = formal(1);
    builtin("sin", EvalKind::Sin, sym("__cos_placeholder")); // fixed below
    builtin("cos", EvalKind::Cos, sym("__sin_placeholder"));
    builtin("tan", EvalKind::Tan, sym("__tan_placeholder"));
    builtin("exp", EvalKind::Exp, sym("__exp_placeholder"), true);
    builtin("ln", EvalKind::Ln, powr(u, Rat(-1)));
    builtin("atan", EvalKind::Atan, powr(1 + u * u, Rat(-1)));
    builtin("abs", EvalKind::Abs, sym("__sgn_placeholder"), true);
    builtin("sgn", EvalKind::Sgn, num(0));
    // gradients that reference functions need fn(), available only now
    funcs["sin"].grads = {fn("cos", {u})};
    funcs["cos"].grads = {-fn("sin", {u})};
    funcs["tan"].grads = {1 + fn("tan", {u}) * fn("tan", {u})};
    funcs["exp"].grads = {fn("exp", {u})};
    funcs["abs"].grads = {fn("sgn", {u})};
    // polar angle phi2(x,y) = atan2(y, x) with rational gradient
    FuncDecl& p = declareFunc("phi2", 2, true);
    p.eval = EvalKind::Phi2;
    Ex r2 = formal(1) * formal(1) + formal(2) * formal(2);
    p.grads = {-formal(2) * powr(r2, Rat(-1)), formal(1) * powr(r2, Rat(-1))};
}

void Context::declareSym(const std::string& name, bool positive) {
    syms[name] = SymDecl{positive};
}

FuncDecl& Context::declareFunc(const std::string& name, int nargs, bool realValued,
                               bool positive) {
    FuncDecl d;
    d.name = name;
    d.nargs = nargs;
    d.realValued = realValued;
    d.positive = positive;
    return funcs[name] = std::move(d);
}

void Context::setRule(const std::string& name, int order, Ex rhs) {
    auto it = funcs.find(name);
    if (it == funcs.end()) throw kernel_error("rule for undeclared function " + name);
    if (order < 1) throw kernel_error("rule order must be >= 1");
    it->second.ruleOrder = order;
    it->second.ruleRhs = std::move(rhs);
    ruleMemo_.clear();
}

std::string Context::freshName(const std::string& stem) {
    return stem + "_" + std::to_string(++fresh_);
}

Ex formal(int i) { return sym("@" + std::to_string(i)); }

Ex Context::ruleDeriv(const std::string& name, int k) const {
    auto key = std::make_pair(name, k);
    auto it = ruleMemo_.find(key);
    if (it != ruleMemo_.end()) return it->second;
    const FuncDecl& d = funcs.at(name);
    Ex r;
    if (k == d.ruleOrder) r = d.ruleRhs;
    else r = diffP(*this, ruleDeriv(name, k - 1), formal(1));
    ruleMemo_[key] = r;
    return r;
}

Ex Context::gradDeriv(const std::string& name, const std::vector<int>& mid) const {
    auto key = std::make_pair(name, mid);
    auto it = gradMemo_.find(key);
    if (it != gradMemo_.end()) return it->second;
    const FuncDecl& d = funcs.at(name);
    int slot = -1, total = 0;
    for (size_t i = 0; i < mid.size(); ++i) {
        total += mid[i];
        if (slot < 0 && mid[i] > 0) slot = (int)i;
    }
    Ex r;
    if (total == 1) {
        r = d.grads[slot];
    } else {
        std::vector<int> lower = mid;
        lower[slot]--;
        r = diffP(*this, gradDeriv(name, lower), formal(slot + 1));
    }
    gradMemo_[key] = r;
    return r;
}

// special values of builtins at exact rational points
static std::optional<Ex> builtinValue(const FuncDecl& d, const Ex& arg) {
    if (arg->k != K::Num) return std::nullopt;
    const CRat& c = arg->c;
    switch (d.eval) {
        case EvalKind::Sin: case EvalKind::Tan: case EvalKind::Atan:
            if (c.isZero()) return num(0);
            return std::nullopt;
        case EvalKind::Cos:
            if (c.isZero()) return num(1);
            return std::nullopt;
        case EvalKind::Exp:
            if (c.isZero()) return num(1);
            return std::nullopt;
        case EvalKind::Ln:
            if (c.isOne()) return num(0);
            return std::nullopt;
        case EvalKind::Abs:
            if (c.isReal()) return num(c.re < Rat(0) ? -c.re : c.re);
            return std::nullopt;
        case EvalKind::Sgn:
            if (c.isReal() && !c.re.isZero()) return num(c.re < Rat(0) ? -1 : 1);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

Ex Context::fn(const std::string& name, std::vector<Ex> args, std::vector<int> mid,
               bool conj) const {
    auto it = funcs.find(name);
    if (it == funcs.end()) throw kernel_error("undeclared function " + name);
    const FuncDecl& d = it->second;
    if ((int)args.size() != d.nargs)
        throw kernel_error("arity mismatch for " + name);
    mid.resize(d.nargs, 0);
    for (int m : mid)
        if (m < 0) throw kernel_error("negative derivative index for " + name);
    if (d.realValued) conj = false;

    bool anyDeriv = false;
    for (int m : mid) anyDeriv = anyDeriv || m > 0;

    if (!d.grads.empty()) {
        if (!anyDeriv) {
            if (auto v = builtinValue(d, args[0])) return *v;
            // ln(exp(u)) = u and ln(exp(u)^r) = r u (exp is real-positive)
            if (d.eval == EvalKind::Ln) {
                const Ex& arg = args[0];
                auto isExp = [this](const Ex& e) {
                    if (e->k != K::Func || e->cj) return false;
                    auto jt = funcs.find(e->name);
                    if (jt == funcs.end() || jt->second.eval != EvalKind::Exp)
                        return false;
                    for (int m : e->mid)
                        if (m > 0) return false;
                    return true;
                };
                if (isExp(arg)) return arg->a[0];
                if (arg->k == K::Pow && isExp(arg->a[0]))
                    return mul({num(arg->e), arg->a[0]->a[0]});
            }
        } else {
            Ex tmpl = gradDeriv(name, mid);
            return substFormals(*this, tmpl, args);
        }
    } else if (d.ruleOrder > 0 && mid[0] >= d.ruleOrder) {
        Ex tmpl = ruleDeriv(name, mid[0]);
        Ex e = substFormals(*this, tmpl, {args[0]});
        return conj ? conjugate(*this, e) : e;
    }

    Node n;
    n.k = K::Func;
    n.name = name;
    n.cj = conj;
    n.a = std::move(args);
    n.mid = std::move(mid);
    return mk(std::move(n));
}

Ex Context::fd(const std::string& name, int order) const {
    return fn(name, {sym("t")}, {order});
}

Ex Context::psi(bool conj) const { return jet(conj, 0, std::vector<int>(n, 0)); }
Ex Context::psiT(bool conj) const { return jet(conj, 1, std::vector<int>(n, 0)); }
Ex Context::psiX(int a, bool conj) const {
    std::vector<int> jx(n, 0); jx[a] = 1;
    return jet(conj, 0, jx);
}
Ex Context::psiXX(int a, int b, bool conj) const {
    std::vector<int> jx(n, 0); jx[a]++; jx[b]++;
    return jet(conj, 0, jx);
}
Ex Context::psiTX(int a, bool conj) const {
    std::vector<int> jx(n, 0); jx[a] = 1;
    return jet(conj, 1, jx);
}
Ex Context::xvar(int a) const { return sym("x" + std::to_string(a + 1)); }

// ---- conjugation ----

Ex conjugate(const Context& ctx, const Ex& e) {
    switch (e->k) {
        case K::Num: return cnum(e->c.conj());
        case K::Sym: return e; // all symbols are real-valued
        case K::Jet: return jet(!e->cj, e->jt, e->jx);
        case K::Func: {
            // A conjugated function node denotes conj((d^mid F)(args)): the
            // arguments and the multi-index are untouched (real-valued
            // functions are assumed to be applied to real arguments).
            const FuncDecl& d = ctx.funcs.at(e->name);
            if (d.realValued) return e;
            return ctx.fn(e->name, e->a, e->mid, !e->cj);
        }
        case K::Add: {
            std::vector<Ex> ch;
            for (auto& g : e->a) ch.push_back(conjugate(ctx, g));
            return add(std::move(ch));
        }
        case K::Mul: {
            std::vector<Ex> ch;
            for (auto& g : e->a) ch.push_back(conjugate(ctx, g));
            return mul(std::move(ch));
        }
        case K::Pow:
            return powr(conjugate(ctx, e->a[0]), e->e);
    }
    throw kernel_error("conjugate: bad node");
}

bool containsSym(const Ex& e, const std::string& name) {
    switch (e->k) {
        case K::Sym: return e->name == name;
        case K::Num: return false;
        case K::Jet: return false;
        default:
            for (auto& g : e->a)
                if (containsSym(g, name)) return true;
            return false;
    }
}

bool containsJet(const Ex& e) {
    if (e->k == K::Jet) return true;
    for (auto& g : e->a)
        if (containsJet(g)) return true;
    return false;
}

} // namespace liesym
