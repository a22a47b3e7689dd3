// Differentiation (partial and total) and substitution.

#include "liesym/expr.hpp"

namespace liesym {

namespace {

struct DMode {
    int kind;  // 0 = partial w.r.t. var, 1 = total d/dt, 2 = total d/dx_a
    Ex var;
    int a = 0;
};

Ex dNode(const Context& ctx, const Ex& e, const DMode& m);

// derivative of the zero-order jet psi (conjugated or not) in the given mode
Ex dPsi(const Context& ctx, bool conj, const DMode& m) {
    switch (m.kind) {
        case 0:
            if (m.var->k == K::Jet && m.var->jt == 0 && m.var->cj == conj) {
                bool zero = true;
                for (int v : m.var->jx) zero = zero && v == 0;
                if (zero) return num(1);
            }
            return num(0);
        case 1: return ctx.psiT(conj);
        default: return ctx.psiX(m.a, conj);
    }
}

Ex dNode(const Context& ctx, const Ex& e, const DMode& m) {
    switch (e->k) {
        case K::Num: return num(0);
        case K::Sym: {
            if (m.kind == 0) {
                if (exEq(e, m.var)) return num(1);
            } else if (m.kind == 1) {
                if (e->name == "t") return num(1);
            } else {
                if (e->name == "x" + std::to_string(m.a + 1)) return num(1);
            }
            if (e->name == "rho") {
                // rho = (psi psi~)^{1/2}; expands only under total derivatives
                // or partial derivatives with respect to a jet coordinate
                if (m.kind != 0 || m.var->k == K::Jet) {
                    Ex dp = dPsi(ctx, false, m), dc = dPsi(ctx, true, m);
                    if (isZeroNode(dp) && isZeroNode(dc)) return num(0);
                    Ex p = ctx.psi(false), pc = ctx.psi(true);
                    return Rat(1, 2) * (dp * pc + p * dc) * powr(sym("rho"), Rat(-1));
                }
            }
            return num(0);
        }
        case K::Jet: {
            if (m.kind == 0) return exEq(e, m.var) ? num(1) : num(0);
            if (m.kind == 1) return jet(e->cj, e->jt + 1, e->jx);
            std::vector<int> jx = e->jx;
            jx[m.a]++;
            return jet(e->cj, e->jt, std::move(jx));
        }
        case K::Func: {
            const FuncDecl& d = ctx.funcs.at(e->name);
            std::vector<Ex> terms;
            for (int s = 0; s < d.nargs; ++s) {
                Ex da = dNode(ctx, e->a[s], m);
                if (isZeroNode(da)) continue;
                // differentiating conj(F) hits the conjugate-paired slot
                int slot = s;
                if (e->cj && d.pairA >= 0) {
                    if (s == d.pairA) slot = d.pairB;
                    else if (s == d.pairB) slot = d.pairA;
                }
                std::vector<int> mid = e->mid;
                mid[slot]++;
                terms.push_back(ctx.fn(e->name, e->a, std::move(mid), e->cj) * da);
            }
            return add(std::move(terms));
        }
        case K::Add: {
            std::vector<Ex> terms;
            for (auto& g : e->a) terms.push_back(dNode(ctx, g, m));
            return add(std::move(terms));
        }
        case K::Mul: {
            std::vector<Ex> terms;
            for (size_t i = 0; i < e->a.size(); ++i) {
                Ex dg = dNode(ctx, e->a[i], m);
                if (isZeroNode(dg)) continue;
                std::vector<Ex> fs;
                for (size_t j = 0; j < e->a.size(); ++j) fs.push_back(i == j ? dg : e->a[j]);
                terms.push_back(mul(std::move(fs)));
            }
            return add(std::move(terms));
        }
        case K::Pow: {
            Ex db = dNode(ctx, e->a[0], m);
            if (isZeroNode(db)) return num(0);
            return num(e->e) * powr(e->a[0], e->e - Rat(1)) * db;
        }
    }
    throw kernel_error("diff: bad node");
}

} // namespace

Ex diffP(const Context& ctx, const Ex& e, const Ex& var) {
    if (var->k != K::Sym && var->k != K::Jet)
        throw kernel_error("diffP: variable must be a symbol or jet");
    return dNode(ctx, e, DMode{0, var, 0});
}

Ex Dt(const Context& ctx, const Ex& e) { return dNode(ctx, e, DMode{1, nullptr, 0}); }

Ex Dx(const Context& ctx, const Ex& e, int a) { return dNode(ctx, e, DMode{2, nullptr, a}); }

Ex substitute(const Context& ctx, const Ex& e, const Subst& s) {
    switch (e->k) {
        case K::Num: return e;
        case K::Sym: {
            auto it = s.symMap.find(e->name);
            return it == s.symMap.end() ? e : it->second;
        }
        case K::Jet: {
            if (s.jetHook) {
                if (auto r = s.jetHook(*e, s.jetCtx)) return *r;
            }
            return e;
        }
        case K::Func: {
            std::vector<Ex> args;
            for (auto& g : e->a) args.push_back(substitute(ctx, g, s));
            auto it = s.funcMap.find(e->name);
            if (it == s.funcMap.end()) return ctx.fn(e->name, std::move(args), e->mid, e->cj);
            Ex tmpl = it->second;
            for (size_t slot = 0; slot < e->mid.size(); ++slot)
                for (int k = 0; k < e->mid[slot]; ++k)
                    tmpl = diffP(ctx, tmpl, formal((int)slot + 1));
            Ex v = substFormals(ctx, tmpl, args);
            return e->cj ? conjugate(ctx, v) : v;
        }
        case K::Add: {
            std::vector<Ex> ch;
            for (auto& g : e->a) ch.push_back(substitute(ctx, g, s));
            return add(std::move(ch));
        }
        case K::Mul: {
            std::vector<Ex> ch;
            for (auto& g : e->a) ch.push_back(substitute(ctx, g, s));
            return mul(std::move(ch));
        }
        case K::Pow:
            return powr(substitute(ctx, e->a[0], s), e->e);
    }
    throw kernel_error("substitute: bad node");
}

Ex substSym(const Context& ctx, const Ex& e, const std::string& name, const Ex& v) {
    Subst s;
    s.symMap[name] = v;
    return substitute(ctx, e, s);
}

Ex substFormals(const Context& ctx, const Ex& e, const std::vector<Ex>& args) {
    Subst s;
    for (size_t i = 0; i < args.size(); ++i)
        s.symMap["@" + std::to_string(i + 1)] = args[i];
    return substitute(ctx, e, s);
}

} // namespace liesym
