// Structured vector fields, their raw components and commutators.

#include "liesym/fields.hpp"

#include <sstream>

namespace liesym {

VectorField VectorField::zero(const Context& ctx) {
    VectorField v;
    v.tau = num(0);
    v.kappa.assign(ctx.n, std::vector<Ex>(ctx.n, num(0)));
    v.chi.assign(ctx.n, num(0));
    v.sigma = num(0);
    v.zeta = num(0);
    return v;
}

VectorField fD(const Context& ctx, Ex tau) {
    VectorField v = VectorField::zero(ctx);
    v.tau = std::move(tau);
    return v;
}

VectorField fDl(const Context& ctx, Ex tau, const Rat& lambda) {
    if (lambda.isZero()) throw kernel_error("D^lambda requires lambda != 0");
    VectorField v = VectorField::zero(ctx);
    v.zeta = -(num(Rat(1) / lambda) * Dt(ctx, tau));
    v.tau = std::move(tau);
    return v;
}

VectorField fJ(const Context& ctx, int a, int b) {
    if (a == b) throw kernel_error("J_aa is not defined");
    VectorField v = VectorField::zero(ctx);
    v.kappa[a][b] = num(-1); // xi^a = -x_b
    v.kappa[b][a] = num(1);  // xi^b = +x_a
    return v;
}

VectorField fP(const Context& ctx, std::vector<Ex> chi) {
    VectorField v = VectorField::zero(ctx);
    if ((int)chi.size() != ctx.n) throw kernel_error("P(chi) arity mismatch");
    v.chi = std::move(chi);
    return v;
}

VectorField fM(const Context& ctx, Ex sigma) {
    VectorField v = VectorField::zero(ctx);
    v.sigma = std::move(sigma);
    return v;
}

VectorField fI(const Context& ctx, Ex zeta) {
    VectorField v = VectorField::zero(ctx);
    v.zeta = std::move(zeta);
    return v;
}

VectorField fIprime(const Context& ctx, Ex d1, Ex d2, bool d2zero) {
    VectorField v = VectorField::zero(ctx);
    Ex t = sym("t");
    if (d2zero) {
        v.zeta = num(1);
        v.sigma = d1 * t;
    } else {
        Ex damp = ctx.fn("exp", {-(d2 * t)});
        v.zeta = d2 * damp;
        v.sigma = -(d1 * damp);
    }
    return v;
}

VectorField fPprime(Context& ctx, std::vector<Ex> chi, const std::vector<Ex>& h0,
                    Ex d1, Ex d2) {
    VectorField v = fP(ctx, chi);
    // zh = e^{-d2 t} int e^{d2 t} h^{0b} chi^b dt, izh = int zh dt, realized as
    // fresh abstract functions carrying their defining first-order rules
    std::string zh = ctx.freshName("zh");
    std::string izh = ctx.freshName("izh");
    ctx.declareFunc(zh, 1, true);
    ctx.declareFunc(izh, 1, true);
    Ex u = formal(1);
    Ex forcing = num(0);
    for (int b = 0; b < ctx.n; ++b)
        forcing = forcing + substSym(ctx, simplify(ctx, h0[b] * v.chi[b]), "t", u);
    ctx.setRule(zh, 1, -(substSym(ctx, d2, "t", u) * ctx.fn(zh, {u})) + forcing);
    ctx.setRule(izh, 1, ctx.fn(zh, {u}));
    Ex t = sym("t");
    v.zeta = -ctx.fn(zh, {t});
    v.sigma = -(d1 * ctx.fn(izh, {t}));
    return v;
}

VectorField vfAdd(const Context& ctx, const VectorField& a, const VectorField& b) {
    VectorField v = VectorField::zero(ctx);
    v.tau = a.tau + b.tau;
    for (int i = 0; i < ctx.n; ++i) {
        v.chi[i] = a.chi[i] + b.chi[i];
        for (int j = 0; j < ctx.n; ++j) v.kappa[i][j] = a.kappa[i][j] + b.kappa[i][j];
    }
    v.sigma = a.sigma + b.sigma;
    v.zeta = a.zeta + b.zeta;
    return v;
}

VectorField vfScale(const Context& ctx, const VectorField& a, const Ex& c) {
    VectorField v = VectorField::zero(ctx);
    v.tau = c * a.tau;
    for (int i = 0; i < ctx.n; ++i) {
        v.chi[i] = c * a.chi[i];
        for (int j = 0; j < ctx.n; ++j) v.kappa[i][j] = c * a.kappa[i][j];
    }
    v.sigma = c * a.sigma;
    v.zeta = c * a.zeta;
    return v;
}

bool vfIsZero(const Context& ctx, const VectorField& a) {
    if (!isZero(ctx, a.tau) || !isZero(ctx, a.sigma) || !isZero(ctx, a.zeta)) return false;
    for (int i = 0; i < ctx.n; ++i) {
        if (!isZero(ctx, a.chi[i])) return false;
        for (int j = 0; j < ctx.n; ++j)
            if (!isZero(ctx, a.kappa[i][j])) return false;
    }
    return true;
}

bool vfEqual(const Context& ctx, const VectorField& a, const VectorField& b) {
    return vfIsZero(ctx, vfAdd(ctx, a, vfScale(ctx, b, num(-1))));
}

std::string vfDescribe(const VectorField& a) {
    std::ostringstream os;
    os << "D(" << pretty(a.tau) << ") + kappa[";
    for (auto& row : a.kappa) {
        os << "(";
        for (auto& k : row) os << pretty(k) << " ";
        os << ")";
    }
    os << "] + P(";
    for (auto& c : a.chi) os << pretty(c) << ",";
    os << ") + (" << pretty(a.sigma) << ")M + (" << pretty(a.zeta) << ")I";
    return os.str();
}

RawField vfRaw(const Context& ctx, const VectorField& q) {
    RawField r;
    r.xt = q.tau;
    Ex tauT = Dt(ctx, q.tau);
    Ex tauTT = Dt(ctx, tauT);
    r.xs.resize(ctx.n);
    Ex phi = num(0); // M-coefficient: eta = (i phi + zeta) psi
    Ex xx = num(0);
    for (int a = 0; a < ctx.n; ++a) {
        Ex xa = ctx.xvar(a);
        xx = xx + xa * xa;
        Ex comp = Rat(1, 2) * tauT * xa + q.chi[a];
        for (int b = 0; b < ctx.n; ++b) comp = comp + q.kappa[a][b] * ctx.xvar(b);
        r.xs[a] = comp;
        phi = phi + Rat(1, 2) * Dt(ctx, q.chi[a]) * xa;
    }
    phi = phi + Rat(1, 8) * tauTT * xx + q.sigma;
    r.eta = (iu() * phi + q.zeta) * ctx.psi();
    r.etaStar = conjugate(ctx, r.eta);
    return r;
}

Ex applyRaw(const Context& ctx, const RawField& q, const Ex& e) {
    Ex out = q.xt * diffP(ctx, e, sym("t"));
    for (int a = 0; a < ctx.n; ++a)
        out = out + q.xs[a] * diffP(ctx, e, ctx.xvar(a));
    out = out + q.eta * diffP(ctx, e, ctx.psi());
    out = out + q.etaStar * diffP(ctx, e, ctx.psi(true));
    return out;
}

VectorField commutator(const Context& ctx, const VectorField& a, const VectorField& b) {
    VectorField v = VectorField::zero(ctx);
    Ex at = Dt(ctx, a.tau), bt = Dt(ctx, b.tau);
    v.tau = a.tau * bt - b.tau * at;
    for (int i = 0; i < ctx.n; ++i) {
        // [D, P] and [kappa, P] parts
        Ex c = a.tau * Dt(ctx, b.chi[i]) - Rat(1, 2) * at * b.chi[i] -
               (b.tau * Dt(ctx, a.chi[i]) - Rat(1, 2) * bt * a.chi[i]);
        for (int j = 0; j < ctx.n; ++j)
            c = c - a.kappa[i][j] * b.chi[j] + b.kappa[i][j] * a.chi[j];
        v.chi[i] = c;
        for (int j = 0; j < ctx.n; ++j) {
            Ex k = num(0);
            for (int l = 0; l < ctx.n; ++l)
                k = k + b.kappa[i][l] * a.kappa[l][j] - a.kappa[i][l] * b.kappa[l][j];
            v.kappa[i][j] = k;
        }
    }
    Ex pp = num(0);
    for (int i = 0; i < ctx.n; ++i)
        pp = pp + a.chi[i] * Dt(ctx, b.chi[i]) - b.chi[i] * Dt(ctx, a.chi[i]);
    v.sigma = a.tau * Dt(ctx, b.sigma) - b.tau * Dt(ctx, a.sigma) + Rat(1, 2) * pp;
    v.zeta = a.tau * Dt(ctx, b.zeta) - b.tau * Dt(ctx, a.zeta);
    return v;
}

RawField commutatorRaw(const Context& ctx, const RawField& a, const RawField& b) {
    RawField r;
    r.xt = applyRaw(ctx, a, b.xt) - applyRaw(ctx, b, a.xt);
    r.xs.resize(ctx.n);
    for (int i = 0; i < ctx.n; ++i)
        r.xs[i] = applyRaw(ctx, a, b.xs[i]) - applyRaw(ctx, b, a.xs[i]);
    r.eta = applyRaw(ctx, a, b.eta) - applyRaw(ctx, b, a.eta);
    r.etaStar = applyRaw(ctx, a, b.etaStar) - applyRaw(ctx, b, a.etaStar);
    return r;
}

} // namespace liesym
