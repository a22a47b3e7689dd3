// Equivalence-group point transformations and their actions.

#include "liesym/equivgroup.hpp"

#include "liesym/oracle.hpp"

#include <cmath>

namespace liesym {

namespace {

Ex tsym() { return sym("t"); }

Ex compAt(const Context& c, const Ex& f, const Ex& arg) {
    return substSym(c, f, "t", arg);
}

Ex Tt(const Context& c, const PointTransformation& g) {
    return simplify(c, Dt(c, g.T));
}

Ex absTt(const Context& c, const PointTransformation& g) {
    return simplify(c, num(g.sgnTt) * Dt(c, g.T));
}

Ex Oent(const PointTransformation& g, int a, int b) { return num(g.O[a][b]); }

bool hasAbstract(const Context& c, const Ex& e) {
    if (e->k == K::Func) {
        auto it = c.funcs.find(e->name);
        if (it != c.funcs.end() && it->second.eval == EvalKind::Abstract) return true;
    }
    for (auto& ch : e->a)
        if (hasAbstract(c, ch)) return true;
    return false;
}

std::vector<std::vector<Rat>> identityO(int n) {
    std::vector<std::vector<Rat>> O(n, std::vector<Rat>(n, Rat(0)));
    for (int a = 0; a < n; ++a) O[a][a] = Rat(1);
    return O;
}

PointTransformation baseline(const Context& c, ClassId tag) {
    PointTransformation g;
    g.tag = tag;
    g.n = c.n;
    g.T = tsym();
    g.Tinv = tsym();
    g.sgnTt = 1;
    g.O = identityO(c.n);
    g.X.assign(c.n, num(0));
    g.Sigma = num(0);
    g.Z = num(0);
    g.c = num(0);
    return g;
}

// exact evaluation of a real expression in t at a rational point
std::optional<Rat> evalRatAt(const Context& c, const Ex& e, const Rat& t0) {
    Ex v = simplify(c, substSym(c, e, "t", num(t0)));
    if (v->k != K::Num || !v->c.im.isZero()) return std::nullopt;
    return v->c.re;
}

// antiderivative of a polynomial in t with constant coefficients
Ex polyAntiderivative(const Context& c, const Ex& f) {
    auto m = collect(c, simplify(c, f), {tsym()});
    Ex out = num(0);
    for (auto& [mono, coef] : m) {
        if (containsSym(coef, "t") || containsJet(coef))
            throw kernel_error("coefficient is not constant");
        long long k = 0;
        if (!mono.empty()) {
            if (!mono[0].e.isInt() || mono[0].e.n < 0)
                throw kernel_error("not a polynomial in t");
            k = mono[0].e.n;
        }
        out = out + Rat(1, k + 1) * coef * powr(tsym(), Rat(k + 1));
    }
    return simplify(c, out);
}

// polynomial solution of Z_t + d2 Z = rhs (d2 != 0)
Ex solveLinearOde(const Context& c, const Rat& d2, const Ex& rhs) {
    Ex Z = num(0);
    for (int it = 0; it < 40; ++it) {
        Ex next = simplify(c, (Rat(1) / d2) * (rhs - Dt(c, Z)));
        if (isZero(c, next - Z)) return Z;
        Z = next;
    }
    throw kernel_error("linear ODE iteration did not terminate");
}

Ex reExpr(const Context& c, const Ex& e) {
    return simplify(c, Rat(1, 2) * (e + conjugate(c, e)));
}

Ex imExpr(const Context& c, const Ex& e) {
    return simplify(c, (e - conjugate(c, e)) / (2 * iu()));
}

} // namespace

void validate(Context& c, const PointTransformation& g) {
    if (g.n != c.n) throw kernel_error("transformation dimension mismatch");
    if (g.sgnTt != 1 && g.sgnTt != -1)
        throw kernel_error("sign of T_t must be declared as +1 or -1");
    if ((int)g.O.size() != g.n || (int)g.X.size() != g.n)
        throw kernel_error("transformation parameter arity mismatch");
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            Rat s(0);
            for (int k = 0; k < g.n; ++k) s = s + g.O[a][k] * g.O[b][k];
            if (!(s == Rat(a == b ? 1 : 0)))
                throw kernel_error("O is not orthogonal");
        }
    Ex tt = Tt(c, g);
    if (isZero(c, tt)) throw kernel_error("T_t vanishes identically");
    // numeric sign spot-check for closed-form T
    if (!hasAbstract(c, tt)) {
        bool agrees = false, evaluable = false;
        try {
            NumericInstance inst(c, 0x5157u);
            for (double t0 : {-1.7, -0.6, 0.2, 0.9, 1.8}) {
                SamplePoint p;
                p.t = t0;
                p.x.assign(c.n, 0.1);
                Cplx v = inst.eval(tt, p);
                if (std::isfinite(v.real()) && std::abs(v.real()) > 1e-12) {
                    evaluable = true;
                    // one agreeing sample suffices: T may be only locally
                    // admissible (e.g. T = t^2 + 1 away from t = 0)
                    if (v.real() * g.sgnTt > 0) agrees = true;
                }
            }
        } catch (...) {
            evaluable = false; // the declared sign is taken on trust
        }
        if (evaluable && !agrees)
            throw kernel_error("declared sign of T_t contradicts its values");
    }
    switch (g.tag) {
    case ClassId::S:
    case ClassId::F:
    case ClassId::F1:
        break;
    case ClassId::Vtilde:
    case ClassId::V:
        if (!isZero(c, Dt(c, tt))) throw kernel_error("V level requires T_tt = 0");
        if (!isZero(c, Dt(c, g.Z))) throw kernel_error("V level requires Z_t = 0");
        break;
    case ClassId::Vf:
        if (!isZero(c, tt - num(g.sgnTt)))
            throw kernel_error("Vf transformations require T_t = +-1");
        if (!isZero(c, g.Z)) throw kernel_error("Vf transformations require Z = 0");
        if (!isZero(c, g.c)) throw kernel_error("Vf transformations require c = 0");
        break;
    case ClassId::P0delta:
        if (!isZero(c, Dt(c, tt))) throw kernel_error("P0 requires affine T");
        break;
    case ClassId::Pldelta: {
        if (g.lambda.isZero()) throw kernel_error("P_lambda tag requires lambda != 0");
        Ex want = simplify(c, (Rat(-1) / g.lambda) * c.fn("ln", {absTt(c, g)}));
        if (!isZero(c, g.Z - want))
            throw kernel_error("P_lambda requires e^Z = |T_t|^{-1/lambda}");
        break;
    }
    }
}

PointTransformation ptIdentity(Context& c, ClassId tag) {
    PointTransformation g = baseline(c, tag);
    validate(c, g);
    return g;
}

PointTransformation ptD(Context& c, Ex T, Ex Tinv, int sgnTt, ClassId tag,
                        Rat lambda) {
    PointTransformation g = baseline(c, tag);
    g.T = simplify(c, T);
    g.sgnTt = sgnTt;
    g.lambda = lambda;
    if (Tinv)
        g.Tinv = simplify(c, Tinv);
    else {
        auto inv = invertFracLinear(c, g.T);
        g.Tinv = inv ? *inv : Ex();
    }
    if (tag == ClassId::Pldelta)
        g.Z = simplify(c, (Rat(-1) / lambda) * c.fn("ln", {absTt(c, g)}));
    validate(c, g);
    return g;
}

PointTransformation ptJ(Context& c, std::vector<std::vector<Rat>> O, ClassId tag) {
    PointTransformation g = baseline(c, tag);
    g.O = std::move(O);
    validate(c, g);
    return g;
}

PointTransformation ptP(Context& c, std::vector<Ex> X, ClassId tag) {
    PointTransformation g = baseline(c, tag);
    for (int a = 0; a < c.n; ++a) g.X[a] = simplify(c, X[a]);
    validate(c, g);
    return g;
}

PointTransformation ptM(Context& c, Ex Sigma, ClassId tag) {
    PointTransformation g = baseline(c, tag);
    g.Sigma = simplify(c, Sigma);
    validate(c, g);
    return g;
}

PointTransformation ptI(Context& c, Ex Z, ClassId tag) {
    PointTransformation g = baseline(c, tag);
    g.Z = simplify(c, Z);
    validate(c, g);
    return g;
}

std::optional<Ex> invertFracLinear(Context& c, const Ex& T) {
    Ex t1 = Dt(c, T), t2 = Dt(c, t1), t3 = Dt(c, t2);
    if (!isZero(c, 2 * t3 * t1 - 3 * t2 * t2)) return std::nullopt;
    for (Rat s0 : {Rat(0), Rat(1), Rat(-1), Rat(2), Rat(3)}) {
        auto b0 = evalRatAt(c, T, s0);
        auto p0 = evalRatAt(c, t1, s0);
        auto q0 = evalRatAt(c, t2, s0);
        if (!b0 || !p0 || !q0 || p0->isZero()) continue;
        Rat cc = Rat(0) - *q0 / (Rat(2) * *p0);
        Rat aa = *p0 + *b0 * cc;
        // T(t) = (aa (t - s0) + b0) / (cc (t - s0) + 1)
        Rat a = aa, b = *b0 - aa * s0, cl = cc, d = Rat(1) - cc * s0;
        Ex cand = (a * tsym() + num(b)) / (cl * tsym() + num(d));
        if (!isZero(c, T - cand)) continue;
        return simplify(c, (d * tsym() - num(b)) / (num(a) - cl * tsym()));
    }
    return std::nullopt;
}

VarFormulas actVars(Context& c, const PointTransformation& g) {
    validate(c, g);
    Ex abst = absTt(c, g);
    Ex tt2 = Dt(c, Dt(c, g.T));
    VarFormulas v;
    v.t = g.T;
    v.x.resize(g.n);
    for (int a = 0; a < g.n; ++a) {
        Ex xa = num(0);
        for (int b = 0; b < g.n; ++b) xa = xa + Oent(g, a, b) * c.xvar(b);
        v.x[a] = simplify(c, powr(abst, Rat(1, 2)) * xa + g.X[a]);
    }
    Ex xx = num(0), lin = num(0);
    for (int a = 0; a < g.n; ++a) {
        xx = xx + c.xvar(a) * c.xvar(a);
        for (int b = 0; b < g.n; ++b)
            lin = lin + Dt(c, g.X[b]) * Oent(g, b, a) * c.xvar(a);
    }
    Ex expo = (iu() / 8) * (tt2 / abst) * xx +
              (iu() / 2) * num(g.sgnTt) * powr(abst, Rat(-1, 2)) * lin +
              iu() * g.Sigma + g.Z;
    v.psi = simplify(c, c.fn("exp", {expo}) * c.psi(g.sgnTt < 0));
    return v;
}

namespace {

// simultaneous substitution expressing old (x, rho) via the new ones, then
// t -> Tinv
Ex toNewVars(Context& c, const PointTransformation& g, const Ex& e, bool withRho) {
    Ex abst = absTt(c, g);
    Subst s;
    for (int b = 0; b < g.n; ++b) {
        Ex xb = num(0);
        for (int a = 0; a < g.n; ++a)
            xb = xb + Oent(g, a, b) * (c.xvar(a) - g.X[a]);
        s.symMap["x" + std::to_string(b + 1)] = powr(abst, Rat(-1, 2)) * xb;
    }
    if (withRho) s.symMap["rho"] = c.fn("exp", {-g.Z}) * sym("rho");
    Ex out = substitute(c, e, s);
    if (!g.Tinv)
        throw kernel_error("T is not symbolically invertible; "
                           "use the old-variable form");
    return simplify(c, substSym(c, out, "t", g.Tinv));
}

} // namespace

Ex actOnSOldVars(Context& c, const PointTransformation& g, const Ex& S) {
    Ex abst = absTt(c, g);
    Ex t1 = Tt(c, g), t2 = Dt(c, t1), t3 = Dt(c, t2);
    Ex Shat = g.sgnTt < 0 ? conjugate(c, S) : S;
    Ex xx = num(0);
    for (int a = 0; a < g.n; ++a) xx = xx + c.xvar(a) * c.xvar(a);
    Ex lin = num(0);
    for (int b = 0; b < g.n; ++b) {
        Ex db = Dt(c, simplify(c, Dt(c, g.X[b]) / t1));
        for (int a = 0; a < g.n; ++a) lin = lin + db * Oent(g, b, a) * c.xvar(a);
    }
    Ex xtxt = num(0);
    for (int a = 0; a < g.n; ++a) xtxt = xtxt + Dt(c, g.X[a]) * Dt(c, g.X[a]);
    Ex out = Shat / abst +
             (2 * t3 * t1 - 3 * t2 * t2) / (Rat(16) * num(g.sgnTt) * powr(t1, Rat(3))) * xx +
             Rat(1, 2) * num(g.sgnTt) * powr(abst, Rat(-1, 2)) * lin +
             (Dt(c, g.Sigma) - iu() * Dt(c, g.Z)) / t1 -
             (xtxt + Rat(c.n) * iu() * t2) / (4 * t1 * t1);
    return simplify(c, out);
}

Ex actOnS(Context& c, const PointTransformation& g, const Ex& S) {
    return toNewVars(c, g, actOnSOldVars(c, g, S), true);
}

Ex transformedPotentialOldVars(Context& c, const PointTransformation& g,
                               const EquationInstance& e) {
    Ex abst = absTt(c, g);
    Ex t1 = Tt(c, g), t2 = Dt(c, t1), t3 = Dt(c, t2);
    Ex Vhat = g.sgnTt < 0 ? conjugate(c, e.V) : e.V;
    Ex xtxt = num(0);
    for (int a = 0; a < g.n; ++a) xtxt = xtxt + Dt(c, g.X[a]) * Dt(c, g.X[a]);
    switch (e.id) {
    case ClassId::Vtilde:
    case ClassId::V:
    case ClassId::Vf: {
        Ex lin = num(0);
        for (int b = 0; b < g.n; ++b)
            for (int a = 0; a < g.n; ++a)
                lin = lin + Dt(c, Dt(c, g.X[b])) * Oent(g, b, a) * c.xvar(a);
        Ex out = Vhat / abst + Rat(1, 2) * powr(abst, Rat(-3, 2)) * lin +
                 Dt(c, g.Sigma) / t1 - xtxt / (4 * t1 * t1) - g.c;
        return simplify(c, out);
    }
    case ClassId::P0delta: {
        CRat dhat = e.delta;
        if (g.sgnTt < 0) dhat.im = Rat(0) - dhat.im;
        Ex lin = num(0);
        for (int b = 0; b < g.n; ++b)
            for (int a = 0; a < g.n; ++a)
                lin = lin + Dt(c, Dt(c, g.X[b])) * Oent(g, b, a) * c.xvar(a);
        Ex out = Vhat / abst + Rat(1, 2) * powr(abst, Rat(-3, 2)) * lin -
                 cnum(dhat) * g.Z / abst - xtxt / (4 * t1 * t1) +
                 (Dt(c, g.Sigma) - iu() * Dt(c, g.Z)) / t1;
        return simplify(c, out);
    }
    case ClassId::Pldelta: {
        Ex xx = num(0);
        for (int a = 0; a < g.n; ++a) xx = xx + c.xvar(a) * c.xvar(a);
        Ex lin = num(0);
        for (int b = 0; b < g.n; ++b) {
            Ex db = Dt(c, simplify(c, Dt(c, g.X[b]) / t1));
            for (int a = 0; a < g.n; ++a) lin = lin + db * Oent(g, b, a) * c.xvar(a);
        }
        Ex out = Vhat / abst +
                 (2 * t3 * t1 - 3 * t2 * t2) /
                     (Rat(16) * num(g.sgnTt) * powr(t1, Rat(3))) * xx +
                 Rat(1, 2) * num(g.sgnTt) * powr(abst, Rat(-1, 2)) * lin +
                 Dt(c, g.Sigma) / t1 - xtxt / (4 * t1 * t1) +
                 iu() * num(e.lambdaPrime()) * t2 / (t1 * t1);
        return simplify(c, out);
    }
    default:
        throw kernel_error("potential transform undefined for this class");
    }
}

EquationInstance actOnElements(Context& c, const PointTransformation& g,
                               const EquationInstance& e) {
    if (g.tag != e.id) throw kernel_error("transformation tag does not match class");
    Elements el;
    switch (e.id) {
    case ClassId::Vtilde:
    case ClassId::V:
    case ClassId::Vf: {
        Ex abst = absTt(c, g);
        Ex fhat = g.sgnTt < 0 ? conjugate(c, e.f) : e.f;
        fhat = substSym(c, fhat, "rho", c.fn("exp", {-g.Z}) * sym("rho"));
        el.f = simplify(c, fhat / abst + g.c);
        el.V = toNewVars(c, g, transformedPotentialOldVars(c, g, e), false);
        break;
    }
    case ClassId::P0delta: {
        Ex t1n = simplify(c, Tt(c, g));
        if (t1n->k != K::Num || !t1n->c.im.isZero())
            throw kernel_error("P0 transform requires constant T_t");
        Rat absR = t1n->c.re;
        if (absR < Rat(0)) absR = Rat(0) - absR;
        CRat dhat = e.delta;
        if (g.sgnTt < 0) dhat.im = Rat(0) - dhat.im;
        el.delta = dhat / CRat(absR);
        el.V = toNewVars(c, g, transformedPotentialOldVars(c, g, e), false);
        break;
    }
    case ClassId::Pldelta: {
        CRat dhat = e.delta;
        if (g.sgnTt < 0) dhat.im = Rat(0) - dhat.im;
        el.delta = dhat; // mu = 1
        el.lambda = e.lambda;
        el.V = toNewVars(c, g, transformedPotentialOldVars(c, g, e), false);
        break;
    }
    default:
        throw kernel_error("element action undefined for this class");
    }
    el.lambda = e.lambda;
    return buildEquation(c, e.id, el, e.n);
}

PointTransformation compose(Context& c, const PointTransformation& g2,
                            const PointTransformation& g1) {
    if (g2.tag != g1.tag) throw kernel_error("composition of different class tags");
    PointTransformation g = baseline(c, g1.tag);
    g.lambda = g1.lambda;
    g.sgnTt = g1.sgnTt * g2.sgnTt;
    g.T = simplify(c, compAt(c, g2.T, g1.T));
    if (g1.Tinv && g2.Tinv)
        g.Tinv = simplify(c, compAt(c, g1.Tinv, g2.Tinv));
    else
        g.Tinv = Ex();
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            Rat s(0);
            for (int k = 0; k < g.n; ++k) s = s + g2.O[a][k] * g1.O[k][b];
            g.O[a][b] = s;
        }
    Ex abs2AtT1 = compAt(c, absTt(c, g2), g1.T);
    for (int a = 0; a < g.n; ++a) {
        Ex xa = compAt(c, g2.X[a], g1.T);
        for (int b = 0; b < g.n; ++b)
            xa = xa + powr(abs2AtT1, Rat(1, 2)) * Oent(g2, a, b) * g1.X[b];
        g.X[a] = simplify(c, xa);
    }
    // phase of the composite at x = 0: the g2 phase evaluated at x~ = X1
    Ex tt2of2 = Dt(c, Dt(c, g2.T));
    Ex quad = num(0), lin = num(0), xx1 = num(0);
    for (int a = 0; a < g.n; ++a) xx1 = xx1 + g1.X[a] * g1.X[a];
    quad = Rat(1, 8) * compAt(c, simplify(c, tt2of2 / absTt(c, g2)), g1.T) * xx1;
    for (int b = 0; b < g.n; ++b)
        for (int a = 0; a < g.n; ++a)
            lin = lin + Rat(1, 2) * num(g2.sgnTt) *
                      compAt(c, simplify(c, Dt(c, g2.X[b]) *
                                                powr(absTt(c, g2), Rat(-1, 2))),
                             g1.T) *
                      Oent(g2, b, a) * g1.X[a];
    g.Sigma = simplify(c, num(g2.sgnTt) * g1.Sigma + quad + lin +
                              compAt(c, g2.Sigma, g1.T));
    if (g.tag == ClassId::Pldelta)
        g.Z = simplify(c, (Rat(-1) / g.lambda) * c.fn("ln", {absTt(c, g)}));
    else
        g.Z = simplify(c, g1.Z + compAt(c, g2.Z, g1.T));
    Ex c1hat = g2.sgnTt < 0 ? conjugate(c, g1.c) : g1.c;
    g.c = simplify(c, g2.c + c1hat / abs2AtT1);
    validate(c, g);
    return g;
}

PointTransformation inverse(Context& c, const PointTransformation& g) {
    if (!g.Tinv) throw kernel_error("inverse requires a symbolic T inverse");
    PointTransformation h = baseline(c, g.tag);
    h.lambda = g.lambda;
    h.sgnTt = g.sgnTt;
    h.T = g.Tinv;
    h.Tinv = g.T;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) h.O[a][b] = g.O[b][a];
    Ex abst = absTt(c, g);
    for (int a = 0; a < g.n; ++a) {
        Ex xa = num(0);
        for (int b = 0; b < g.n; ++b)
            xa = xa + Oent(g, b, a) * g.X[b]; // O^T entry (a, b)
        h.X[a] = simplify(c, -compAt(c, simplify(c, powr(abst, Rat(-1, 2)) * xa),
                                     g.Tinv));
    }
    if (g.tag == ClassId::Pldelta)
        h.Z = simplify(c, (Rat(-1) / g.lambda) * c.fn("ln", {absTt(c, h)}));
    else
        h.Z = simplify(c, -compAt(c, g.Z, g.Tinv));
    // Sigma and c from the residual of the partial composition
    PointTransformation probe = compose(c, h, g);
    h.Sigma = simplify(c, -compAt(c, probe.Sigma, g.Tinv));
    h.c = simplify(c, -probe.c);
    validate(c, h);
    return h;
}

namespace {

VectorField pushD(Context& c, const PointTransformation& g, const VectorField& q) {
    if (isZero(c, g.T - tsym())) return q;
    if (!g.Tinv) throw kernel_error("pushforward requires a symbolic T inverse");
    Ex t1 = Tt(c, g), abst = absTt(c, g);
    VectorField r = VectorField::zero(c);
    r.tau = simplify(c, compAt(c, simplify(c, t1 * q.tau), g.Tinv));
    r.kappa = q.kappa;
    for (int a = 0; a < c.n; ++a)
        r.chi[a] = simplify(
            c, compAt(c, simplify(c, powr(abst, Rat(1, 2)) * q.chi[a]), g.Tinv));
    r.sigma = simplify(c, compAt(c, q.sigma, g.Tinv));
    r.zeta = simplify(c, compAt(c, q.zeta, g.Tinv));
    return r;
}

VectorField pushJ(Context& c, const PointTransformation& g, const VectorField& q) {
    VectorField r = q;
    for (int a = 0; a < c.n; ++a) {
        Ex ca = num(0);
        for (int b = 0; b < c.n; ++b) ca = ca + Oent(g, a, b) * q.chi[b];
        r.chi[a] = simplify(c, ca);
    }
    for (int a = 0; a < c.n; ++a)
        for (int b = 0; b < c.n; ++b) {
            Ex k = num(0);
            for (int i = 0; i < c.n; ++i)
                for (int j = 0; j < c.n; ++j)
                    k = k + Oent(g, a, i) * q.kappa[i][j] * Oent(g, b, j);
            r.kappa[a][b] = simplify(c, k);
        }
    return r;
}

VectorField pushP(Context& c, const std::vector<Ex>& X, const VectorField& q) {
    VectorField r = q;
    Ex tauT = Dt(c, q.tau), tauTT = Dt(c, tauT);
    for (int a = 0; a < c.n; ++a) {
        Ex ca = q.chi[a] + q.tau * Dt(c, X[a]) - Rat(1, 2) * tauT * X[a];
        for (int b = 0; b < c.n; ++b) ca = ca - q.kappa[a][b] * X[b];
        r.chi[a] = simplify(c, ca);
    }
    Ex s = q.sigma;
    for (int a = 0; a < c.n; ++a)
        s = s + Rat(1, 8) * tauTT * X[a] * X[a] -
            Rat(1, 4) * tauT * X[a] * Dt(c, X[a]) -
            Rat(1, 2) * q.tau * X[a] * Dt(c, Dt(c, X[a]));
    for (int a = 0; a < c.n; ++a)
        for (int b = a + 1; b < c.n; ++b)
            s = s - Rat(1, 2) * q.kappa[b][a] *
                    (X[a] * Dt(c, X[b]) - X[b] * Dt(c, X[a]));
    for (int a = 0; a < c.n; ++a)
        s = s + Rat(1, 2) * (q.chi[a] * Dt(c, X[a]) - Dt(c, q.chi[a]) * X[a]);
    r.sigma = simplify(c, s);
    return r;
}

} // namespace

VectorField pushforward(Context& c, const PointTransformation& g,
                        const VectorField& q) {
    VectorField r = pushD(c, g, q);
    r = pushJ(c, g, r);
    bool haveInv = (bool)g.Tinv;
    auto pulled = [&](const Ex& f) {
        if (isZero(c, g.T - tsym())) return f;
        if (!haveInv) throw kernel_error("pushforward requires a symbolic T inverse");
        return simplify(c, compAt(c, f, g.Tinv));
    };
    std::vector<Ex> Xb(c.n);
    bool anyX = false;
    for (int a = 0; a < c.n; ++a) {
        Xb[a] = pulled(g.X[a]);
        anyX = anyX || !isZero(c, Xb[a]);
    }
    if (anyX) r = pushP(c, Xb, r);
    Ex Sb = pulled(g.Sigma), Zb = pulled(g.Z);
    r.sigma = simplify(c, r.sigma + r.tau * Dt(c, Sb));
    r.zeta = simplify(c, r.zeta + r.tau * Dt(c, Zb));
    return r;
}

Ex transformFClass(Context& c, const PointTransformation& g, const Ex& Psi,
                   const Ex& F) {
    bool cj = g.sgnTt < 0;
    Ex psihat = c.psi(cj);
    Ex Pp = simplify(c, diffP(c, Psi, psihat));
    if (isZero(c, Pp)) throw kernel_error("Psi_psihat vanishes");
    Ex abst = absTt(c, g);
    Ex t1 = Tt(c, g), t2 = Dt(c, t1);
    Ex Fhat = cj ? conjugate(c, F) : F;
    Ex out = Pp * Fhat / abst - iu() * diffP(c, Psi, tsym()) / t1;
    for (int a = 0; a < g.n; ++a) {
        Ex coef = t2 / (2 * abst * abst) * c.xvar(a);
        for (int b = 0; b < g.n; ++b)
            coef = coef + num(g.sgnTt) * Dt(c, g.X[b]) * Oent(g, b, a) *
                              powr(abst, Rat(-3, 2));
        Ex Pa = diffP(c, Psi, c.xvar(a));
        out = out + iu() * coef * (Pa + Pp * c.psiX(a, cj));
        out = out - (1 / abst) *
                        (diffP(c, Pa, c.xvar(a)) +
                         2 * diffP(c, Pa, psihat) * c.psiX(a, cj) +
                         diffP(c, Pp, psihat) * c.psiX(a, cj) * c.psiX(a, cj));
    }
    return simplify(c, out);
}

Ex diffInvariant(Context& c, const Ex& S) {
    Ex rho = sym("rho");
    Ex srho = simplify(c, diffP(c, S, rho));
    if (isZero(c, srho)) throw kernel_error("S_rho vanishes identically");
    return simplify(c, rho * diffP(c, srho, rho) / srho);
}

// -------------------------------------------------------------------------
// reducibility

namespace {

struct XPoly {
    Ex v0;                        // constant coefficient
    std::vector<Ex> v1;           // linear coefficients
    std::vector<std::vector<Ex>> v2; // quadratic coefficients (a <= b)
    int degree = 0;
};

std::optional<XPoly> splitPotential(Context& c, const Ex& V, int maxDeg) {
    std::vector<Ex> keys;
    for (int a = 0; a < c.n; ++a) keys.push_back(c.xvar(a));
    std::map<Mono, Ex, MonoCmp> m;
    try {
        m = collect(c, simplify(c, V), keys);
    } catch (const kernel_error&) {
        return std::nullopt;
    }
    XPoly p;
    p.v0 = num(0);
    p.v1.assign(c.n, num(0));
    p.v2.assign(c.n, std::vector<Ex>(c.n, num(0)));
    for (auto& [mono, coef] : m) {
        int deg = 0;
        for (auto& f : mono) {
            if (!f.e.isInt() || f.e.n < 0) return std::nullopt;
            deg += (int)f.e.n;
        }
        if (deg > maxDeg) return std::nullopt;
        p.degree = std::max(p.degree, deg);
        if (deg == 0) {
            p.v0 = coef;
        } else if (deg == 1) {
            for (int a = 0; a < c.n; ++a)
                if (isZero(c, mono[0].base - c.xvar(a))) p.v1[a] = coef;
        } else {
            int ia = -1, ib = -1;
            for (int a = 0; a < c.n; ++a) {
                for (auto& f : mono)
                    if (isZero(c, f.base - c.xvar(a))) {
                        if (ia < 0)
                            ia = a;
                        else
                            ib = a;
                        if (f.e.n == 2) ib = a;
                    }
            }
            if (ia < 0) return std::nullopt;
            if (ib < 0) ib = ia;
            p.v2[std::min(ia, ib)][std::max(ia, ib)] = coef;
        }
    }
    return p;
}

bool isReal(Context& c, const Ex& e) { return isZero(c, e - conjugate(c, e)); }

// chi^b = -2 double antiderivative of v_b; throws if not polynomial
std::vector<Ex> chiFromLinear(Context& c, const std::vector<Ex>& v1) {
    std::vector<Ex> chi(c.n);
    for (int b = 0; b < c.n; ++b)
        chi[b] = polyAntiderivative(
            c, polyAntiderivative(c, simplify(c, Rat(-2) * v1[b])));
    return chi;
}

} // namespace

Reducibility reducible(Context& ctx, const EquationInstance& e) {
    Reducibility r;
    switch (e.id) {
    case ClassId::Vtilde:
    case ClassId::V:
    case ClassId::Vf: {
        auto p = splitPotential(ctx, e.V, 1);
        if (!p) {
            r.note = "potential is not affine in x";
            return r;
        }
        r.applicable = true;
        bool real = isReal(ctx, p->v0);
        for (int a = 0; a < ctx.n; ++a) real = real && isReal(ctx, p->v1[a]);
        r.toZero = real;
        if (!r.toZero) {
            r.note = "potential is not real-valued";
            return r;
        }
        try {
            std::vector<Ex> chi = chiFromLinear(ctx, p->v1);
            Ex chit2 = num(0);
            for (int a = 0; a < ctx.n; ++a)
                chit2 = chit2 + Dt(ctx, chi[a]) * Dt(ctx, chi[a]);
            Ex Sigma = polyAntiderivative(
                ctx, simplify(ctx, Rat(1, 4) * chit2 - p->v0));
            PointTransformation g = baseline(ctx, ClassId::Vf);
            g.X = chi;
            g.Sigma = Sigma;
            validate(ctx, g);
            r.witness = g;
            r.hasWitness = true;
        } catch (const kernel_error& err) {
            r.note = std::string("no closed-form witness: ") + err.what();
        }
        return r;
    }
    case ClassId::P0delta: {
        auto p = splitPotential(ctx, e.V, 1);
        if (!p) {
            r.note = "potential is not affine in x";
            return r;
        }
        r.applicable = true;
        bool linReal = true;
        for (int a = 0; a < ctx.n; ++a) linReal = linReal && isReal(ctx, p->v1[a]);
        r.toZero = linReal;
        if (!r.toZero) {
            r.note = "linear coefficients are not real-valued";
            return r;
        }
        try {
            std::vector<Ex> chi = chiFromLinear(ctx, p->v1);
            Ex chit2 = num(0);
            for (int a = 0; a < ctx.n; ++a)
                chit2 = chit2 + Dt(ctx, chi[a]) * Dt(ctx, chi[a]);
            Ex imv0 = imExpr(ctx, p->v0), rev0 = reExpr(ctx, p->v0);
            Rat d1 = e.delta.re, d2 = e.delta.im;
            Ex Z = d2.isZero() ? polyAntiderivative(ctx, imv0)
                               : solveLinearOde(ctx, d2, imv0);
            Ex Sigma = polyAntiderivative(
                ctx, simplify(ctx, d1 * Z - rev0 + Rat(1, 4) * chit2));
            PointTransformation g = baseline(ctx, ClassId::P0delta);
            g.X = chi;
            g.Z = Z;
            g.Sigma = Sigma;
            validate(ctx, g);
            r.witness = g;
            r.hasWitness = true;
        } catch (const kernel_error& err) {
            r.note = std::string("no closed-form witness: ") + err.what();
        }
        return r;
    }
    case ClassId::Pldelta:
        break;
    default:
        r.note = "reducibility predicate undefined for this class";
        return r;
    }

    // P_lambda
    auto p = splitPotential(ctx, e.V, 2);
    if (!p) {
        r.note = "potential is not x-quadratic";
        return r;
    }
    r.applicable = true;
    Ex h = p->v2[0][0];
    bool shape = isReal(ctx, h);
    for (int a = 0; a < ctx.n && shape; ++a)
        for (int b = a; b < ctx.n && shape; ++b) {
            if (a == b)
                shape = shape && isZero(ctx, p->v2[a][b] - h);
            else
                shape = shape && isZero(ctx, p->v2[a][b]);
        }
    for (int a = 0; a < ctx.n && shape; ++a) shape = shape && isReal(ctx, p->v1[a]);
    r.toXIndependent = shape;
    if (!shape) {
        r.note = "potential is not of the h x.x + h^a x_a + h~0 + i h0 form";
        return r;
    }
    Rat lp = e.lambdaPrime();
    Ex h0 = imExpr(ctx, p->v0);
    Ex constraint = simplify(ctx, Rat(16) * lp * lp * h - 2 * lp * Dt(ctx, h0) -
                                      h0 * h0);
    r.toZero = isZero(ctx, constraint);
    if (!r.toZero) {
        r.note = "16 lambda'^2 h != 2 lambda' h0_t + h0^2";
        return r;
    }

    // witness: choose T from h0 (lambda' != 0) or from h (lambda' = 0)
    try {
        PointTransformation g = baseline(ctx, ClassId::Pldelta);
        g.lambda = e.lambda;
        Ex TtEx; // closed-form or ruled T_t in t
        Ex h0s = simplify(ctx, h0), hs = simplify(ctx, h);
        bool closedT = false;
        if (isZero(ctx, h0s) && isZero(ctx, hs)) {
            TtEx = num(1);
            closedT = true;
        } else if (!lp.isZero() && h0s->k == K::Num && h0s->c.im.isZero()) {
            Rat cexp = Rat(0) - h0s->c.re / lp;
            // T_t = e^{c t}: h0 = -lambda' T_tt/T_t = -lambda' c
            g.T = simplify(ctx, (ctx.fn("exp", {num(cexp) * tsym()}) - 1) / num(cexp));
            g.Tinv = simplify(ctx, ctx.fn("ln", {num(1) + num(cexp) * tsym()}) / num(cexp));
            TtEx = ctx.fn("exp", {num(cexp) * tsym()});
            closedT = true;
        } else if (lp.isZero() && hs->k == K::Num && hs->c.im.isZero() &&
                   !hs->c.re.isZero()) {
            Rat root;
            if (hs->c.re > Rat(0)) {
                if (!exactRoot(hs->c.re, 2, root))
                    throw kernel_error("sqrt(h) is irrational");
                Rat cexp = Rat(4) * root;
                g.T = simplify(ctx, (ctx.fn("exp", {num(cexp) * tsym()}) - 1) / num(cexp));
                g.Tinv = simplify(ctx, ctx.fn("ln", {num(1) + num(cexp) * tsym()}) / num(cexp));
                TtEx = ctx.fn("exp", {num(cexp) * tsym()});
            } else {
                Rat mh = Rat(0) - hs->c.re;
                if (!exactRoot(mh, 2, root))
                    throw kernel_error("sqrt(-h) is irrational");
                Rat om = Rat(2) * root;
                g.T = simplify(ctx, ctx.fn("tan", {num(om) * tsym()}) / num(om));
                g.Tinv = simplify(ctx, ctx.fn("atan", {num(om) * tsym()}) / num(om));
                TtEx = simplify(ctx, Dt(ctx, g.T)); // 1 + tan(om t)^2
                double omd = om.toDouble();
                for (int k = -2; k <= 2; ++k) {
                    double ts = (M_PI / 2 + k * M_PI) / omd;
                    if (std::abs(ts) < 2.6) r.avoidTimes.push_back(ts);
                }
            }
            closedT = true;
        } else {
            // ruled T: T_tt = -(h0/lambda') T_t (lambda' != 0) or the
            // Schwarzian rule 2 T_ttt T_t = 3 T_tt^2 - 16 h T_t^2
            std::string tw = ctx.freshName("Tw");
            if (!lp.isZero()) {
                ctx.declareFunc(tw, 1, true);
                Ex rr = substSym(ctx, simplify(ctx, (Rat(-1) / lp) * h0s), "t", formal(1));
                ctx.setRule(tw, 2, rr * ctx.fn(tw, {formal(1)}, {1}));
                r.ruledInits[tw] = {0.0, 1.0};
            } else {
                ctx.declareFunc(tw, 1, true);
                Ex hr = substSym(ctx, hs, "t", formal(1));
                Ex t1r = ctx.fn(tw, {formal(1)}, {1});
                Ex t2r = ctx.fn(tw, {formal(1)}, {2});
                ctx.setRule(tw, 3,
                            Rat(3, 2) * t2r * t2r / t1r - 8 * hr * t1r);
                r.ruledInits[tw] = {0.0, 1.0, 0.0};
            }
            g.T = ctx.fn(tw, {tsym()});
            g.Tinv = Ex();
            TtEx = ctx.fn(tw, {tsym()}, {1});
        }
        (void)closedT;
        // linear and constant parts
        bool needX = false;
        for (int a = 0; a < ctx.n; ++a) needX = needX || !isZero(ctx, p->v1[a]);
        Ex h0t = reExpr(ctx, p->v0);
        bool needS = needX || !isZero(ctx, h0t);
        if (needX || needS) {
            if (isZero(ctx, g.T - tsym())) {
                // closed forms at T = t
                std::vector<Ex> chi = chiFromLinear(ctx, p->v1);
                Ex chit2 = num(0);
                for (int a = 0; a < ctx.n; ++a)
                    chit2 = chit2 + Dt(ctx, chi[a]) * Dt(ctx, chi[a]);
                g.X = chi;
                g.Sigma = polyAntiderivative(
                    ctx, simplify(ctx, Rat(1, 4) * chit2 - h0t));
            } else {
                // ruled parameter functions:
                //   u^a_t = -2 h^a |T_t|^{-1/2},  X^a_t = T_t u^a,
                //   Sigma_t = 1/4 T_t u^a u^a - h~0
                Ex TtF = substSym(ctx, TtEx, "t", formal(1));
                Ex uu = num(0);
                for (int a = 0; a < ctx.n; ++a) {
                    if (isZero(ctx, p->v1[a])) {
                        g.X[a] = num(0);
                        continue;
                    }
                    std::string un = ctx.freshName("uw");
                    std::string xn = ctx.freshName("Xw");
                    ctx.declareFunc(un, 1, true);
                    ctx.declareFunc(xn, 1, true);
                    Ex va = substSym(ctx, simplify(ctx, p->v1[a]), "t", formal(1));
                    ctx.setRule(un, 1, Rat(-2) * va * powr(TtF, Rat(-1, 2)));
                    ctx.setRule(xn, 1, TtF * ctx.fn(un, {formal(1)}));
                    r.ruledInits[un] = {0.0};
                    r.ruledInits[xn] = {0.0};
                    g.X[a] = ctx.fn(xn, {tsym()});
                    uu = uu + ctx.fn(un, {formal(1)}) * ctx.fn(un, {formal(1)});
                }
                std::string sn = ctx.freshName("Sw");
                ctx.declareFunc(sn, 1, true);
                Ex ht = substSym(ctx, h0t, "t", formal(1));
                ctx.setRule(sn, 1, Rat(1, 4) * TtF * uu - ht);
                r.ruledInits[sn] = {0.0};
                g.Sigma = ctx.fn(sn, {tsym()});
            }
        }
        g.Z = simplify(ctx, (Rat(-1) / g.lambda) * ctx.fn("ln", {TtEx}));
        validate(ctx, g);
        r.witness = g;
        r.hasWitness = true;
    } catch (const kernel_error& err) {
        r.note = std::string("no witness constructed: ") + err.what();
    }
    return r;
}

} // namespace liesym
