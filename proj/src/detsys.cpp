// Invariance criterion, on-shell reduction, determining-system derivation and
// classifying residuals.

#include "liesym/detsys.hpp"

#include <functional>
#include <sstream>

namespace liesym {

namespace {

// -------------------------------------------------------------------------
// on-shell substitution

struct ShellCtx {
    const Context* c;
    Ex S, Sstar;
    std::map<std::tuple<bool, int, std::vector<int>>, Ex> cache;
};

Ex shellWalk(ShellCtx& sc, const Ex& e);

// fully reduced expression for the jet (cj, jt, jx) with jt >= 1
Ex shellExpand(ShellCtx& sc, bool cj, int jt, const std::vector<int>& jx) {
    auto key = std::make_tuple(cj, jt, jx);
    auto it = sc.cache.find(key);
    if (it != sc.cache.end()) return it->second;
    const Context& c = *sc.c;
    Ex out;
    if (jt == 1) {
        // psi_t = i(psi_aa + S psi); spatial derivatives keep jt = 0
        Ex rhs = num(0);
        for (int a = 0; a < c.n; ++a) rhs = rhs + c.psiXX(a, a, cj);
        rhs = rhs + (cj ? sc.Sstar : sc.S) * c.psi(cj);
        rhs = (cj ? -iu() : iu()) * rhs;
        for (int a = 0; a < c.n; ++a)
            for (int k = 0; k < jx[a]; ++k) rhs = Dx(c, rhs, a);
        out = simplify(c, rhs);
    } else {
        Ex lower = shellExpand(sc, cj, jt - 1, jx);
        out = simplify(c, shellWalk(sc, Dt(c, lower)));
    }
    sc.cache[key] = out;
    return out;
}

Ex shellWalk(ShellCtx& sc, const Ex& e) {
    switch (e->k) {
    case K::Num:
    case K::Sym:
        return e;
    case K::Jet:
        if (e->jt == 0) return e;
        return shellExpand(sc, e->cj, e->jt, e->jx);
    case K::Func: {
        std::vector<Ex> args;
        bool changed = false;
        for (auto& ch : e->a) {
            Ex w = shellWalk(sc, ch);
            changed = changed || w.get() != ch.get();
            args.push_back(w);
        }
        if (!changed) return e;
        return sc.c->fn(e->name, std::move(args), e->mid, e->cj);
    }
    case K::Add: {
        std::vector<Ex> ch;
        for (auto& x : e->a) ch.push_back(shellWalk(sc, x));
        return add(std::move(ch));
    }
    case K::Mul: {
        std::vector<Ex> ch;
        for (auto& x : e->a) ch.push_back(shellWalk(sc, x));
        return mul(std::move(ch));
    }
    case K::Pow:
        return powr(shellWalk(sc, e->a[0]), e->e);
    }
    throw kernel_error("unreachable");
}

// -------------------------------------------------------------------------
// kill rules: a derivative atom vanishes identically, hence so does every
// higher derivative of it

struct Kill {
    std::string name;
    std::vector<int> mid; // node dies if node.mid >= mid componentwise
};

bool killMatches(const Node& nd, const Kill& k) {
    if (nd.name != k.name) return false;
    for (size_t i = 0; i < k.mid.size(); ++i) {
        int have = i < nd.mid.size() ? nd.mid[i] : 0;
        if (have < k.mid[i]) return false;
    }
    return true;
}

Ex applyKills(const Context& c, const Ex& e, const std::vector<Kill>& ks) {
    switch (e->k) {
    case K::Num:
    case K::Sym:
    case K::Jet:
        return e;
    case K::Func: {
        for (auto& k : ks)
            if (killMatches(*e, k)) return num(0);
        std::vector<Ex> args;
        bool changed = false;
        for (auto& ch : e->a) {
            Ex w = applyKills(c, ch, ks);
            changed = changed || w.get() != ch.get();
            args.push_back(w);
        }
        if (!changed) return e;
        return c.fn(e->name, std::move(args), e->mid, e->cj);
    }
    case K::Add: {
        std::vector<Ex> ch;
        for (auto& x : e->a) ch.push_back(applyKills(c, x, ks));
        return add(std::move(ch));
    }
    case K::Mul: {
        std::vector<Ex> ch;
        for (auto& x : e->a) ch.push_back(applyKills(c, x, ks));
        return mul(std::move(ch));
    }
    case K::Pow:
        return powr(applyKills(c, e->a[0], ks), e->e);
    }
    throw kernel_error("unreachable");
}

// nonzero constant c with a = c * b, if one exists
std::optional<CRat> proportional(const Context& ctx, const Ex& a, const Ex& b) {
    Poly pa = toPoly(ctx, simplify(ctx, a));
    Poly pb = toPoly(ctx, simplify(ctx, b));
    if (pa.t.size() != pb.t.size() || pa.t.empty()) return std::nullopt;
    std::optional<CRat> ratio;
    auto ia = pa.t.begin();
    auto ib = pb.t.begin();
    MonoCmp cmp;
    for (; ia != pa.t.end(); ++ia, ++ib) {
        if (cmp(ia->first, ib->first) || cmp(ib->first, ia->first)) return std::nullopt;
        CRat r = ia->second / ib->second;
        if (!ratio)
            ratio = r;
        else if (!(*ratio == r))
            return std::nullopt;
    }
    return ratio;
}

std::vector<int> midUnit(int nargs, int slot, int count = 1) {
    std::vector<int> m(nargs, 0);
    m[slot] = count;
    return m;
}

} // namespace

Prolong2 prolong2(const Context& c, const RawField& q) {
    Prolong2 p;
    Ex qc = q.eta - q.xt * c.psiT();
    Ex qcs = q.etaStar - q.xt * c.psiT(true);
    for (int a = 0; a < c.n; ++a) {
        qc = qc - q.xs[a] * c.psiX(a);
        qcs = qcs - q.xs[a] * c.psiX(a, true);
    }
    auto third = [&](bool cj, int a, int b, int cc) {
        std::vector<int> jx(c.n, 0);
        ++jx[a];
        ++jx[b];
        ++jx[cc];
        return jet(cj, 0, jx);
    };
    p.etaT = Dt(c, qc) + q.xt * jet(false, 2, std::vector<int>(c.n, 0));
    p.etaTs = Dt(c, qcs) + q.xt * jet(true, 2, std::vector<int>(c.n, 0));
    for (int a = 0; a < c.n; ++a) {
        p.etaT = p.etaT + q.xs[a] * c.psiTX(a);
        p.etaTs = p.etaTs + q.xs[a] * c.psiTX(a, true);
    }
    p.etaXX.assign(c.n, std::vector<Ex>(c.n));
    p.etaXXs.assign(c.n, std::vector<Ex>(c.n));
    for (int a = 0; a < c.n; ++a)
        for (int b = 0; b < c.n; ++b) {
            std::vector<int> jxab(c.n, 0);
            ++jxab[a];
            ++jxab[b];
            Ex e = Dx(c, Dx(c, qc, b), a) + q.xt * jet(false, 1, jxab);
            Ex es = Dx(c, Dx(c, qcs, b), a) + q.xt * jet(true, 1, jxab);
            for (int cc = 0; cc < c.n; ++cc) {
                e = e + q.xs[cc] * third(false, a, b, cc);
                es = es + q.xs[cc] * third(true, a, b, cc);
            }
            p.etaXX[a][b] = e;
            p.etaXXs[a][b] = es;
        }
    return p;
}

Ex onShell(const Context& c, const Ex& e, const Ex& S) {
    ShellCtx sc{&c, S, conjugate(c, S), {}};
    return simplify(c, shellWalk(sc, e));
}

Residual invarianceResidual(const Context& c, const RawField& q, const Ex& S) {
    Prolong2 p = prolong2(c, q);
    Ex F = iu() * c.psiT() + S * c.psi();
    for (int a = 0; a < c.n; ++a) F = F + c.psiXX(a, a);
    Ex res = iu() * p.etaT;
    for (int a = 0; a < c.n; ++a) res = res + p.etaXX[a][a];
    res = res + q.xt * diffP(c, S, sym("t")) * c.psi();
    for (int a = 0; a < c.n; ++a)
        res = res + q.xs[a] * diffP(c, S, c.xvar(a)) * c.psi();
    res = res + q.eta * diffP(c, S * c.psi(), c.psi());
    res = res + q.etaStar * diffP(c, S * c.psi(), c.psi(true));
    Residual r;
    r.expr = onShell(c, res, S);
    r.provenance = "Q_(2)(i psi_t + psi_aa + S psi) on shell";
    return r;
}

Residual invarianceResidual(Context& c, const VectorField& q,
                            const EquationInstance& e) {
    return invarianceResidual(c, vfRaw(c, q), asS(c, e));
}

// -------------------------------------------------------------------------
// determining-system derivation

DetSystem deriveDeterminingSystem(int n) {
    DetSystem ds{Context(n), {}, {}, {}, {}};
    Context& c = ds.ctx;
    const int na = n + 3; // (t, x_1..x_n, psi, psi*)
    const int slotT = 0, slotPsi = n + 1, slotPsiS = n + 2;

    c.declareFunc("tau", na, true);
    for (int a = 0; a < n; ++a) c.declareFunc("xi" + std::to_string(a + 1), na, true);
    FuncDecl& de = c.declareFunc("eta", na, false);
    de.pairA = slotPsi;
    de.pairB = slotPsiS;
    FuncDecl& dS = c.declareFunc("S", n + 2, false);
    (void)dS;

    std::vector<Ex> argsQ{sym("t")};
    for (int a = 0; a < n; ++a) argsQ.push_back(c.xvar(a));
    argsQ.push_back(c.psi());
    argsQ.push_back(c.psi(true));
    std::vector<Ex> argsS{sym("t")};
    for (int a = 0; a < n; ++a) argsS.push_back(c.xvar(a));
    argsS.push_back(sym("rho"));

    auto tauAt = [&](std::vector<int> mid) { return c.fn("tau", argsQ, std::move(mid)); };
    auto xiAt = [&](int a, std::vector<int> mid) {
        return c.fn("xi" + std::to_string(a + 1), argsQ, std::move(mid));
    };
    auto etaAt = [&](std::vector<int> mid) { return c.fn("eta", argsQ, std::move(mid)); };
    auto SAt = [&](std::vector<int> mid) { return c.fn("S", argsS, std::move(mid)); };

    RawField q;
    q.xt = tauAt({});
    q.xs.resize(n);
    for (int a = 0; a < n; ++a) q.xs[a] = xiAt(a, {});
    q.eta = etaAt({});
    q.etaStar = conjugate(c, q.eta);

    Ex res = invarianceResidual(c, q, SAt({})).expr;

    // keys: every parametric jet of positive order
    std::vector<Ex> jetKeys;
    {
        std::vector<int> jx(n, 0);
        std::function<void(int, int)> gen = [&](int slot, int left) {
            if (slot == n) {
                for (int jt = 0; jt <= 2; ++jt) {
                    int total = jt;
                    for (int v : jx) total += v;
                    if (total == 0 || total > 3) continue;
                    jetKeys.push_back(jet(false, jt, jx));
                    jetKeys.push_back(jet(true, jt, jx));
                }
                return;
            }
            for (int v = 0; v <= left; ++v) {
                jx[slot] = v;
                gen(slot + 1, left - v);
            }
            jx[slot] = 0;
        };
        gen(0, 3);
    }

    std::vector<Kill> kills;
    auto coefs = [&]() {
        return collect(c, simplify(c, applyKills(c, res, kills)), jetKeys);
    };
    auto findProp = [&](const std::map<Mono, Ex, MonoCmp>& m, const Ex& expected) {
        for (auto& [mono, coef] : m) {
            if (mono.empty()) continue;
            if (proportional(c, coef, expected)) return true;
        }
        return false;
    };
    auto requireKill = [&](const std::map<Mono, Ex, MonoCmp>& m, const Ex& atom,
                           const std::string& name, std::vector<int> mid,
                           const char* what) {
        if (!findProp(m, atom))
            throw kernel_error(std::string("determining split did not expose ") + what);
        kills.push_back({name, std::move(mid)});
    };

    // stage 1: tau_psi = tau_psi* = tau_a = 0
    {
        auto m = coefs();
        requireKill(m, tauAt(midUnit(na, slotPsi)), "tau", midUnit(na, slotPsi),
                    "tau_psi");
        requireKill(m, tauAt(midUnit(na, slotPsiS)), "tau", midUnit(na, slotPsiS),
                    "tau_psi*");
        for (int a = 0; a < n; ++a)
            requireKill(m, tauAt(midUnit(na, 1 + a)), "tau", midUnit(na, 1 + a),
                        "tau_a");
    }
    // stage 2: xi^a_psi = xi^a_psi* = 0, eta_psi* = 0
    {
        auto m = coefs();
        for (int a = 0; a < n; ++a) {
            requireKill(m, xiAt(a, midUnit(na, slotPsi)), "xi" + std::to_string(a + 1),
                        midUnit(na, slotPsi), "xi_psi");
            requireKill(m, xiAt(a, midUnit(na, slotPsiS)), "xi" + std::to_string(a + 1),
                        midUnit(na, slotPsiS), "xi_psi*");
        }
        requireKill(m, etaAt(midUnit(na, slotPsiS)), "eta", midUnit(na, slotPsiS),
                    "eta_psi*");
    }
    // stage 3: tau_t = 2 xi^a_a, xi^a_b + xi^b_a = 0, eta_psipsi = 0
    std::vector<Ex> relA;
    {
        auto m = coefs();
        for (int a = 0; a < n; ++a) {
            Ex rel = tauAt(midUnit(na, slotT)) - 2 * xiAt(a, midUnit(na, 1 + a));
            if (!findProp(m, rel))
                throw kernel_error("determining split did not expose tau_t = 2 xi^a_a");
            relA.push_back(rel);
        }
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                Ex rel = xiAt(a, midUnit(na, 1 + b)) + xiAt(b, midUnit(na, 1 + a));
                if (!findProp(m, rel))
                    throw kernel_error(
                        "determining split did not expose xi^a_b + xi^b_a = 0");
                relA.push_back(rel);
            }
        requireKill(m, etaAt(midUnit(na, slotPsi, 2)), "eta", midUnit(na, slotPsi, 2),
                    "eta_psipsi");
    }
    // Second x-derivatives of xi vanish as a consequence of stage 3: for a != b,
    // xi^a_bb = -xi^b_ab = -(xi^b_b)_a = -(tau_t/2)_a = 0 (tau_a = 0), and the
    // remaining index patterns reduce the same way.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = b; cc < n; ++cc) {
                std::vector<int> m(na, 0);
                ++m[1 + b];
                ++m[1 + cc];
                kills.push_back({"xi" + std::to_string(a + 1), m});
            }
    // stage 4: 2 eta_psi_a = i xi^a_t
    std::vector<Ex> relB;
    {
        auto m = coefs();
        for (int a = 0; a < n; ++a) {
            std::vector<int> mpa(na, 0);
            mpa[slotPsi] = 1;
            mpa[1 + a] = 1;
            Ex rel = 2 * etaAt(mpa) - iu() * xiAt(a, midUnit(na, slotT));
            if (!findProp(m, rel))
                throw kernel_error(
                    "determining split did not expose 2 eta_psi_a = i xi^a_t");
            relB.push_back(rel);
        }
    }
    // stage 5: jet-free remainder; integrate the established subsystem
    // (tau = tau(t), xi^a = xi^a(t,x), eta linear in psi) and split the phase
    // of psi to obtain psi eta_psi = eta and the residual equation
    {
        auto m = coefs();
        Ex R0 = num(0);
        for (auto& [mono, coef] : m)
            if (mono.empty()) R0 = coef;

        c.declareFunc("tauR", 1, true);
        for (int a = 0; a < n; ++a)
            c.declareFunc("xiR" + std::to_string(a + 1), n + 1, true);
        c.declareFunc("etaP", n + 1, false);
        c.declareFunc("etaQ", n + 1, false);
        Subst sub;
        sub.funcMap["tau"] = c.fn("tauR", {formal(1)});
        std::vector<Ex> fx;
        for (int i = 1; i <= n + 1; ++i) fx.push_back(formal(i));
        for (int a = 0; a < n; ++a)
            sub.funcMap["xi" + std::to_string(a + 1)] =
                c.fn("xiR" + std::to_string(a + 1), fx);
        sub.funcMap["eta"] =
            c.fn("etaP", fx) * formal(n + 2) + c.fn("etaQ", fx);
        Ex R1 = substitute(c, R0, sub);

        c.declareSym("phi");
        Ex phase = sym("rho") * (c.fn("cos", {sym("phi")}) +
                                 iu() * c.fn("sin", {sym("phi")}));
        Ex phaseS = conjugate(c, phase);
        struct Hook {
            Ex p, ps;
        } hook{phase, phaseS};
        Subst ph;
        ph.jetHook = [](const Node& nd, const void* hp) -> std::optional<Ex> {
            if (nd.jt != 0) return std::nullopt;
            for (int v : nd.jx)
                if (v != 0) return std::nullopt;
            auto* h = static_cast<const Hook*>(hp);
            return nd.cj ? h->ps : h->p;
        };
        ph.jetCtx = &hook;
        Ex R2 = simplify(c, substitute(c, R1, ph));

        std::vector<Ex> trigKeys{c.fn("sin", {sym("phi")}), c.fn("cos", {sym("phi")})};
        auto tm = collect(c, R2, trigKeys);

        std::vector<Ex> argsR{sym("t")};
        for (int a = 0; a < n; ++a) argsR.push_back(c.xvar(a));
        Ex Qstar = conjugate(c, c.fn("etaQ", argsR));
        Ex expectQ = sym("rho") * SAt(midUnit(n + 2, n + 1)) * Qstar;
        if (!findProp(tm, expectQ))
            throw kernel_error("phase split did not expose S_rho etaQ* = 0");
        // with S_rho != 0 on the class S this forces etaQ = 0
        std::vector<Kill> killQ{{"etaQ", std::vector<int>(n + 1, 0)}};
        Ex R3 = simplify(c, applyKills(c, R2, killQ));
        auto tm3 = collect(c, R3, trigKeys);
        Ex bkt = iu() * c.fn("etaP", argsR, midUnit(n + 1, 0));
        for (int a = 0; a < n; ++a)
            bkt = bkt + c.fn("etaP", argsR, midUnit(n + 1, 1 + a, 2));
        bkt = bkt + c.fn("tauR", {sym("t")}) * SAt(midUnit(n + 2, 0));
        for (int a = 0; a < n; ++a)
            bkt = bkt + c.fn("xiR" + std::to_string(a + 1), argsR) *
                            SAt(midUnit(n + 2, 1 + a));
        bkt = bkt + c.fn("tauR", {sym("t")}, {1}) * SAt({});
        Ex P = c.fn("etaP", argsR);
        bkt = bkt + Rat(1, 2) * sym("rho") * SAt(midUnit(n + 2, n + 1)) *
                        (P + conjugate(c, P));
        bool sawBkt = false;
        for (auto& [mono, coef] : tm3) {
            if (mono.empty()) {
                if (!isZero(c, coef))
                    throw kernel_error("phase-free remainder did not vanish");
                continue;
            }
            if (!proportional(c, coef, sym("rho") * bkt))
                throw kernel_error("phase split did not reproduce the residual "
                                   "equation");
            sawBkt = true;
        }
        if (!sawBkt) throw kernel_error("phase split produced no residual equation");
    }

    // emit the canonical arrangement over the original atoms
    ds.groupA.push_back(tauAt(midUnit(na, slotPsi)));
    ds.groupA.push_back(tauAt(midUnit(na, slotPsiS)));
    for (int a = 0; a < n; ++a) ds.groupA.push_back(tauAt(midUnit(na, 1 + a)));
    for (int a = 0; a < n; ++a) {
        ds.groupA.push_back(xiAt(a, midUnit(na, slotPsi)));
        ds.groupA.push_back(xiAt(a, midUnit(na, slotPsiS)));
    }
    for (auto& r : relA) ds.groupA.push_back(r);
    ds.groupB.push_back(etaAt(midUnit(na, slotPsiS)));
    ds.groupB.push_back(etaAt(midUnit(na, slotPsi, 2)));
    for (auto& r : relB) ds.groupB.push_back(r);
    ds.groupB.push_back(c.psi() * etaAt(midUnit(na, slotPsi)) - etaAt({}));

    Ex etaPsi = etaAt(midUnit(na, slotPsi));
    Ex gc = iu() * etaAt(midUnit(na, slotT));
    for (int a = 0; a < n; ++a) gc = gc + etaAt(midUnit(na, 1 + a, 2));
    Ex adv = tauAt({}) * SAt(midUnit(n + 2, 0));
    for (int a = 0; a < n; ++a) adv = adv + xiAt(a, {}) * SAt(midUnit(n + 2, 1 + a));
    gc = gc + adv * c.psi();
    gc = gc + sym("rho") * SAt(midUnit(n + 2, n + 1)) *
                  (Rat(1, 2) * (etaPsi + conjugate(c, etaPsi)));
    gc = gc + tauAt(midUnit(na, slotT)) * SAt({});
    ds.groupC = gc;

    for (auto& e : ds.groupA) ds.rendered.push_back(pretty(e) + " = 0");
    for (auto& e : ds.groupB) ds.rendered.push_back(pretty(e) + " = 0");
    ds.rendered.push_back(pretty(ds.groupC) + " = 0");
    return ds;
}

// -------------------------------------------------------------------------
// classifying residuals

Residual classifyingResidual(Context& c, const VectorField& q,
                             const EquationInstance& e) {
    Ex t = sym("t"), rho = sym("rho");
    Ex tauT = Dt(c, q.tau), tauTT = Dt(c, tauT), tauTTT = Dt(c, tauTT);
    Ex xx = num(0);
    std::vector<Ex> xiFull(c.n);
    Ex chiSum = num(0), chiTT = num(0);
    for (int a = 0; a < c.n; ++a) {
        Ex xa = c.xvar(a);
        xx = xx + xa * xa;
        Ex comp = Rat(1, 2) * tauT * xa + q.chi[a];
        for (int b = 0; b < c.n; ++b) comp = comp + q.kappa[a][b] * c.xvar(b);
        xiFull[a] = comp;
        chiTT = chiTT + Dt(c, Dt(c, q.chi[a])) * xa;
    }
    (void)chiSum;
    Residual r;
    switch (e.id) {
    case ClassId::S:
    case ClassId::Vtilde:
    case ClassId::V: {
        Ex S = e.id == ClassId::S ? e.S : asS(c, e);
        Ex lhs = q.tau * diffP(c, S, t) + q.zeta * rho * diffP(c, S, rho) + tauT * S;
        for (int a = 0; a < c.n; ++a) lhs = lhs + xiFull[a] * diffP(c, S, c.xvar(a));
        Ex rhs = Rat(1, 8) * tauTTT * xx + Rat(1, 2) * chiTT + Dt(c, q.sigma) -
                 iu() * Dt(c, q.zeta) - Rat(c.n, 4) * iu() * tauTT;
        r.expr = simplify(c, lhs - rhs);
        r.provenance = "S-class classifying condition";
        return r;
    }
    case ClassId::Vf: {
        if (!isZero(c, tauT))
            throw kernel_error("Vf admissibility violated: tau_t != 0");
        if (!isZero(c, q.zeta))
            throw kernel_error("Vf admissibility violated: zeta != 0");
        Ex lhs = q.tau * diffP(c, e.V, t);
        for (int a = 0; a < c.n; ++a) {
            Ex coef = q.chi[a];
            for (int b = 0; b < c.n; ++b) coef = coef + q.kappa[a][b] * c.xvar(b);
            lhs = lhs + coef * diffP(c, e.V, c.xvar(a));
        }
        Ex rhs = Rat(1, 2) * chiTT + Dt(c, q.sigma);
        r.expr = simplify(c, lhs - rhs);
        r.provenance = "Vf classifying condition";
        return r;
    }
    case ClassId::P0delta: {
        if (!isZero(c, tauT))
            throw kernel_error("P0 admissibility violated: tau_t != 0");
        Ex lhs = q.tau * diffP(c, e.V, t);
        for (int a = 0; a < c.n; ++a) {
            Ex coef = q.chi[a];
            for (int b = 0; b < c.n; ++b) coef = coef + q.kappa[a][b] * c.xvar(b);
            lhs = lhs + coef * diffP(c, e.V, c.xvar(a));
        }
        Ex rhs = Rat(1, 2) * chiTT + Dt(c, q.sigma) - iu() * Dt(c, q.zeta) -
                 cnum(e.delta) * q.zeta;
        r.expr = simplify(c, lhs - rhs);
        r.provenance = "P0^delta classifying condition";
        return r;
    }
    case ClassId::Pldelta: {
        if (!isZero(c, num(e.lambda) * q.zeta + tauT))
            throw kernel_error("P_lambda admissibility violated: lambda zeta + tau_t != 0");
        Ex lhs = q.tau * diffP(c, e.V, t) + tauT * e.V;
        for (int a = 0; a < c.n; ++a) lhs = lhs + xiFull[a] * diffP(c, e.V, c.xvar(a));
        Ex rhs = Rat(1, 8) * tauTTT * xx + Rat(1, 2) * chiTT + Dt(c, q.sigma) +
                 iu() * num(e.lambdaPrime()) * tauTT;
        r.expr = simplify(c, lhs - rhs);
        r.provenance = "P_lambda^delta classifying condition";
        return r;
    }
    default:
        throw kernel_error("classifying residual undefined for this class");
    }
}

bool consistencyCheck(Context& c, const VectorField& q, const EquationInstance& e,
                      std::string* note) {
    Residual inv = invarianceResidual(c, q, e);
    Residual cls = classifyingResidual(c, q, e);
    const Ex ks[] = {num(1), num(-1), iu(), -iu()};
    const char* kn[] = {"+1", "-1", "+i", "-i"};
    for (int i = 0; i < 4; ++i) {
        if (isZero(c, inv.expr - ks[i] * c.psi() * cls.expr)) {
            if (note) *note = std::string("invariance = (") + kn[i] +
                              ") * psi * classifying";
            return true;
        }
    }
    if (note) *note = "no proportionality between the two residuals";
    return false;
}

std::vector<SplitEq> splitX(const Context& c, const Ex& residual) {
    std::vector<Ex> keys;
    for (int a = 0; a < c.n; ++a) keys.push_back(c.xvar(a));
    auto m = collect(c, simplify(c, residual), keys);
    std::vector<SplitEq> out;
    for (auto& [mono, coef] : m) {
        SplitEq s;
        s.xmono = mono;
        Ex cj = conjugate(c, coef);
        s.re = simplify(c, Rat(1, 2) * (coef + cj));
        s.im = simplify(c, (coef - cj) / (2 * iu()));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace liesym
