// Equation classes: membership verification and the V-partition predicate.

#include "liesym/classes.hpp"

#include "liesym/oracle.hpp"

#include <cmath>

namespace liesym {

namespace {

const ClassDescriptor kDescriptors[] = {
    {ClassId::F, "F", false, false, false, false, false, false, "none",
     "general point transformations with Psi_psi-hat != 0"},
    {ClassId::F1, "F1", false, false, false, false, false, false, "none",
     "exponential Psi form, Psi0 = 0"},
    {ClassId::S, "S", true, false, true, true, true, true, "S-class",
     "T, X, Sigma, Z arbitrary smooth, T_t != 0"},
    {ClassId::Vtilde, "Vtilde", true, false, true, true, true, true, "S-class",
     "T_tt = 0, Z_t = 0"},
    {ClassId::V, "V", true, false, true, true, true, true, "S-class",
     "T_tt = 0, Z_t = 0, gauge constant c"},
    {ClassId::Vf, "Vf", true, false, true, true, true, false, "Vf",
     "T_t = 1 (or +-1 for real f), Z = 0, c = 0"},
    {ClassId::P0delta, "P0delta", true, false, true, true, true, true, "P0",
     "T_tt = 0; T_t = 1 (or +-1 when delta is real)"},
    {ClassId::Pldelta, "Pldelta", false, true, true, true, true, false, "Plambda",
     "e^Z = |T_t|^{-1/lambda} (mu = 1); T_t > 0 when Im delta != 0"},
};

// certifies that an expression does not vanish identically: it must fail the
// symbolic zero test and the oracle must find a point of magnitude > 1e-6
void certifyNonzero(Context& ctx, const Ex& e, const char* what) {
    if (isZero(ctx, e)) throw kernel_error(std::string(what) + " vanishes identically");
    NumericInstance inst(ctx, 0xC0FFEEu);
    double best = 0;
    for (int i = 0; i < 12 && best < 1e-6; ++i) {
        SamplePoint p = inst.randomPoint();
        Cplx v = inst.eval(e, p);
        if (std::isfinite(v.real()) && std::isfinite(v.imag()))
            best = std::max(best, std::abs(v));
    }
    if (best < 1e-6)
        throw kernel_error(std::string(what) + " could not be certified nonzero");
}

bool containsAbstractFunc(const Context& ctx, const Ex& e) {
    if (e->k == K::Func) {
        auto it = ctx.funcs.find(e->name);
        if (it != ctx.funcs.end() && it->second.eval == EvalKind::Abstract) return true;
    }
    for (auto& ch : e->a)
        if (containsAbstractFunc(ctx, ch)) return true;
    return false;
}

void requirePotentialShape(Context& ctx, const Ex& V) {
    if (containsJet(V) || containsSym(V, "rho"))
        throw kernel_error("potential V must depend on t and x only");
}

void requireNonlinearityShape(Context& ctx, const Ex& f) {
    if (containsJet(f) || containsSym(f, "t"))
        throw kernel_error("nonlinearity f must depend on rho only");
    for (int a = 0; a < ctx.n; ++a)
        if (containsSym(f, "x" + std::to_string(a + 1)))
            throw kernel_error("nonlinearity f must depend on rho only");
}

} // namespace

const ClassDescriptor& descriptor(ClassId id) {
    for (auto& d : kDescriptors)
        if (d.id == id) return d;
    throw kernel_error("unknown class id");
}

Rat EquationInstance::lambdaPrime() const {
    if (lambda.isZero()) throw kernel_error("lambda' undefined for the log class");
    return Rat(1) / lambda - Rat(n, 4);
}

PartitionResult classifyNonlinearity(Context& ctx, const Ex& f) {
    Ex rho = sym("rho");
    Ex frho = simplify(ctx, diffP(ctx, f, rho));
    if (isZero(ctx, frho)) throw kernel_error("f_rho vanishes identically");
    Ex ratio = simplify(ctx, rho * diffP(ctx, frho, rho) / frho);
    PartitionResult out;
    if (ratio->k == K::Num) {
        if (!ratio->c.im.isZero()) {
            out.kind = PartitionKind::Vprime;
            return out;
        }
        out.exact = true;
        out.exactLambda = ratio->c.re + Rat(1);
        out.lambda = out.exactLambda.toDouble();
        out.kind = out.exactLambda.isZero() ? PartitionKind::P0 : PartitionKind::Plambda;
        return out;
    }
    if (containsAbstractFunc(ctx, f)) {
        out.kind = PartitionKind::Assumed;
        return out;
    }
    // oracle: sample the ratio over rho and measure the spread
    NumericInstance inst(ctx, 0xBADCAFEu);
    double lo = 1e300, hi = -1e300, im = 0;
    for (int i = 0; i < 8; ++i) {
        SamplePoint p = inst.randomPoint();
        p.psi = Cplx(0.25 + 0.35 * i, 0.0);
        Cplx v = inst.eval(ratio, p);
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
        im = std::max(im, std::abs(v.imag()));
    }
    if (hi - lo < 1e-8 && im < 1e-8) {
        double lam = 0.5 * (hi + lo) + 1.0;
        out.lambda = lam;
        out.kind = std::abs(lam) < 1e-8 ? PartitionKind::P0 : PartitionKind::Plambda;
        return out;
    }
    out.kind = PartitionKind::Vprime;
    return out;
}

Ex asS(Context& ctx, const EquationInstance& e) {
    Ex rho = sym("rho");
    switch (e.id) {
    case ClassId::F:
    case ClassId::F1:
    case ClassId::S:
        return e.S;
    case ClassId::Vtilde:
    case ClassId::V:
    case ClassId::Vf:
        return simplify(ctx, e.f + e.V);
    case ClassId::P0delta:
        return simplify(ctx, cnum(e.delta) * ctx.fn("ln", {rho}) + e.V);
    case ClassId::Pldelta:
        return simplify(ctx, cnum(e.delta) * powr(rho, e.lambda) + e.V);
    }
    throw kernel_error("unreachable");
}

EquationInstance buildEquation(Context& ctx, ClassId id, const Elements& el, int n) {
    if (n != ctx.n) throw kernel_error("instance dimension differs from context");
    EquationInstance e;
    e.id = id;
    e.n = n;
    e.delta = el.delta;
    e.lambda = el.lambda;
    Ex rho = sym("rho");
    switch (id) {
    case ClassId::F:
    case ClassId::F1:
        e.S = el.S;
        return e;
    case ClassId::S: {
        e.S = simplify(ctx, el.S);
        certifyNonzero(ctx, diffP(ctx, e.S, rho), "S_rho");
        return e;
    }
    case ClassId::Vtilde:
    case ClassId::V:
    case ClassId::Vf: {
        e.f = simplify(ctx, el.f);
        e.V = simplify(ctx, el.V);
        requireNonlinearityShape(ctx, e.f);
        requirePotentialShape(ctx, e.V);
        certifyNonzero(ctx, diffP(ctx, e.f, rho), "f_rho");
        e.S = asS(ctx, e);
        // V-embedding constraints S_{rho t} = S_{rho a} = 0
        Ex srho = diffP(ctx, e.S, rho);
        if (!isZero(ctx, diffP(ctx, srho, sym("t"))))
            throw kernel_error("membership residual S_rho_t != 0");
        for (int a = 0; a < n; ++a)
            if (!isZero(ctx, diffP(ctx, srho, ctx.xvar(a))))
                throw kernel_error("membership residual S_rho_a != 0");
        if (id == ClassId::Vf) {
            PartitionResult pr = classifyNonlinearity(ctx, e.f);
            if (pr.kind == PartitionKind::P0 || pr.kind == PartitionKind::Plambda)
                throw kernel_error(
                    "rho f_rho_rho / f_rho is a real constant: not in V'");
            e.assumed = pr.kind == PartitionKind::Assumed;
        }
        return e;
    }
    case ClassId::P0delta:
    case ClassId::Pldelta: {
        if (e.delta.isZero()) throw kernel_error("delta must be nonzero");
        if (id == ClassId::Pldelta && e.lambda.isZero())
            throw kernel_error("lambda must be nonzero for the power class");
        if (id == ClassId::P0delta) e.lambda = Rat(0);
        e.V = simplify(ctx, el.V);
        requirePotentialShape(ctx, e.V);
        e.S = asS(ctx, e);
        // (rho S_rho)_rho = lambda S_rho (with lambda = 0 for the log class)
        Ex srho = diffP(ctx, e.S, rho);
        Ex res = diffP(ctx, rho * srho, rho) - num(e.lambda) * srho;
        if (!isZero(ctx, res))
            throw kernel_error("membership residual (rho S_rho)_rho - lambda S_rho != 0");
        return e;
    }
    }
    throw kernel_error("unreachable");
}

std::pair<double, double> normalizedDeltaHint(const CRat& delta) {
    double re = delta.re.toDouble(), im = delta.im.toDouble();
    double m = std::hypot(re, im);
    if (m == 0) throw kernel_error("delta must be nonzero");
    re /= m;
    im /= m;
    if (im < 0 || (im == 0 && re < 0)) {
        // multiply by -1 (a real constant), allowed by the delta rescaling rule
        re = -re;
        im = -im;
    }
    return {re, im};
}

} // namespace liesym
