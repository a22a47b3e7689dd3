// Numeric oracle implementation: expression evaluation over double-precision
// complex numbers, random polynomial instantiation of abstract functions, and
// Dormand-Prince integration of rewrite ODEs with cubic Hermite dense output.

#include "liesym/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

namespace liesym {

namespace {
constexpr double kOdeTol = 1e-14;
} // namespace

// ---------------------------------------------------------------------------
// random multivariate polynomial evaluator

struct NumericInstance::PolyEval {
    int nargs = 1;
    bool realValued = true;
    // multi-index (degrees per argument) -> coefficient
    std::map<std::vector<int>, Cplx> coef;

    static std::shared_ptr<PolyEval> make(const FuncDecl& d, std::mt19937_64& rng) {
        auto p = std::make_shared<PolyEval>();
        p->nargs = d.nargs;
        p->realValued = d.realValued;
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        std::vector<int> idx(d.nargs, 0);
        // all multi-indices of total degree <= 3
        std::function<void(int, int)> gen = [&](int slot, int left) {
            if (slot == d.nargs) {
                int deg = 0;
                for (int v : idx) deg += v;
                double s = 0.4 / (1.0 + deg);
                Cplx c(U(rng) * s, d.realValued ? 0.0 : U(rng) * s);
                p->coef[idx] = c;
                return;
            }
            for (int v = 0; v <= left; ++v) {
                idx[slot] = v;
                gen(slot + 1, left - v);
            }
            idx[slot] = 0;
        };
        gen(0, 3);
        if (d.positive) p->coef[std::vector<int>(d.nargs, 0)] += 2.0;
        return p;
    }

    Cplx eval(const std::vector<int>& mid, const std::vector<Cplx>& args) const {
        std::vector<int> m(mid);
        m.resize(nargs, 0);
        Cplx out = 0.0;
        for (auto& [idx, c] : coef) {
            Cplx term = c;
            bool dead = false;
            for (int s = 0; s < nargs && !dead; ++s) {
                int d = idx[s], k = m[s];
                if (k > d) {
                    dead = true;
                    break;
                }
                double fall = 1.0;
                for (int j = 0; j < k; ++j) fall *= double(d - j);
                term *= fall;
                int rem = d - k;
                for (int j = 0; j < rem; ++j) term *= args[s];
            }
            if (!dead) out += term;
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// joint ODE over all ruled single-argument functions

struct NumericInstance::OdeState {
    struct Entry {
        std::string name;
        int order = 1;
        int offset = 0;
    };
    std::vector<Entry> entries;
    std::map<std::string, int> index;
    int dim = 0;
    std::vector<double> y0; // initial data at u = 0

    struct Segment {
        double u0, u1;
        std::vector<double> ya, yb, fa, fb;
    };
    std::vector<Segment> fwd, bwd; // from 0 upward / downward
    std::vector<double> yEndF, yEndB;
    double uEndF = 0, uEndB = 0;
};

struct OdeProbe {
    // evaluation frame for rule right-hand sides: the single formal @1 carries
    // the integration variable, ruled-function values come from the state
    struct Frame {
        double u;
        const std::vector<double>* y;
    };
    static Cplx evalRule(const NumericInstance& inst, const std::string& name,
                         const Frame& fr);
    static Cplx evalIn(const NumericInstance& inst, const Ex& e, const SamplePoint& p,
                       const Frame* fr);
    static void rhs(const NumericInstance& inst, double u, const std::vector<double>& y,
                    std::vector<double>& dy);
    static void ensure(const NumericInstance& inst);
    static double stateAt(const NumericInstance& inst, double u, std::vector<double>& y);
};

NumericInstance::NumericInstance(const Context& ctx, std::uint64_t seed)
    : ctx_(ctx), rng_(seed) {}

void NumericInstance::setSym(const std::string& name, double v) { symVals_[name] = v; }
void NumericInstance::setClosedForm(const std::string& name, ClosedForm f) {
    closed_[name] = std::move(f);
}
void NumericInstance::setInit(const std::string& name, std::vector<double> v) {
    inits_[name] = std::move(v);
    ode_.reset(); // rebuild with the new initial data
}
void NumericInstance::avoid(double ts, double margin) { avoid_.push_back({ts, margin}); }

void NumericInstance::xFloor(double r) { xfloor_ = r; }

void NumericInstance::tRange(double lo, double hi) { tlo_ = lo; thi_ = hi; }

void OdeProbe::ensure(const NumericInstance& inst) {
    if (inst.ode_) {
        // rebuild if a rule was synthesized after the last build
        bool fresh = true;
        for (auto& [name, d] : inst.ctx_.funcs)
            if (d.ruleOrder > 0 && !inst.ode_->index.count(name)) fresh = false;
        if (fresh) return;
    }
    auto st = std::make_shared<NumericInstance::OdeState>();
    for (auto& [name, d] : inst.ctx_.funcs) {
        if (d.ruleOrder == 0) continue;
        if (d.nargs != 1) throw kernel_error("ruled function with several arguments");
        NumericInstance::OdeState::Entry e;
        e.name = name;
        e.order = d.ruleOrder;
        e.offset = st->dim;
        st->dim += d.ruleOrder;
        st->index[name] = (int)st->entries.size();
        st->entries.push_back(e);
    }
    st->y0.assign(st->dim, 0.0);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto& e : st->entries) {
        auto it = inst.inits_.find(e.name);
        for (int j = 0; j < e.order; ++j) {
            if (it != inst.inits_.end() && j < (int)it->second.size())
                st->y0[e.offset + j] = it->second[j];
            else
                st->y0[e.offset + j] = U(inst.rng_);
        }
    }
    st->yEndF = st->yEndB = st->y0;
    inst.ode_ = st;
}

Cplx OdeProbe::evalRule(const NumericInstance& inst, const std::string& name,
                        const Frame& fr) {
    const FuncDecl& d = inst.ctx_.funcs.at(name);
    SamplePoint dummy;
    return evalIn(inst, d.ruleRhs, dummy, &fr);
}

void OdeProbe::rhs(const NumericInstance& inst, double u, const std::vector<double>& y,
                   std::vector<double>& dy) {
    auto& st = *inst.ode_;
    dy.assign(st.dim, 0.0);
    Frame fr{u, &y};
    for (auto& e : st.entries) {
        for (int j = 0; j + 1 < e.order; ++j) dy[e.offset + j] = y[e.offset + j + 1];
        Cplx top = evalRule(inst, e.name, fr);
        dy[e.offset + e.order - 1] = top.real();
    }
}

namespace {

// one Dormand-Prince 5(4) step; returns error estimate in the mixed norm
double dp45(const NumericInstance& inst, double u, const std::vector<double>& y,
            double h, std::vector<double>& out, std::vector<double>& fstart) {
    static const double A[7][6] = {
        {},
        {1. / 5},
        {3. / 40, 9. / 40},
        {44. / 45, -56. / 15, 32. / 9},
        {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
        {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
        {35. / 384, 0, 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84}};
    static const double C[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1, 1};
    static const double E[7] = {71. / 57600, 0,           -71. / 16695, 71. / 1920,
                                -17253. / 339200, 22. / 525, -1. / 40};
    int n = (int)y.size();
    std::vector<std::vector<double>> K(7);
    std::vector<double> tmp(n);
    OdeProbe::rhs(inst, u, y, K[0]);
    fstart = K[0];
    for (int s = 1; s < 7; ++s) {
        for (int i = 0; i < n; ++i) {
            double acc = y[i];
            for (int j = 0; j < s; ++j) acc += h * A[s][j] * K[j][i];
            tmp[i] = acc;
        }
        if (s == 6) out = tmp; // the stage-7 point is the 5th-order solution
        OdeProbe::rhs(inst, u + C[s] * h, tmp, K[s]);
    }
    double err = 0;
    for (int i = 0; i < n; ++i) {
        double e = 0;
        for (int j = 0; j < 7; ++j) e += h * E[j] * K[j][i];
        double sc = kOdeTol + kOdeTol * std::max(std::abs(y[i]), std::abs(out[i]));
        err = std::max(err, std::abs(e) / sc);
    }
    return err;
}

} // namespace

double OdeProbe::stateAt(const NumericInstance& inst, double u, std::vector<double>& y) {
    ensure(inst);
    auto& st = *inst.ode_;
    if (st.dim == 0) {
        y.clear();
        return u;
    }
    bool forward = u >= 0;
    auto& segs = forward ? st.fwd : st.bwd;
    auto& yEnd = forward ? st.yEndF : st.yEndB;
    auto& uEnd = forward ? st.uEndF : st.uEndB;
    double dir = forward ? 1.0 : -1.0;
    double h = 0.05 * dir;
    while (dir * (u - uEnd) > 1e-15) {
        if (dir * (uEnd + h - u) > 0 && std::abs(u - uEnd) > 1e-12)
            h = u - uEnd;
        std::vector<double> ynew, f0;
        double err = dp45(inst, uEnd, yEnd, h, ynew, f0);
        if (err <= 1.0) {
            std::vector<double> f1;
            rhs(inst, uEnd + h, ynew, f1);
            segs.push_back({uEnd, uEnd + h, yEnd, ynew, f0, f1});
            uEnd += h;
            yEnd = ynew;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::min(4.0, std::max(0.2, fac));
        h *= fac;
        if (std::abs(h) < 1e-12) throw kernel_error("ODE step underflow");
        // cap the step: the cubic Hermite dense output is O(h^4) and must stay
        // well below the residual thresholds downstream
        if (std::abs(h) > 0.04) h = 0.04 * dir;
    }
    // locate segment containing u and interpolate (cubic Hermite)
    for (auto& s : segs) {
        double lo = std::min(s.u0, s.u1), hi = std::max(s.u0, s.u1);
        if (u < lo - 1e-12 || u > hi + 1e-12) continue;
        double hseg = s.u1 - s.u0;
        double th = (u - s.u0) / hseg;
        int n = (int)s.ya.size();
        y.resize(n);
        double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
        double h10 = th * (1 - th) * (1 - th);
        double h01 = th * th * (3 - 2 * th);
        double h11 = th * th * (th - 1);
        for (int i = 0; i < n; ++i)
            y[i] = h00 * s.ya[i] + h10 * hseg * s.fa[i] + h01 * s.yb[i] +
                   h11 * hseg * s.fb[i];
        return u;
    }
    y = st.y0; // u == 0 with no segments yet
    return u;
}

Cplx NumericInstance::ruled(const std::string& name, int order, double u) const {
    OdeProbe::ensure(*this);
    auto& st = *ode_;
    auto it = st.index.find(name);
    if (it == st.index.end()) throw kernel_error("unknown ruled function " + name);
    auto& e = st.entries[it->second];
    std::vector<double> y;
    OdeProbe::stateAt(*this, u, y);
    if (order < e.order) return y[e.offset + order];
    if (order == e.order) {
        OdeProbe::Frame fr{u, &y};
        return OdeProbe::evalRule(*this, name, fr);
    }
    throw kernel_error("rule derivative order exceeds rewrite order for " + name);
}

// ---------------------------------------------------------------------------
// expression evaluation

Cplx OdeProbe::evalIn(const NumericInstance& inst, const Ex& e, const SamplePoint& p,
                      const Frame* fr) {
    switch (e->k) {
    case K::Num:
        return Cplx(e->c.re.toDouble(), e->c.im.toDouble());
    case K::Sym: {
        const std::string& nm = e->name;
        if (fr && nm == "@1") return fr->u;
        auto it = p.syms.find(nm);
        if (it != p.syms.end()) return it->second;
        if (nm == "t") return fr ? Cplx(fr->u) : Cplx(p.t);
        if (nm == "rho") return std::abs(p.psi);
        if (nm.size() >= 2 && nm[0] == 'x') {
            int a = std::atoi(nm.c_str() + 1);
            if (a >= 1 && a <= (int)p.x.size()) return p.x[a - 1];
        }
        auto iv = inst.symVals_.find(nm);
        if (iv != inst.symVals_.end()) return iv->second;
        // lazily assigned parameter value, persisted for determinism
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        double v = U(inst.rng_);
        const_cast<NumericInstance&>(inst).symVals_[nm] = v;
        return v;
    }
    case K::Jet: {
        if (e->jt == 0) {
            bool base = true;
            for (int v : e->jx) base = base && v == 0;
            if (base) return e->cj ? std::conj(p.psi) : p.psi;
        }
        auto it = p.jets.find({e->jt, e->jx});
        if (it == p.jets.end()) throw kernel_error("no sampled value for a jet");
        return e->cj ? std::conj(it->second) : it->second;
    }
    case K::Func: {
        std::vector<Cplx> args;
        args.reserve(e->a.size());
        for (auto& ch : e->a) args.push_back(evalIn(inst, ch, p, fr));
        // inside a rule right-hand side, ruled functions read from the state
        // vector instead of re-entering the integrator
        if (fr) {
            auto id = inst.ctx_.funcs.find(e->name);
            if (id != inst.ctx_.funcs.end() && id->second.ruleOrder > 0 &&
                inst.closed_.find(e->name) == inst.closed_.end()) {
                auto& st = *inst.ode_;
                auto& ent = st.entries[st.index.at(e->name)];
                int order = 0;
                for (int m : e->mid) order += m;
                Cplx v;
                if (order < ent.order)
                    v = (*fr->y)[ent.offset + order];
                else if (order == ent.order)
                    v = evalRule(inst, e->name, *fr);
                else
                    throw kernel_error("rule references an underived order");
                return e->cj ? std::conj(v) : v;
            }
        }
        Cplx v = inst.evalFunc(e->name, e->mid, args, false);
        return e->cj ? std::conj(v) : v;
    }
    case K::Add: {
        Cplx s = 0;
        for (auto& ch : e->a) s += evalIn(inst, ch, p, fr);
        return s;
    }
    case K::Mul: {
        Cplx s = 1;
        for (auto& ch : e->a) s *= evalIn(inst, ch, p, fr);
        return s;
    }
    case K::Pow: {
        Cplx b = evalIn(inst, e->a[0], p, fr);
        double q = e->e.toDouble();
        if (e->e.isInt()) {
            long long k = e->e.n;
            Cplx r = 1, base = k < 0 ? 1.0 / b : b;
            for (long long j = 0, m = std::llabs(k); j < m; ++j) r *= base;
            return r;
        }
        if (std::abs(b.imag()) < 1e-14 && b.real() > 0)
            return std::pow(b.real(), q);
        return std::pow(b, Cplx(q));
    }
    }
    throw kernel_error("unreachable");
}

Cplx NumericInstance::evalFunc(const std::string& name, const std::vector<int>& mid,
                               const std::vector<Cplx>& args, bool) const {
    auto ic = closed_.find(name);
    if (ic != closed_.end()) return ic->second(mid, args);
    auto id = ctx_.funcs.find(name);
    if (id == ctx_.funcs.end()) throw kernel_error("undeclared function " + name);
    const FuncDecl& d = id->second;
    if (d.eval != EvalKind::Abstract) {
        // builtins always carry an empty derivative index (gradients are
        // expanded at construction time)
        Cplx u = args[0];
        switch (d.eval) {
        case EvalKind::Sin: return std::sin(u);
        case EvalKind::Cos: return std::cos(u);
        case EvalKind::Tan: return std::tan(u);
        case EvalKind::Exp: return std::exp(u);
        case EvalKind::Ln: return std::log(u);
        case EvalKind::Atan: return std::atan(u);
        case EvalKind::Abs: return std::abs(u.real());
        case EvalKind::Sgn: return u.real() >= 0 ? 1.0 : -1.0;
        case EvalKind::Phi2: return std::atan2(args[1].real(), args[0].real());
        default: break;
        }
    }
    if (d.ruleOrder > 0) {
        int order = 0;
        for (int m : mid) order += m;
        if (std::abs(args[0].imag()) > 1e-9)
            throw kernel_error("ruled function evaluated at a complex argument");
        return ruled(name, order, args[0].real());
    }
    auto ip = polys_.find(name);
    if (ip == polys_.end())
        ip = polys_.emplace(name, PolyEval::make(d, rng_)).first;
    return ip->second->eval(mid, args);
}

Cplx NumericInstance::eval(const Ex& e, const SamplePoint& p) const {
    return OdeProbe::evalIn(*this, e, p, nullptr);
}

SamplePoint NumericInstance::randomPoint() {
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::uniform_real_distribution<double> Ut(tlo_, thi_);
    SamplePoint p;
    for (int tries = 0;; ++tries) {
        p.t = Ut(rng_);
        bool ok = true;
        for (auto& [ts, m] : avoid_)
            if (std::abs(p.t - ts) < m) ok = false;
        if (ok || tries > 200) break;
    }
    p.x.resize(ctx_.n);
    for (int tries = 0;; ++tries) {
        bool ok = true;
        for (int a = 0; a < ctx_.n; ++a) {
            p.x[a] = U(rng_);
            if (std::abs(p.x[a]) < xfloor_) ok = false;
        }
        if (ok || tries > 200) break;
    }
    std::uniform_real_distribution<double> V(-1.5, 1.5);
    do {
        p.psi = Cplx(V(rng_), V(rng_));
    } while (std::abs(p.psi) < 0.1);
    // jet values up to total order 3 (enough for on-shell residuals)
    std::function<void(int, std::vector<int>&, int)> gen = [&](int slot,
                                                               std::vector<int>& jx,
                                                               int left) {
        if (slot == ctx_.n) {
            for (int jt = 0; jt <= std::min(left, 2); ++jt)
                p.jets[{jt, jx}] = Cplx(V(rng_), V(rng_));
            return;
        }
        for (int v = 0; v <= left; ++v) {
            jx[slot] = v;
            gen(slot + 1, jx, left - v);
        }
        jx[slot] = 0;
    };
    std::vector<int> jx(ctx_.n, 0);
    gen(0, jx, 3);
    p.jets[{0, std::vector<int>(ctx_.n, 0)}] = p.psi;
    return p;
}

double numericResidual(NumericInstance& inst, const Ex& residual, int npoints) {
    double worst = 0;
    for (int i = 0; i < npoints; ++i) {
        for (int tries = 0;; ++tries) {
            SamplePoint p = inst.randomPoint();
            Cplx v = inst.eval(residual, p);
            if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
                worst = std::max(worst, std::abs(v));
                break;
            }
            if (tries >= 8) throw kernel_error("residual evaluation kept diverging");
        }
    }
    return worst;
}

int numericRank(NumericInstance& inst, const std::vector<std::vector<Ex>>& rows,
                int samples) {
    if (rows.empty()) return 0;
    int nc = (int)rows[0].size();
    Eigen::MatrixXcd M((Eigen::Index)rows.size(), (Eigen::Index)(nc * samples));
    for (int s = 0; s < samples; ++s) {
        SamplePoint p = inst.randomPoint();
        for (int r = 0; r < (int)rows.size(); ++r)
            for (int c = 0; c < nc; ++c)
                M(r, (Eigen::Index)(s * nc + c)) = inst.eval(rows[r][c], p);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    auto sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double top = sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * top) ++rank;
    return rank;
}

} // namespace liesym
