// Acceptance gate: one pass/fail line per criterion.
//
//  1. full case corpus verifies (symbolic + numeric) within the time budget
//  2. dimension maxima 7 / 8 / 9 and the rank-9 solution space at S = rho^2
//  3. determining-system regeneration at n = 2
//  4. equivariance sweep over (g, Q, S) triples per class
//  5. commutator table and the Jacobi identity
//  6. remark mappings onto the stationary companions
//  7. kernel algebras across random instances per class
//  8. reducibility predicates with verified witnesses
//  9. oracle sensitivity to potential perturbations
#include "liesym/tables.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

using namespace liesym;

namespace {

int failures = 0;

void line(int k, bool pass, const std::string& detail) {
    std::printf("[%d/9] %s  %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

Ex t_() { return sym("t"); }

Ex randPoly(std::mt19937& rng, int deg) {
    std::uniform_int_distribution<int> coef(-3, 3);
    Ex t = t_(), e = num(coef(rng)), p = num(1);
    for (int k = 1; k <= deg; ++k) {
        p = p * t;
        e = e + num(coef(rng)) * p;
    }
    return e;
}

VectorField randField(const Context& c, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-2, 2);
    VectorField v = fD(c, randPoly(rng, 2));
    v = vfAdd(c, v, vfScale(c, fJ(c, 0, 1), num(coef(rng))));
    v = vfAdd(c, v, fP(c, {randPoly(rng, 2), randPoly(rng, 2)}));
    v = vfAdd(c, v, fM(c, randPoly(rng, 2)));
    v = vfAdd(c, v, fI(c, randPoly(rng, 1)));
    return v;
}

bool groupHas(const Context& c, const std::vector<Ex>& g, const Ex& expected) {
    for (auto& e : g)
        if (isZero(c, e - expected)) return true;
    return false;
}

// ---- criterion 1: full corpus ----
void crit1(const std::vector<ClassificationCase>& corpus) {
    auto t0 = std::chrono::steady_clock::now();
    int nvf = 0, nlog = 0, npow = 0, bad = 0;
    std::string firstBad;
    for (const auto& c : corpus) {
        (c.theorem == TheoremId::Vf ? nvf
         : c.theorem == TheoremId::Log ? nlog : npow)++;
        CaseReport r = verifyCase(c);
        if (!r.pass) {
            ++bad;
            if (firstBad.empty())
                firstBad = std::string(theoremName(c.theorem)) + "/" + c.id;
        }
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "case corpus: " << nvf << " Vf + " << nlog << " Log + " << npow
       << " Power cases (remark variants and the real-delta branch included), "
       << bad << " failure(s)";
    if (!firstBad.empty()) os << " (first: " << firstBad << ")";
    os << ", " << secs << " s";
    line(1, bad == 0 && nvf == 15 && nlog == 16 && npow == 28 && secs < 300,
         os.str());
}

// ---- criterion 2: dimension maxima and the rank-9 solution space ----
void crit2(const std::vector<ClassificationCase>& corpus) {
    std::map<TheoremId, int> maxDim;
    std::map<TheoremId, std::string> attained;
    for (const auto& c : corpus)
        if (c.dim > maxDim[c.theorem]) {
            maxDim[c.theorem] = c.dim;
            attained[c.theorem] = c.id;
        }
    bool dims = maxDim[TheoremId::Vf] == 7 && attained[TheoremId::Vf] == "14" &&
                maxDim[TheoremId::Log] == 8 && attained[TheoremId::Log] == "14" &&
                maxDim[TheoremId::Power] == 9 && attained[TheoremId::Power] == "23";
    // S = rho^2 at n = 2: lambda = 2, zero potential (case 23); the listed
    // generators span a solution space of numeric rank exactly 9
    const ClassificationCase* p23 = nullptr;
    for (const auto& c : corpus)
        if (c.theorem == TheoremId::Power && c.id == "23") p23 = &c;
    int rank = -1;
    if (p23 && p23->lambda == Rat(2)) {
        CaseInstance m = materialize(*p23);
        NumericInstance inst(*m.ctx, 11);
        configureOracle(*p23, m, inst);
        rank = numericRank(inst, componentRows(m.basis), 10);
    }
    std::ostringstream os;
    os << "dimension maxima 7/8/9 attained at cases 14/14/23; rank of the "
          "S = rho^2 solution space = " << rank;
    line(2, dims && rank == 9, os.str());
}

// ---- criterion 3: determining-system regeneration ----
void crit3() {
    bool ok = false;
    std::ostringstream os;
    try {
        DetSystem ds = deriveDeterminingSystem(2);
        const Context& c = ds.ctx;
        std::vector<Ex> args{t_(), c.xvar(0), c.xvar(1), c.psi(), c.psi(true)};
        auto at = [&](const char* f, std::vector<int> mid) {
            return c.fn(f, args, std::move(mid));
        };
        bool a = ds.groupA.size() == 11 && ds.groupB.size() == 5 &&
                 ds.rendered.size() == 17;
        // 2 eta_{psi a} = i xi^a_t
        bool b = groupHas(c, ds.groupB, 2 * at("eta", {0, 1, 0, 1, 0}) -
                                            iu() * at("xi1", {1, 0, 0, 0, 0})) &&
                 groupHas(c, ds.groupB, 2 * at("eta", {0, 0, 1, 1, 0}) -
                                            iu() * at("xi2", {1, 0, 0, 0, 0}));
        // xi^a_b + xi^b_a = 0
        bool d = groupHas(c, ds.groupA, at("xi1", {0, 0, 1, 0, 0}) +
                                            at("xi2", {0, 1, 0, 0, 0})) &&
                 groupHas(c, ds.groupA, at("tau", {1, 0, 0, 0, 0}) -
                                            2 * at("xi1", {0, 1, 0, 0, 0}));
        ok = a && b && d;
        os << "determining system n = 2: groups 11 + 5 + 1, includes "
              "2 eta_{psi a} = i xi^a_t and xi^a_b + xi^b_a = 0";
    } catch (const std::exception& ex) {
        os << "determining system derivation failed: " << ex.what();
    }
    line(3, ok, os.str());
}

// ---- criterion 4: equivariance sweep ----
void crit4(const std::vector<ClassificationCase>& corpus) {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> coef(-2, 2);
    int tried = 0, bad = 0;
    double worst = 0;
    std::string firstBad;
    for (TheoremId th : {TheoremId::Vf, TheoremId::Log, TheoremId::Power}) {
        std::vector<const ClassificationCase*> cases;
        for (const auto& c : corpus)
            if (c.theorem == th) cases.push_back(&c);
        for (int i = 0; i < 20; ++i) {
            const ClassificationCase& c = *cases[i % cases.size()];
            try {
                CaseInstance m = materialize(c);
                Context& ctx = *m.ctx;
                int gidx = i % (int)m.basis.size();
                // cases sampled away from |x| = 0 keep the x-geometry intact
                // (gauge or rotation); the rest also see translations and a
                // unit time shift
                int kind = (c.xfloor > 0) ? (i % 2) : (i % 4);
                // the P_lambda tag carries lambda on every transformation, so
                // gauge/rotation/translation parts are set on an identity base
                PointTransformation g =
                    ptD(ctx, t_(), t_(), 1, theoremClass(th), c.lambda);
                switch (kind) {
                case 0:
                    g.Sigma = randPoly(rng, 2);
                    break;
                case 1:
                    g.O = {{Rat(0), Rat(1)}, {Rat(-1), Rat(0)}};
                    break;
                case 2:
                    g.X = {randPoly(rng, 2), num(coef(rng)) * t_()};
                    break;
                default:
                    if (th == TheoremId::Log)
                        g = ptD(ctx, 2 * t_() + 1, (t_() - 1) / 2, 1,
                                ClassId::P0delta);
                    else
                        g = ptD(ctx, t_() + 1, t_() - 1, 1, theoremClass(th),
                                c.lambda);
                    break;
                }
                validate(ctx, g);
                EquationInstance en = actOnElements(ctx, g, m.eq);
                VectorField qn = pushforward(ctx, g, m.basis[gidx]);
                Ex raw = rawClassifyingResidual(ctx, qn, en);
                NumericInstance inst(ctx, 200 + i);
                configureOracle(c, m, inst);
                // the time shift moves the singular times of the potential
                for (double ts : c.avoid) {
                    inst.avoid(ts + 1, 0.12);
                    inst.avoid(2 * ts + 1, 0.12);
                    inst.avoid((ts - 1) / 2, 0.12);
                }
                double r = numericResidual(inst, raw, 25);
                worst = std::max(worst, r);
                ++tried;
                if (!(r < 1e-9)) {
                    ++bad;
                    if (firstBad.empty())
                        firstBad = std::string(theoremName(th)) + "/" + c.id;
                }
            } catch (const std::exception& ex) {
                ++bad;
                if (firstBad.empty())
                    firstBad = std::string(theoremName(th)) + "/" + c.id +
                               " threw: " + ex.what();
            }
        }
    }
    std::ostringstream os;
    os << "equivariance sweep: " << tried << " (g, Q, S) triples, worst residual "
       << worst;
    if (!firstBad.empty()) os << " (first failure: " << firstBad << ")";
    line(4, bad == 0 && tried == 60, os.str());
}

// ---- criterion 5: commutator table and Jacobi ----
void crit5() {
    Context c(2);
    c.declareFunc("f1", 1, true);
    c.declareFunc("f2", 1, true);
    Ex t1 = c.fd("f1"), t2 = c.fd("f2"), t = t_();
    bool table = true;
    auto req = [&](const VectorField& a, const VectorField& b) {
        table = table && vfEqual(c, a, b);
    };
    req(commutator(c, fD(c, t1), fD(c, t2)),
        fD(c, t1 * c.fd("f2", 1) - t2 * c.fd("f1", 1)));
    req(commutator(c, fD(c, t1), fP(c, {t2, num(0)})),
        fP(c, {t1 * c.fd("f2", 1) - Rat(1, 2) * c.fd("f1", 1) * t2, num(0)}));
    req(commutator(c, fD(c, t1), fM(c, t2)), fM(c, t1 * c.fd("f2", 1)));
    req(commutator(c, fD(c, t1), fI(c, t2)), fI(c, t1 * c.fd("f2", 1)));
    req(commutator(c, fJ(c, 0, 1), fP(c, {t1, t2})), fP(c, {t2, -t1}));
    req(commutator(c, fP(c, {t1, num(0)}), fP(c, {t2, num(0)})),
        fM(c, Rat(1, 2) * (t1 * c.fd("f2", 1) - t2 * c.fd("f1", 1))));
    req(commutator(c, fDl(c, t1, Rat(2)), fDl(c, t2, Rat(2))),
        fDl(c, t1 * c.fd("f2", 1) - t2 * c.fd("f1", 1), Rat(2)));
    table = table && vfIsZero(c, commutator(c, fM(c, num(1)), fI(c, t))) &&
            vfIsZero(c, commutator(c, fP(c, {t, num(0)}), fI(c, num(1)))) &&
            vfIsZero(c, commutator(c, fJ(c, 0, 1), fD(c, t1)));
    // cross-checked against the raw second-prolongation computation
    std::mt19937 rng(7);
    for (int it = 0; it < 6 && table; ++it) {
        VectorField A = randField(c, rng), B = randField(c, rng);
        RawField viaStruct = vfRaw(c, commutator(c, A, B));
        RawField viaRaw = commutatorRaw(c, vfRaw(c, A), vfRaw(c, B));
        table = table && isZero(c, viaStruct.xt - viaRaw.xt) &&
                isZero(c, viaStruct.eta - viaRaw.eta) &&
                isZero(c, viaStruct.etaStar - viaRaw.etaStar) &&
                isZero(c, viaStruct.xs[0] - viaRaw.xs[0]) &&
                isZero(c, viaStruct.xs[1] - viaRaw.xs[1]);
    }
    int jacBad = 0;
    std::mt19937 rng2(13);
    for (int it = 0; it < 200; ++it) {
        VectorField A = randField(c, rng2), B = randField(c, rng2),
                    C = randField(c, rng2);
        VectorField s = commutator(c, commutator(c, A, B), C);
        s = vfAdd(c, s, commutator(c, commutator(c, B, C), A));
        s = vfAdd(c, s, commutator(c, commutator(c, C, A), B));
        if (!vfIsZero(c, s)) ++jacBad;
    }
    std::ostringstream os;
    os << "commutator table verified against raw prolongation; Jacobi exact on "
          "200 random triples, " << jacBad << " violation(s)";
    line(5, table && jacBad == 0, os.str());
}

// ---- criterion 6: remark mappings ----
void crit6() {
    auto checks = verifyRemarkMappings();
    int bad = 0;
    std::string firstBad;
    for (const auto& ch : checks)
        if (!ch.pass) {
            ++bad;
            if (firstBad.empty()) firstBad = ch.name;
        }
    std::ostringstream os;
    os << "remark mappings 10' -> 10, 11' -> 11, 21' -> 21 (nu~ = 2(nu - "
          "lambda')), 22' -> 22: " << checks.size() << " checks, " << bad
       << " failure(s)";
    if (!firstBad.empty()) os << " (first: " << firstBad << ")";
    line(6, bad == 0 && checks.size() == 8, os.str());
}

// ---- criterion 7: kernel algebras across random instances ----
void crit7() {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> coef(-3, 3), nz(1, 3);
    auto randV = [&](Context& c) {
        Ex x1 = c.xvar(0), x2 = c.xvar(1);
        Ex V = randPoly(rng, 1) + randPoly(rng, 1) * x1 + randPoly(rng, 1) * x2 +
               num(coef(rng)) * x1 * x2 + num(coef(rng)) * x1 * x1 +
               num(coef(rng)) * x2 * x2;
        return V + iu() * (randPoly(rng, 1) + num(coef(rng)) * x1);
    };
    int mBad = 0, iBad = 0;
    const Rat lambdas[] = {Rat(-1), Rat(1), Rat(2), Rat(3)};
    for (int it = 0; it < 100; ++it) {
        // M across the three classes
        {
            Context c(2);
            Elements el;
            el.f = powr(sym("rho"), Rat(2)) + powr(sym("rho"), Rat(3));
            el.V = randV(c);
            EquationInstance e = buildEquation(c, ClassId::Vf, el, 2);
            if (!isZero(c, classifyingResidual(c, fM(c, num(1)), e).expr)) ++mBad;
        }
        {
            Context c(2);
            Elements el;
            el.V = randV(c);
            el.delta = CRat{Rat(coef(rng)), Rat(nz(rng))};
            EquationInstance e = buildEquation(c, ClassId::P0delta, el, 2);
            if (!isZero(c, classifyingResidual(c, fM(c, num(1)), e).expr)) ++mBad;
        }
        {
            Context c(2);
            Elements el;
            el.V = randV(c);
            el.delta = CRat{Rat(nz(rng)), Rat(coef(rng))};
            el.lambda = lambdas[it % 4];
            EquationInstance e = buildEquation(c, ClassId::Pldelta, el, 2);
            if (!isZero(c, classifyingResidual(c, fM(c, num(1)), e).expr)) ++mBad;
        }
        // I' on P0^delta, both delta_2 branches
        {
            Context c(2);
            Elements el;
            el.V = randV(c);
            bool d2zero = it % 2 == 0;
            el.delta = CRat{Rat(nz(rng)), d2zero ? Rat(0) : Rat(nz(rng))};
            EquationInstance e = buildEquation(c, ClassId::P0delta, el, 2);
            VectorField ip = fIprime(c, cnum(CRat(el.delta.re)),
                                     cnum(CRat(el.delta.im)), d2zero);
            if (!isZero(c, classifyingResidual(c, ip, e).expr)) ++iBad;
        }
    }
    std::ostringstream os;
    os << "kernel algebras: M zero on 100 random instances per class (" << mBad
       << " bad), I' zero on 100 P0^delta instances across both delta_2 "
          "branches (" << iBad << " bad)";
    line(7, mBad == 0 && iBad == 0, os.str());
}

// ---- criterion 8: reducibility predicates ----
void crit8() {
    int bad = 0, total = 0;
    std::string firstBad;
    auto judge = [&](Context& c, const EquationInstance& e, bool expectReducible,
                     const char* label) {
        ++total;
        bool ok = false;
        std::string why;
        try {
            Reducibility r = reducible(c, e);
            if (expectReducible) {
                ok = r.toZero && r.hasWitness;
                if (ok) {
                    NumericInstance inst(c, 300 + total);
                    for (auto& [name, y0] : r.ruledInits) inst.setInit(name, y0);
                    for (double ts : r.avoidTimes) inst.avoid(ts, 0.12);
                    ok = numericResidual(
                             inst, transformedPotentialOldVars(c, r.witness, e),
                             30) < 1e-9;
                    if (!ok) why = "witness residual too large";
                } else {
                    why = "expected a zero-potential witness";
                }
            } else {
                ok = !r.toZero;
                if (!ok) why = "unexpectedly reducible";
            }
        } catch (const std::exception& ex) {
            why = ex.what();
        }
        if (!ok) {
            ++bad;
            if (firstBad.empty())
                firstBad = std::string(label) + " #" + std::to_string(total) +
                           ": " + why;
        }
    };
    // V' corollary: 15 reducible (real affine), 15 not
    for (int k = 0; k < 15; ++k) {
        Context c(2);
        Elements el;
        el.f = powr(sym("rho"), Rat(2)) + powr(sym("rho"), Rat(3));
        el.V = num(k - 7) + num(k % 3) * t_() +
               (num(k % 5 - 2) + num(k % 2) * t_() * t_()) * c.xvar(0) +
               num(k % 4 - 1) * t_() * c.xvar(1);
        judge(c, buildEquation(c, ClassId::Vf, el, 2), true, "vf-red");
    }
    for (int k = 0; k < 15; ++k) {
        Context c(2);
        Elements el;
        el.f = powr(sym("rho"), Rat(2)) + powr(sym("rho"), Rat(3));
        if (k % 2 == 0)
            el.V = iu() * num(k + 1) * c.xvar(0) + num(k) * t_(); // complex slope
        else
            el.V = num(k) * c.xvar(0) * c.xvar(0) + c.xvar(1);    // not affine
        judge(c, buildEquation(c, ClassId::Vf, el, 2), false, "vf-irr");
    }
    // logarithmic corollary: 15 reducible (real linear part, complex free
    // term), 15 not (complex linear coefficient)
    for (int k = 0; k < 15; ++k) {
        Context c(2);
        Elements el;
        el.delta = (k % 2 == 0) ? CRat{Rat(1), Rat(1)} : CRat{Rat(2), Rat(0)};
        el.V = num(k % 4) * t_() * c.xvar(0) + num(k % 3 - 1) * c.xvar(1) +
               iu() * num(k % 5) * t_() + num(k - 7);
        judge(c, buildEquation(c, ClassId::P0delta, el, 2), true, "log-red");
    }
    for (int k = 0; k < 15; ++k) {
        Context c(2);
        Elements el;
        el.delta = CRat{Rat(1), Rat(k % 2)};
        el.V = iu() * num(k + 1) * c.xvar(0) + num(k) * t_();
        judge(c, buildEquation(c, ClassId::P0delta, el, 2), false, "log-irr");
    }
    // power corollary: 15 reducible including the boundary lambda = 4/n = 2,
    // 15 not (anisotropic, incompatible imaginary term, higher degree)
    {
        // coefficients with rational square roots, as required by the
        // closed-form witnesses
        const Rat ks[] = {Rat(1, 4), Rat(1), Rat(-1), Rat(-1, 4), Rat(4),
                          Rat(-4), Rat(9), Rat(16, 9), Rat(-9, 4), Rat(9, 4)};
        for (const Rat& k : ks) {
            Context c(2);
            Elements el;
            el.delta = CRat{Rat(0), Rat(1)};
            el.lambda = Rat(2); // lambda = 4/n boundary, lambda' = 0
            Ex xx = c.xvar(0) * c.xvar(0) + c.xvar(1) * c.xvar(1);
            el.V = num(k) * xx;
            judge(c, buildEquation(c, ClassId::Pldelta, el, 2), true, "pw-red");
        }
        for (int k = 0; k < 2; ++k) {
            Context c(2);
            Elements el;
            el.delta = CRat{Rat(0), Rat(1)};
            el.lambda = Rat(2);
            Ex xx = c.xvar(0) * c.xvar(0) + c.xvar(1) * c.xvar(1);
            el.V = num(k == 0 ? Rat(1, 4) : Rat(-1)) * xx + t_() * c.xvar(0);
            judge(c, buildEquation(c, ClassId::Pldelta, el, 2), true, "pw-red-lin");
        }
        for (int h0 : {2, 4}) {
            Context c(2);
            Elements el;
            el.delta = CRat{Rat(0), Rat(1)};
            el.lambda = Rat(1); // lambda' = 1/2, exponential family
            Ex xx = c.xvar(0) * c.xvar(0) + c.xvar(1) * c.xvar(1);
            el.V = num(Rat(h0 * h0, 4)) * xx + iu() * num(h0);
            judge(c, buildEquation(c, ClassId::Pldelta, el, 2), true, "pw-red-exp");
        }
        {
            Context c(2);
            Elements el;
            el.delta = CRat{Rat(0), Rat(1)};
            el.lambda = Rat(1); // ruled witness: h0 = t
            Ex xx = c.xvar(0) * c.xvar(0) + c.xvar(1) * c.xvar(1);
            el.V = (num(1) + t_() * t_()) / 4 * xx + iu() * t_() + t_() * c.xvar(0);
            judge(c, buildEquation(c, ClassId::Pldelta, el, 2), true, "pw-red-ruled");
        }
    }
    for (int k = 0; k < 15; ++k) {
        Context c(2);
        Elements el;
        el.delta = CRat{Rat(0), Rat(1)};
        Ex xx = c.xvar(0) * c.xvar(0) + c.xvar(1) * c.xvar(1);
        if (k % 3 == 0) {
            el.lambda = Rat(2);
            el.V = num(k + 1) * c.xvar(0) * c.xvar(0); // anisotropic
        } else if (k % 3 == 1) {
            el.lambda = Rat(1);
            el.V = xx + iu() * num(2 * k + 3); // incompatible imaginary term
        } else {
            el.lambda = Rat(3);
            el.V = c.xvar(0) * c.xvar(0) * c.xvar(0); // cubic, not applicable
        }
        judge(c, buildEquation(c, ClassId::Pldelta, el, 2), false, "pw-irr");
    }
    std::ostringstream os;
    os << "reducibility: " << total
       << " potentials (30 per corollary, half reducible with verified "
          "witnesses, boundary lambda = 4/n included), " << bad << " misclassified";
    if (!firstBad.empty()) os << " (first: " << firstBad << ")";
    line(8, bad == 0 && total == 90, os.str());
}

// ---- criterion 9: oracle sensitivity ----
void crit9(const std::vector<ClassificationCase>& corpus) {
    int tested = 0, insensitive = 0, skipped = 0;
    std::string firstBad;
    for (const auto& c : corpus) {
        // pure-kernel entries (k1 = k2 = k3 = 0) are symmetries of every
        // member, hence structurally potential-independent
        if (c.signature[2] + c.signature[3] + c.signature[4] == 0) {
            ++skipped;
            continue;
        }
        try {
            CaseInstance m = materialize(c);
            Context& ctx = *m.ctx;
            ctx.declareFunc("pert", 3, false);
            Ex W = ctx.fn("pert", {t_(), ctx.xvar(0), ctx.xvar(1)});
            Elements el;
            el.f = m.eq.f;
            el.V = m.eq.V + num(Rat(1, 100)) * W;
            el.delta = m.eq.delta;
            el.lambda = m.eq.lambda;
            EquationInstance ep = buildEquation(ctx, m.eq.id, el, 2);
            NumericInstance inst(ctx, 500);
            configureOracle(c, m, inst);
            double best = 0;
            for (const auto& q : m.basis)
                best = std::max(
                    best, numericResidual(inst, rawClassifyingResidual(ctx, q, ep),
                                          30));
            ++tested;
            if (!(best >= 1e-6)) {
                ++insensitive;
                if (firstBad.empty())
                    firstBad = std::string(theoremName(c.theorem)) + "/" + c.id;
            }
        } catch (const std::exception& ex) {
            ++insensitive;
            if (firstBad.empty())
                firstBad = std::string(theoremName(c.theorem)) + "/" + c.id +
                           " threw: " + ex.what();
        }
    }
    std::ostringstream os;
    os << "oracle sensitivity: 1e-2 potential perturbation detected (residual "
          ">= 1e-6) in " << tested - insensitive << "/" << tested
       << " extension cases; " << skipped
       << " pure-kernel entries structurally potential-independent";
    if (!firstBad.empty()) os << " (first failure: " << firstBad << ")";
    line(9, insensitive == 0 && tested + skipped == (int)corpus.size(), os.str());
}

} // namespace

int main() {
    std::vector<ClassificationCase> corpus;
    try {
        corpus = loadAll();
    } catch (const std::exception& ex) {
        std::printf("FAIL  cannot load the case corpus: %s\n", ex.what());
        return 1;
    }
    crit1(corpus);
    crit2(corpus);
    crit3();
    crit4(corpus);
    crit5();
    crit6();
    crit7();
    crit8();
    crit9(corpus);
    std::printf("ACCEPTANCE: %d/9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
