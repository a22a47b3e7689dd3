// Canonicalization: expressions are flattened to an exact sum of monomials
// over atoms (symbols, jets, function applications, and powers of canonical
// sums) with complex-rational coefficients and rational exponents.
//
// Monomial-local rewrites keep the form canonical:
//   psi * psi~       -> rho^2
//   sin(u)^2         -> 1 - cos(u)^2          (sin powers reduced below 2)
//   exp(u)*exp(v)    -> exp(u+v), exp(q ln w) -> w^q
//   sgn(u)^2 -> 1, abs/sgn/plain powers of the same base folded canonically
//   positive integer powers of sum bases are expanded
// Zero-testing additionally clears sum-base and sin denominators.

#include "liesym/expr.hpp"

#include <algorithm>

namespace liesym {

bool MonoCmp::operator()(const Mono& a, const Mono& b) const {
    size_t m = std::min(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
        if (int c = exCmp(a[i].base, b[i].base)) return c < 0;
        if (a[i].e != b[i].e) return a[i].e < b[i].e;
    }
    return a.size() < b.size();
}

Poly polyAdd(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.t) {
        auto it = r.t.find(m);
        if (it == r.t.end()) {
            if (!c.isZero()) r.t.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.isZero()) r.t.erase(it);
        }
    }
    return r;
}

Poly polyScale(const Poly& a, const CRat& c) {
    Poly r;
    if (c.isZero()) return r;
    for (auto& [m, v] : a.t) r.t.emplace(m, v * c);
    return r;
}

static Poly normalizeMono(const Context& ctx, std::vector<Factor> fs, CRat c);

static Poly monoPoly(Mono m, const CRat& c) {
    Poly p;
    if (!c.isZero()) p.t.emplace(std::move(m), c);
    return p;
}

Poly polyMul(const Context& ctx, const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a.t)
        for (auto& [mb, cb] : b.t) {
            std::vector<Factor> fs = ma;
            fs.insert(fs.end(), mb.begin(), mb.end());
            r = polyAdd(r, normalizeMono(ctx, std::move(fs), ca * cb));
        }
    return r;
}

// c^q as a single-monomial poly; keeps an opaque constant-power atom when the
// root is not exact (e.g. 2^{1/3})
static Poly coefPow(const CRat& c, const Rat& q) {
    if (q.isInt()) return monoPoly({}, c.ipow(q.n));
    if (!c.isReal()) throw kernel_error("fractional power of a non-real constant");
    Rat base = c.re;
    bool neg = base < Rat(0);
    if (neg) {
        if (q.d % 2 == 0) throw kernel_error("even root of a negative constant");
        base = -base;
    }
    Rat root;
    CRat sign((q.n % 2 != 0 && neg) ? Rat(-1) : Rat(1));
    if (exactRoot(base, q.d, root)) return monoPoly({}, sign * CRat(root.ipow(q.n)));
    Mono m{Factor{cnum(CRat(base)), q}};
    return monoPoly(std::move(m), sign);
}

// fast conversion of a canonical Add node (as stored in sum-base atoms)
static Poly addBasePoly(const Context& ctx, const Ex& b) { return toPoly(ctx, b); }

struct SumBaseSplit {
    Poly scale;  // single-monomial poly with the extracted content
    Ex base;     // normalized sum
};

// divide a multi-term poly by its leading coefficient and any common single
// factor so that equal sums always produce the identical base atom
static SumBaseSplit normalizeSumBase(const Context& ctx, const Poly& p) {
    // common factor extraction: base present in every monomial with uniform sign
    std::vector<Factor> common;
    const Mono& first = p.t.begin()->first;
    for (const Factor& f : first) {
        Rat lo = f.e, hi = f.e;
        bool everywhere = true;
        for (auto& [m, c] : p.t) {
            bool found = false;
            for (const Factor& g : m)
                if (exEq(g.base, f.base)) {
                    found = true;
                    if (g.e < lo) lo = g.e;
                    if (hi < g.e) hi = g.e;
                    break;
                }
            if (!found) { everywhere = false; break; }
        }
        if (!everywhere) continue;
        if (Rat(0) < lo) common.push_back({f.base, lo});
        else if (hi < Rat(0)) common.push_back({f.base, hi});
    }
    Poly reduced;
    for (auto& [m, c] : p.t) {
        std::vector<Factor> fs;
        for (const Factor& f : m) {
            Rat e = f.e;
            for (const Factor& g : common)
                if (exEq(g.base, f.base)) { e = e - g.e; break; }
            if (!e.isZero()) fs.push_back({f.base, e});
        }
        Mono mm = std::move(fs);
        reduced = polyAdd(reduced, monoPoly(std::move(mm), c));
    }
    CRat c0 = reduced.t.begin()->second;
    SumBaseSplit out;
    out.base = fromPoly(ctx, polyScale(reduced, CRat(Rat(1)) / c0));
    Mono sm = std::move(common);
    out.scale = monoPoly(std::move(sm), c0);
    return out;
}

Poly polyPow(const Context& ctx, const Poly& p, const Rat& q) {
    if (q.isZero()) return monoPoly({}, CRat(1));
    if (p.empty()) {
        if (q.n < 0) throw kernel_error("zero to negative power");
        return Poly{};
    }
    if (p.t.size() == 1) {
        const auto& [m, c] = *p.t.begin();
        Poly cp = coefPow(c, q);
        const auto& [cm, cc] = *cp.t.begin();
        std::vector<Factor> fs = cm;
        for (const Factor& f : m) fs.push_back({f.base, f.e * q});
        return normalizeMono(ctx, std::move(fs), cc);
    }
    if (q.isInt() && q.n > 0) {
        Poly r = monoPoly({}, CRat(1));
        Poly b = p;
        long long e = q.n;
        while (e) {
            if (e & 1) r = polyMul(ctx, r, b);
            b = (e >>= 1) ? polyMul(ctx, b, b) : b;
        }
        return r;
    }
    SumBaseSplit s = normalizeSumBase(ctx, p);
    Poly scale = polyPow(ctx, s.scale, q);
    std::vector<Factor> fs{Factor{s.base, q}};
    return polyMul(ctx, scale, normalizeMono(ctx, std::move(fs), CRat(1)));
}

static bool isFuncNamed(const Ex& e, const char* name) {
    return e->k == K::Func && e->name == name;
}

static bool containsEx(const Ex& e, const Ex& key) {
    if (exEq(e, key)) return true;
    for (auto& g : e->a)
        if (containsEx(g, key)) return true;
    return false;
}

static Poly normalizeMono(const Context& ctx, std::vector<Factor> fs, CRat c) {
    if (c.isZero()) return Poly{};
    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;

        // structural cleanup of bases
        for (size_t i = 0; i < fs.size(); ++i) {
            Ex b = fs[i].base;
            if (b->k == K::Pow) {
                fs[i] = {b->a[0], b->e * fs[i].e};
                changed = true;
            } else if (b->k == K::Mul) {
                Poly inner = polyPow(ctx, toPoly(ctx, b), fs[i].e);
                fs.erase(fs.begin() + i);
                return polyMul(ctx, normalizeMono(ctx, std::move(fs), c), inner);
            } else if (b->k == K::Func) {
                std::vector<Ex> args;
                bool argChanged = false;
                for (auto& g : b->a) {
                    Ex sg = simplify(ctx, g);
                    argChanged = argChanged || !exEq(sg, g);
                    args.push_back(sg);
                }
                if (argChanged) {
                    Ex nb = ctx.fn(b->name, std::move(args), b->mid, b->cj);
                    if (nb->k != K::Func) {
                        Poly inner = polyPow(ctx, toPoly(ctx, nb), fs[i].e);
                        fs.erase(fs.begin() + i);
                        return polyMul(ctx, normalizeMono(ctx, std::move(fs), c), inner);
                    }
                    fs[i].base = nb;
                    changed = true;
                }
            }
        }

        // sort and merge equal bases
        std::stable_sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) {
            return exCmp(a.base, b.base) < 0;
        });
        for (size_t i = 0; i + 1 < fs.size();) {
            if (exEq(fs[i].base, fs[i + 1].base)) {
                fs[i].e = fs[i].e + fs[i + 1].e;
                fs.erase(fs.begin() + i + 1);
                changed = true;
            } else {
                ++i;
            }
        }
        for (size_t i = 0; i < fs.size();) {
            if (fs[i].e.isZero()) { fs.erase(fs.begin() + i); changed = true; }
            else ++i;
        }

        // exact powers of rational constants
        for (size_t i = 0; i < fs.size(); ++i) {
            if (fs[i].base->k != K::Num) continue;
            Poly cp = coefPow(fs[i].base->c, fs[i].e);
            const auto& [m, cc] = *cp.t.begin();
            if (m.empty()) {
                c = c * cc;
                fs.erase(fs.begin() + i);
                changed = true;
                --i;
            } else if (!exEq(m[0].base, fs[i].base) || m[0].e != fs[i].e) {
                c = c * cc;
                fs[i] = m[0];
                changed = true;
            }
        }

        // psi * conj(psi) -> rho^2
        {
            int ip = -1, ic = -1;
            for (size_t i = 0; i < fs.size(); ++i)
                if (fs[i].base->k == K::Jet && fs[i].base->jt == 0 &&
                    std::all_of(fs[i].base->jx.begin(), fs[i].base->jx.end(),
                                [](int v) { return v == 0; })) {
                    (fs[i].base->cj ? ic : ip) = (int)i;
                }
            if (ip >= 0 && ic >= 0) {
                Rat p = fs[ip].e, q = fs[ic].e, m(0);
                if (Rat(0) < p && Rat(0) < q) m = p < q ? p : q;
                if (p < Rat(0) && q < Rat(0)) m = p < q ? q : p;
                if (!m.isZero()) {
                    fs[ip].e = fs[ip].e - m;
                    fs[ic].e = fs[ic].e - m;
                    fs.push_back({sym("rho"), m * Rat(2)});
                    changed = true;
                    continue;
                }
            }
        }

        // sin(u)^k, k >= 2 -> sin^{k-2} (1 - cos(u)^2)
        {
            int is = -1;
            for (size_t i = 0; i < fs.size(); ++i)
                if (isFuncNamed(fs[i].base, "sin") && fs[i].e.isInt() && fs[i].e.n >= 2) {
                    is = (int)i;
                    break;
                }
            if (is >= 0) {
                Ex u = fs[is].base->a[0];
                fs[is].e = fs[is].e - Rat(2);
                Poly rest = normalizeMono(ctx, std::move(fs), c);
                Ex cosu = ctx.fn("cos", {u});
                return polyMul(ctx, rest, toPoly(ctx, 1 - cosu * cosu));
            }
        }

        // merge exponentials, extract rational multiples of logarithms
        {
            std::vector<size_t> ei;
            for (size_t i = 0; i < fs.size(); ++i)
                if (isFuncNamed(fs[i].base, "exp")) ei.push_back(i);
            if (!ei.empty()) {
                Poly A;
                for (size_t i : ei)
                    A = polyAdd(A, polyScale(toPoly(ctx, fs[i].base->a[0]), CRat(fs[i].e)));
                std::vector<std::pair<Ex, Rat>> pulls;
                Poly rem;
                for (auto& [m, cc] : A.t) {
                    if (m.size() == 1 && isFuncNamed(m[0].base, "ln") && m[0].e.isOne() &&
                        cc.isReal()) {
                        pulls.push_back({m[0].base->a[0], cc.re});
                    } else {
                        rem = polyAdd(rem, monoPoly(m, cc));
                    }
                }
                bool trivial = pulls.empty() && ei.size() == 1 && fs[ei[0]].e.isOne() &&
                               exEq(fromPoly(ctx, A), fs[ei[0]].base->a[0]);
                if (!trivial) {
                    for (size_t j = ei.size(); j-- > 0;) fs.erase(fs.begin() + ei[j]);
                    Poly out = normalizeMono(ctx, std::move(fs), c);
                    for (auto& [w, q] : pulls)
                        out = polyMul(ctx, out, toPoly(ctx, powr(w, q)));
                    if (!rem.empty()) {
                        Ex arg = fromPoly(ctx, rem);
                        Mono em{Factor{ctx.fn("exp", {arg}), Rat(1)}};
                        out = polyMul(ctx, out, monoPoly(std::move(em), CRat(1)));
                    }
                    return out;
                }
            }
        }

        // canonical abs/sgn folding per inner argument
        {
            bool folded = false;
            for (size_t i = 0; i < fs.size() && !folded; ++i) {
                if (!isFuncNamed(fs[i].base, "abs") && !isFuncNamed(fs[i].base, "sgn"))
                    continue;
                Ex u = fs[i].base->a[0];
                Rat alpha(0);
                long long s = 0;
                Rat plain(0);
                std::vector<size_t> drop;
                for (size_t j = 0; j < fs.size(); ++j) {
                    if ((isFuncNamed(fs[j].base, "abs") || isFuncNamed(fs[j].base, "sgn")) &&
                        exEq(fs[j].base->a[0], u)) {
                        if (fs[j].base->name[0] == 'a') alpha = alpha + fs[j].e;
                        else {
                            if (!fs[j].e.isInt())
                                throw kernel_error("non-integer power of sgn");
                            s += fs[j].e.n;
                        }
                        drop.push_back(j);
                    } else if (exEq(fs[j].base, u) && fs[j].e.isInt()) {
                        plain = fs[j].e;
                        drop.push_back(j);
                    }
                }
                // fold integer plain powers into abs/sgn, then re-normalize
                alpha = alpha + plain;
                s = ((s + plain.n) % 2 + 2) % 2;
                std::vector<Factor> repl;
                if (alpha.isInt()) {
                    long long k = alpha.n;
                    bool even = (k % 2 + 2) % 2 == 0;
                    if ((even && s == 0) || (!even && s == 1)) {
                        if (k != 0) repl.push_back({u, Rat(k)});
                    } else if (!even && s == 0) {
                        repl.push_back({ctx.fn("abs", {u}), Rat(k)});
                    } else {
                        if (k != 0) repl.push_back({u, Rat(k)});
                        repl.push_back({ctx.fn("sgn", {u}), Rat(1)});
                    }
                } else {
                    if (!alpha.isZero()) repl.push_back({ctx.fn("abs", {u}), alpha});
                    if (s) repl.push_back({ctx.fn("sgn", {u}), Rat(1)});
                }
                // detect change
                std::vector<Factor> old;
                for (size_t j : drop) old.push_back(fs[j]);
                bool same = old.size() == repl.size();
                if (same)
                    for (size_t j = 0; j < old.size(); ++j)
                        same = same && exEq(old[j].base, repl[j].base) && old[j].e == repl[j].e;
                if (!same) {
                    for (size_t j = drop.size(); j-- > 0;) fs.erase(fs.begin() + drop[j]);
                    fs.insert(fs.end(), repl.begin(), repl.end());
                    changed = true;
                    folded = true;
                }
            }
            if (folded) continue;
        }

        // expand positive integer parts of sum-base powers
        {
            int ib = -1;
            for (size_t i = 0; i < fs.size(); ++i)
                if (fs[i].base->k == K::Add && Rat(1) <= fs[i].e) {
                    ib = (int)i;
                    break;
                }
            if (ib >= 0) {
                long long k = fs[ib].e.floorToInt();
                Ex b = fs[ib].base;
                fs[ib].e = fs[ib].e - Rat(k);
                Poly rest = normalizeMono(ctx, std::move(fs), c);
                return polyMul(ctx, rest, polyPow(ctx, addBasePoly(ctx, b), Rat(k)));
            }
        }

        if (!changed) break;
        if (pass == 63) throw kernel_error("monomial normalization did not converge");
    }
    Mono m = std::move(fs);
    return monoPoly(std::move(m), c);
}

Poly toPoly(const Context& ctx, const Ex& e) {
    switch (e->k) {
        case K::Num: return monoPoly({}, e->c);
        case K::Sym:
        case K::Jet:
        case K::Func:
            return normalizeMono(ctx, {Factor{e, Rat(1)}}, CRat(1));
        case K::Add: {
            Poly r;
            for (auto& g : e->a) r = polyAdd(r, toPoly(ctx, g));
            return r;
        }
        case K::Mul: {
            Poly r = monoPoly({}, CRat(1));
            for (auto& g : e->a) r = polyMul(ctx, r, toPoly(ctx, g));
            return r;
        }
        case K::Pow:
            return polyPow(ctx, toPoly(ctx, e->a[0]), e->e);
    }
    throw kernel_error("toPoly: bad node");
}

Ex fromPoly(const Context& ctx, const Poly& p) {
    (void)ctx;
    if (p.empty()) return num(0);
    std::vector<Ex> terms;
    for (auto& [m, c] : p.t) {
        std::vector<Ex> fs;
        if (!c.isOne() || m.empty()) fs.push_back(cnum(c));
        for (const Factor& f : m) fs.push_back(powr(f.base, f.e));
        terms.push_back(mul(std::move(fs)));
    }
    return add(std::move(terms));
}

Ex simplify(const Context& ctx, const Ex& e) { return fromPoly(ctx, toPoly(ctx, e)); }

bool isZero(const Context& ctx, const Ex& e) {
    Poly p = toPoly(ctx, e);
    for (int pass = 0; pass < 40; ++pass) {
        if (p.empty()) return true;
        // find a clearable denominator: a negative power of a sum base or of sin
        const Ex* base = nullptr;
        Rat worst(0);
        for (auto& [m, c] : p.t)
            for (const Factor& f : m) {
                bool clearable = f.base->k == K::Add || isFuncNamed(f.base, "sin");
                if (clearable && f.e < Rat(0)) {
                    if (!base || f.e < worst || (f.e == worst && exCmp(f.base, *base) < 0)) {
                        base = &f.base;
                        worst = f.e;
                    }
                }
            }
        if (!base) return false;
        Ex b = *base;
        Rat m(0);
        for (auto& [mm, c] : p.t) {
            Rat e(0);
            for (const Factor& f : mm)
                if (exEq(f.base, b)) { e = f.e; break; }
            if (e < m) m = e;
        }
        Poly np;
        for (auto& [mm, cc] : p.t) {
            std::vector<Factor> fs = mm;
            fs.push_back({b, -m});
            np = polyAdd(np, normalizeMono(ctx, std::move(fs), cc));
        }
        p = std::move(np);
    }
    throw kernel_error("isZero: denominator clearing did not converge");
}

std::map<Mono, Ex, MonoCmp> collect(const Context& ctx, const Ex& e,
                                    const std::vector<Ex>& keys, bool allowInside) {
    Poly p = toPoly(ctx, e);
    std::map<Mono, Poly, MonoCmp> groups;
    for (auto& [m, c] : p.t) {
        Mono key, rest;
        for (const Factor& f : m) {
            bool isKey = false;
            for (const Ex& k : keys)
                if (exEq(f.base, k)) { isKey = true; break; }
            if (isKey) {
                key.push_back(f);
            } else {
                if (!allowInside)
                    for (const Ex& k : keys)
                        if (containsEx(f.base, k))
                            throw kernel_error("collect: key atom occurs inside coefficient");
                rest.push_back(f);
            }
        }
        groups[key] = polyAdd(groups[key], monoPoly(std::move(rest), c));
    }
    std::map<Mono, Ex, MonoCmp> out;
    for (auto& [k, q] : groups) out.emplace(k, fromPoly(ctx, q));
    return out;
}

} // namespace liesym
