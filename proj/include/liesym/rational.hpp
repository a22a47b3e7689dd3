// Exact rational and complex-rational arithmetic used for all coefficients and
// exponents in the symbolic kernel.  Overflow is detected via __int128 and
// reported as an exception: classification data keeps coefficients tiny, so an
// overflow always indicates a logic error rather than a capacity problem.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace liesym {

struct kernel_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Rat {
    long long n = 0;
    long long d = 1;

    Rat() = default;
    Rat(long long v) : n(v), d(1) {}
    Rat(long long num, long long den) : n(num), d(den) { normalize(); }

    void normalize() {
        if (d == 0) throw kernel_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n == 0) d = 1;
    }

    static Rat fromChecked(__int128 num, __int128 den) {
        if (den < 0) { num = -num; den = -den; }
        __int128 a = num < 0 ? -num : num;
        __int128 g = 1;
        {   // gcd on __int128
            __int128 x = a, y = den;
            while (y) { __int128 t = x % y; x = y; y = t; }
            g = x ? x : 1;
        }
        num /= g; den /= g;
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw kernel_error("rational overflow");
        Rat r; r.n = (long long)num; r.d = (long long)den;
        if (r.n == 0) r.d = 1;
        return r;
    }

    bool isZero() const { return n == 0; }
    bool isInt() const { return d == 1; }
    bool isOne() const { return n == 1 && d == 1; }
    double toDouble() const { return (double)n / (double)d; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return fromChecked((__int128)a.n * b.d + (__int128)b.n * a.d, (__int128)a.d * b.d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return fromChecked((__int128)a.n * b.d - (__int128)b.n * a.d, (__int128)a.d * b.d);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return fromChecked((__int128)a.n * b.n, (__int128)a.d * b.d);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.n == 0) throw kernel_error("rational division by zero");
        return fromChecked((__int128)a.n * b.d, (__int128)a.d * b.n);
    }
    Rat operator-() const { Rat r; r.n = -n; r.d = d; return r; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.n == b.n && a.d == b.d; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.n * b.d < (__int128)b.n * a.d;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    // integer power, e >= 0 or n != 0
    Rat ipow(long long e) const {
        if (e == 0) return Rat(1);
        if (e < 0) return Rat(1) / ipow(-e);
        Rat r(1), b = *this;
        while (e) { if (e & 1) r = r * b; b = b * b; e >>= 1; }
        return r;
    }

    long long floorToInt() const {
        long long q = n / d;
        if (n % d != 0 && n < 0) --q;
        return q;
    }

    std::string str() const {
        if (d == 1) return std::to_string(n);
        return std::to_string(n) + "/" + std::to_string(d);
    }
};

// exact r-th root of a rational if it exists (r >= 1); returns false otherwise
inline bool exactRoot(const Rat& a, long long r, Rat& out) {
    if (r == 1) { out = a; return true; }
    if (a.n < 0) return false;
    auto iroot = [](long long v, long long r, long long& res) {
        if (v == 0 || v == 1) { res = v; return true; }
        long long lo = 1, hi = 1;
        while (true) {
            __int128 p = 1; bool over = false;
            for (long long i = 0; i < r; ++i) { p *= hi; if (p > v) { over = true; break; } }
            if (over || p >= v) break;
            hi *= 2;
        }
        while (lo <= hi) {
            long long mid = lo + (hi - lo) / 2;
            __int128 p = 1; bool over = false;
            for (long long i = 0; i < r; ++i) { p *= mid; if (p > v) { over = true; break; } }
            if (!over && p == v) { res = mid; return true; }
            if (over || p > v) hi = mid - 1; else lo = mid + 1;
        }
        return false;
    };
    long long rn, rd;
    if (!iroot(a.n, r, rn) || !iroot(a.d, r, rd)) return false;
    out = Rat(rn, rd);
    return true;
}

struct CRat {
    Rat re, im;
    CRat() = default;
    CRat(Rat r) : re(r) {}
    CRat(long long r) : re(Rat(r)) {}
    CRat(Rat r, Rat i) : re(r), im(i) {}

    bool isZero() const { return re.isZero() && im.isZero(); }
    bool isOne() const { return re.isOne() && im.isZero(); }
    bool isReal() const { return im.isZero(); }
    CRat conj() const { return CRat(re, -im); }

    friend CRat operator+(const CRat& a, const CRat& b) { return CRat(a.re + b.re, a.im + b.im); }
    friend CRat operator-(const CRat& a, const CRat& b) { return CRat(a.re - b.re, a.im - b.im); }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return CRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend CRat operator/(const CRat& a, const CRat& b) {
        Rat m = b.re * b.re + b.im * b.im;
        if (m.isZero()) throw kernel_error("complex division by zero");
        return CRat((a.re * b.re + a.im * b.im) / m, (a.im * b.re - a.re * b.im) / m);
    }
    CRat operator-() const { return CRat(-re, -im); }
    friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
    friend bool operator<(const CRat& a, const CRat& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }

    CRat ipow(long long e) const {
        if (e < 0) return CRat(Rat(1)) / ipow(-e);
        CRat r{Rat(1)}, b = *this;
        while (e) { if (e & 1) r = r * b; b = b * b; e >>= 1; }
        return r;
    }

    std::string str() const {
        if (im.isZero()) return re.str();
        return "(" + re.str() + "+" + im.str() + "i)";
    }
};

} // namespace liesym
