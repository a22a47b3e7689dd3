// S-expression serialization of expressions (round-trip exact) plus a small
// infix pretty-printer for reports.

#include "liesym/expr.hpp"

#include <algorithm>
#include <sstream>

namespace liesym {

static void sx(const Ex& e, std::ostream& os) {
    switch (e->k) {
        case K::Num: {
            if (e->c.isReal()) { os << e->c.re.str(); return; }
            os << "(cplx " << e->c.re.str() << " " << e->c.im.str() << ")";
            return;
        }
        case K::Sym: os << e->name; return;
        case K::Jet: {
            os << "(jet " << (e->cj ? 1 : 0) << " " << e->jt;
            for (int v : e->jx) os << " " << v;
            os << ")";
            return;
        }
        case K::Func: {
            bool plain = !e->cj;
            for (int m : e->mid) plain = plain && m == 0;
            if (plain) {
                os << "(" << e->name;
                for (auto& g : e->a) { os << " "; sx(g, os); }
                os << ")";
                return;
            }
            os << (e->cj ? "(d* " : "(d ") << e->name << " (";
            for (size_t i = 0; i < e->mid.size(); ++i) os << (i ? " " : "") << e->mid[i];
            os << ")";
            for (auto& g : e->a) { os << " "; sx(g, os); }
            os << ")";
            return;
        }
        case K::Add:
        case K::Mul: {
            os << (e->k == K::Add ? "(+" : "(*");
            for (auto& g : e->a) { os << " "; sx(g, os); }
            os << ")";
            return;
        }
        case K::Pow: {
            os << "(^ ";
            sx(e->a[0], os);
            os << " " << e->e.str() << ")";
            return;
        }
    }
}

std::string toSexpr(const Ex& e) {
    std::ostringstream os;
    sx(e, os);
    return os.str();
}

// ---- pretty printer ----

static void pp(const Ex& e, std::ostream& os, int parent);

static void ppList(const Ex& e, std::ostream& os, const char* sep, int self) {
    for (size_t i = 0; i < e->a.size(); ++i) {
        if (i) os << sep;
        pp(e->a[i], os, self);
    }
}

static void pp(const Ex& e, std::ostream& os, int parent) {
    switch (e->k) {
        case K::Num: {
            if (e->c.isReal()) {
                bool wrap = parent >= 2 && (e->c.re < Rat(0) || !e->c.re.isInt());
                if (wrap) os << "(" << e->c.re.str() << ")";
                else os << e->c.re.str();
            } else if (e->c.re.isZero() && e->c.im.isOne()) {
                os << "i";
            } else {
                os << "(" << e->c.re.str() << "+" << e->c.im.str() << "i)";
            }
            return;
        }
        case K::Sym: os << e->name; return;
        case K::Jet: {
            os << "psi";
            if (e->cj) os << "~";
            if (e->jt || std::count(e->jx.begin(), e->jx.end(), 0) != (long)e->jx.size()) {
                os << "_";
                for (int k = 0; k < e->jt; ++k) os << "t";
                for (size_t a = 0; a < e->jx.size(); ++a)
                    for (int k = 0; k < e->jx[a]; ++k) os << (a + 1);
            }
            return;
        }
        case K::Func: {
            os << e->name;
            if (e->cj) os << "~";
            bool anyd = false;
            for (int m : e->mid) anyd = anyd || m;
            if (anyd) {
                os << "'{";
                for (size_t i = 0; i < e->mid.size(); ++i) os << (i ? "," : "") << e->mid[i];
                os << "}";
            }
            os << "(";
            ppList(e, os, ",", 0);
            os << ")";
            return;
        }
        case K::Add: {
            if (parent >= 2) os << "(";
            ppList(e, os, " + ", 1);
            if (parent >= 2) os << ")";
            return;
        }
        case K::Mul: {
            if (parent >= 3) os << "(";
            ppList(e, os, "*", 2);
            if (parent >= 3) os << ")";
            return;
        }
        case K::Pow: {
            pp(e->a[0], os, 3);
            os << "^";
            if (e->e.isInt() && e->e.n >= 0) os << e->e.n;
            else os << "(" << e->e.str() << ")";
            return;
        }
    }
}

std::string pretty(const Ex& e) {
    std::ostringstream os;
    pp(e, os, 0);
    return os.str();
}

// ---- parser ----

namespace {

struct Lexer {
    const std::string& s;
    size_t i = 0;
    explicit Lexer(const std::string& src) : s(src) {}
    std::string next() {
        while (i < s.size() && (isspace((unsigned char)s[i]) || s[i] == ';')) {
            if (s[i] == ';') { // comment to end of line
                while (i < s.size() && s[i] != '\n') ++i;
            } else ++i;
        }
        if (i >= s.size()) return "";
        if (s[i] == '(' || s[i] == ')') return std::string(1, s[i++]);
        size_t j = i;
        while (j < s.size() && !isspace((unsigned char)s[j]) && s[j] != '(' && s[j] != ')')
            ++j;
        std::string tok = s.substr(i, j - i);
        i = j;
        return tok;
    }
    std::string peek() {
        size_t save = i;
        std::string t = next();
        i = save;
        return t;
    }
};

bool isNumber(const std::string& t) {
    size_t i = t[0] == '-' ? 1 : 0;
    if (i >= t.size() || !isdigit((unsigned char)t[i])) return false;
    bool slash = false;
    for (; i < t.size(); ++i) {
        if (t[i] == '/' && !slash) { slash = true; continue; }
        if (!isdigit((unsigned char)t[i])) return false;
    }
    return true;
}

Rat parseRat(const std::string& t) {
    size_t slash = t.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(t));
    return Rat(std::stoll(t.substr(0, slash)), std::stoll(t.substr(slash + 1)));
}

struct Parser {
    const Context& ctx;
    Lexer lex;
    Ex defaultArg;

    Parser(const Context& c, const std::string& src, Ex da)
        : ctx(c), lex(src), defaultArg(std::move(da)) {}

    Ex atomFor(const std::string& t) {
        if (isNumber(t)) return num(parseRat(t));
        if (t == "i") return iu();
        if (t == "psi") return ctx.psi();
        if (t == "psi*" || t == "psi~") return ctx.psi(true);
        if (ctx.syms.count(t)) return sym(t);
        if (!t.empty() && t[0] == '@') return sym(t);
        auto it = ctx.funcs.find(t);
        if (it != ctx.funcs.end()) {
            if (it->second.nargs == 1 && defaultArg) return ctx.fn(t, {defaultArg});
            throw kernel_error("bare function name needs arguments: " + t);
        }
        throw kernel_error("unknown symbol: " + t);
    }

    std::vector<int> parseIntList() {
        if (lex.next() != "(") throw kernel_error("expected ( in multi-index");
        std::vector<int> v;
        for (std::string t = lex.next(); t != ")"; t = lex.next()) {
            if (t.empty()) throw kernel_error("unterminated multi-index");
            v.push_back((int)std::stol(t));
        }
        return v;
    }

    Ex expr() {
        std::string t = lex.next();
        if (t.empty()) throw kernel_error("unexpected end of input");
        if (t != "(") return atomFor(t);
        std::string op = lex.next();
        if (op == "cplx") {
            Rat re = parseRat(lex.next()), im = parseRat(lex.next());
            expect(")");
            return cnum(CRat(re, im));
        }
        if (op == "jet") {
            std::vector<int> v;
            for (std::string u = lex.next(); u != ")"; u = lex.next())
                v.push_back((int)std::stol(u));
            if ((int)v.size() != 2 + ctx.n) throw kernel_error("bad jet arity");
            return jet(v[0] != 0, v[1], std::vector<int>(v.begin() + 2, v.end()));
        }
        if (op == "d" || op == "d*") {
            std::string name = lex.next();
            std::vector<int> mid = parseIntList();
            std::vector<Ex> args = rest();
            if (args.empty() && defaultArg) args.push_back(defaultArg);
            return ctx.fn(name, std::move(args), std::move(mid), op == "d*");
        }
        if (op == "conj") {
            Ex e = expr();
            expect(")");
            return conjugate(ctx, e);
        }
        if (op == "+") return add(rest());
        if (op == "*") return mul(rest());
        if (op == "-") {
            std::vector<Ex> args = rest();
            if (args.size() == 1) return -args[0];
            if (args.size() == 2) return args[0] - args[1];
            throw kernel_error("(-) takes 1 or 2 arguments");
        }
        if (op == "/") {
            std::vector<Ex> args = rest();
            if (args.size() != 2) throw kernel_error("(/) takes 2 arguments");
            return args[0] / args[1];
        }
        if (op == "^") {
            Ex b = expr();
            std::string et = lex.next();
            if (!isNumber(et)) throw kernel_error("exponent must be rational");
            expect(")");
            return powr(b, parseRat(et));
        }
        // function application
        auto it = ctx.funcs.find(op);
        if (it == ctx.funcs.end()) throw kernel_error("unknown operator: " + op);
        return ctx.fn(op, rest());
    }

    std::vector<Ex> rest() {
        std::vector<Ex> v;
        while (true) {
            std::string p = lex.peek();
            if (p.empty()) throw kernel_error("unterminated list");
            if (p == ")") { lex.next(); return v; }
            v.push_back(expr());
        }
    }

    void expect(const std::string& t) {
        if (lex.next() != t) throw kernel_error("expected " + t);
    }
};

} // namespace

Ex parseSexpr(const Context& ctx, const std::string& src, const Ex& defaultArg) {
    Parser p(ctx, src, defaultArg);
    Ex e = p.expr();
    if (!p.lex.peek().empty()) throw kernel_error("trailing input after expression");
    return e;
}

Ex parseSexpr(const Context& ctx, const std::string& src) {
    return parseSexpr(ctx, src, sym("t"));
}

} // namespace liesym
