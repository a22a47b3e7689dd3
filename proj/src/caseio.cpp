#include "liesym/caseio.hpp"

#include "json.hpp"

#include <cstdlib>
#include <fstream>

namespace liesym {

using nlohmann::json;

const char* theoremName(TheoremId id) {
    switch (id) {
    case TheoremId::Vf: return "vf";
    case TheoremId::Log: return "log";
    case TheoremId::Power: return "power";
    }
    return "?";
}

ClassId theoremClass(TheoremId id) {
    switch (id) {
    case TheoremId::Vf: return ClassId::Vf;
    case TheoremId::Log: return ClassId::P0delta;
    default: return ClassId::Pldelta;
    }
}

std::string caseDir(const std::string& override_) {
    if (!override_.empty()) return override_;
    if (const char* env = std::getenv("LIESYM_CASE_DIR"); env && *env) return env;
#ifdef LIESYM_DEFAULT_CASE_DIR
    return LIESYM_DEFAULT_CASE_DIR;
#else
    return "cases";
#endif
}

namespace {

std::string ratStr(const Rat& r) {
    if (r.d == 1) return std::to_string(r.n);
    return std::to_string(r.n) + "/" + std::to_string(r.d);
}

Rat ratOf(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_array() && j.size() == 2)
        return Rat(j[0].get<long long>(), j[1].get<long long>());
    throw kernel_error("case file: rational must be an integer or [num, den]");
}

CRat cratOf(const json& j) {
    if (j.is_array() && j.size() == 2 && (j[0].is_array() || j[0].is_number()))
        return CRat(ratOf(j[0]), ratOf(j[1]));
    return CRat(ratOf(j));
}

// builtin + per-case macro table
std::map<std::string, std::string> macroTable(const ClassificationCase& c) {
    std::map<std::string, std::string> defs;
    defs["xx"] = "(+ (* x1 x1) (* x2 x2))";
    defs["absx"] = "(^ $xx 1/2)";
    defs["phi"] = "(phi2 x1 x2)";
    defs["w1"] = "(+ (* x1 (cos (* kp t))) (* x2 (sin (* kp t))))";
    defs["w2"] = "(- (* x2 (cos (* kp t))) (* x1 (sin (* kp t))))";
    defs["delta"] =
        "(cplx " + ratStr(c.delta.re) + " " + ratStr(c.delta.im) + ")";
    if (!c.lambda.isZero()) {
        defs["lambda"] = ratStr(c.lambda);
        Rat lamp = Rat(c.lambda.d, c.lambda.n) - Rat(1, 2); // n = 2
        defs["lamp"] = ratStr(lamp);
    }
    for (const auto& [k, v] : c.defs) defs[k] = v;
    return defs;
}

ClassificationCase parseCase(TheoremId th, const json& j, const json& root) {
    ClassificationCase c;
    c.theorem = th;
    c.id = j.at("id").get<std::string>();
    c.title = j.value("title", "");
    if (root.contains("delta")) c.delta = cratOf(root["delta"]);
    if (j.contains("delta")) c.delta = cratOf(j["delta"]);
    if (j.contains("lambda")) c.lambda = ratOf(j["lambda"]);
    if (th == TheoremId::Power && c.lambda.isZero())
        throw kernel_error("case file: power case without lambda: " + c.id);
    c.potential = j.at("potential").get<std::string>();
    if (j.contains("h0"))
        for (const auto& s : j["h0"]) c.h0.push_back(s.get<std::string>());
    for (const auto& gen : j.at("basis")) {
        std::vector<TermSpec> g;
        for (const auto& term : gen) {
            TermSpec ts;
            ts.kind = term.at("kind").get<std::string>();
            if (term.contains("args"))
                for (const auto& a : term["args"])
                    ts.args.push_back(a.get<std::string>());
            g.push_back(std::move(ts));
        }
        c.basis.push_back(std::move(g));
    }
    const auto& sig = j.at("signature");
    if (sig.size() != 5) throw kernel_error("case file: signature must have 5 entries");
    for (int i = 0; i < 5; ++i) c.signature[i] = sig[i].get<int>();
    c.dim = j.at("dim").get<int>();
    if (j.contains("constants"))
        for (const auto& k : j["constants"]) {
            ConstSpec cs;
            cs.name = k.at("name").get<std::string>();
            cs.positive = k.value("positive", false);
            cs.sample = k.value("sample", 1.0);
            c.constants.push_back(std::move(cs));
        }
    if (j.contains("functions"))
        for (const auto& k : j["functions"]) {
            FuncSpec fs;
            fs.name = k.at("name").get<std::string>();
            fs.nargs = k.value("nargs", 1);
            fs.realValued = k.value("real", true);
            fs.ruleOrder = k.value("rule_order", 0);
            fs.rule = k.value("rule", "");
            if (k.contains("init"))
                for (const auto& v : k["init"]) fs.init.push_back(v.get<double>());
            fs.sample = k.value("sample", "");
            if (!fs.sample.empty() && fs.nargs != 1)
                throw kernel_error("case file: closed-form samples are for functions of t");
            c.functions.push_back(std::move(fs));
        }
    if (j.contains("avoid"))
        for (const auto& v : j["avoid"]) c.avoid.push_back(v.get<double>());
    c.xfloor = j.value("xfloor", 0.0);
    if (j.contains("defs"))
        for (auto it = j["defs"].begin(); it != j["defs"].end(); ++it)
            c.defs[it.key()] = it.value().get<std::string>();
    if (j.contains("constraints"))
        for (const auto& s : j["constraints"]) c.constraints.push_back(s.get<std::string>());
    c.maximality = j.value("maximality", "");
    if (j.contains("subsumes"))
        for (auto it = j["subsumes"].begin(); it != j["subsumes"].end(); ++it)
            c.subsumes[it.key()] = it.value().get<std::string>();
    if (j.contains("notes"))
        for (const auto& s : j["notes"]) c.notes.push_back(s.get<std::string>());
    return c;
}

} // namespace

std::string expandMacros(const std::string& text,
                         const std::map<std::string, std::string>& defs) {
    std::string cur = text;
    for (int round = 0; round < 64; ++round) {
        auto pos = cur.find('$');
        if (pos == std::string::npos) return cur;
        std::string out;
        while (pos != std::string::npos) {
            out.append(cur, 0, pos);
            size_t end = pos + 1;
            while (end < cur.size() &&
                   (std::isalnum((unsigned char)cur[end]) || cur[end] == '_'))
                ++end;
            std::string name = cur.substr(pos + 1, end - pos - 1);
            auto it = defs.find(name);
            if (it == defs.end())
                throw kernel_error("unknown case-file macro $" + name);
            out += it->second;
            cur = cur.substr(end);
            pos = cur.find('$');
        }
        out += cur;
        cur = std::move(out);
    }
    throw kernel_error("case-file macro expansion did not terminate");
}

std::vector<ClassificationCase> loadTheorem(TheoremId id, const std::string& dir) {
    std::string path = caseDir(dir) + "/" + theoremName(id) + ".json";
    std::ifstream in(path);
    if (!in) throw kernel_error("cannot open case file " + path);
    json root;
    try {
        in >> root;
    } catch (const std::exception& ex) {
        throw kernel_error("cannot parse case file " + path + ": " + ex.what());
    }
    std::vector<ClassificationCase> out;
    for (const auto& j : root.at("cases")) out.push_back(parseCase(id, j, root));
    return out;
}

std::vector<ClassificationCase> loadAll(const std::string& dir) {
    std::vector<ClassificationCase> out;
    for (TheoremId id : {TheoremId::Vf, TheoremId::Log, TheoremId::Power}) {
        auto part = loadTheorem(id, dir);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

const ClassificationCase* findCase(const std::vector<ClassificationCase>& cs,
                                   const std::string& id) {
    for (const auto& c : cs)
        if (c.id == id) return &c;
    return nullptr;
}

CaseInstance materialize(const ClassificationCase& c) {
    CaseInstance m;
    m.ctx = std::make_unique<Context>(2);
    Context& ctx = *m.ctx;
    auto defs = macroTable(c);
    for (const auto& k : c.constants) ctx.declareSym(k.name, k.positive);
    for (const auto& f : c.functions) ctx.declareFunc(f.name, f.nargs, f.realValued);
    for (const auto& f : c.functions)
        if (f.ruleOrder > 0)
            ctx.setRule(f.name, f.ruleOrder,
                        parseSexpr(ctx, expandMacros(f.rule, defs), formal(1)));
    auto pe = [&](const std::string& s) {
        return parseSexpr(ctx, expandMacros(s, defs));
    };
    m.potential = pe(c.potential);
    Elements el;
    el.V = m.potential;
    el.delta = c.delta;
    el.lambda = c.lambda;
    if (c.theorem == TheoremId::Vf)
        el.f = powr(sym("rho"), Rat(2)) + powr(sym("rho"), Rat(3));
    m.eq = buildEquation(ctx, theoremClass(c.theorem), el, 2);
    std::vector<Ex> h0 = {num(0), num(0)};
    for (size_t a = 0; a < c.h0.size() && a < 2; ++a) h0[a] = pe(c.h0[a]);
    Ex d1 = num(c.delta.re), d2 = num(c.delta.im);
    for (const auto& gen : c.basis) {
        VectorField q = VectorField::zero(ctx);
        for (const auto& ts : gen) {
            auto arg = [&](size_t i, const char* dflt) {
                return pe(i < ts.args.size() ? ts.args[i] : std::string(dflt));
            };
            VectorField term = VectorField::zero(ctx);
            if (ts.kind == "M") term = fM(ctx, arg(0, "1"));
            else if (ts.kind == "I") term = fI(ctx, arg(0, "1"));
            else if (ts.kind == "Iprime")
                term = fIprime(ctx, d1, d2, c.delta.im.isZero());
            else if (ts.kind == "J") term = vfScale(ctx, fJ(ctx, 0, 1), arg(0, "1"));
            else if (ts.kind == "D") term = fD(ctx, arg(0, "1"));
            else if (ts.kind == "Dl") term = fDl(ctx, arg(0, "t"), c.lambda);
            else if (ts.kind == "P") term = fP(ctx, {arg(0, "0"), arg(1, "0")});
            else if (ts.kind == "Pprime")
                term = fPprime(ctx, {arg(0, "0"), arg(1, "0")}, h0, d1, d2);
            else throw kernel_error("case file: unknown generator term kind " + ts.kind);
            q = vfAdd(ctx, q, term);
        }
        m.basis.push_back(std::move(q));
    }
    return m;
}

void configureOracle(const ClassificationCase& c, const CaseInstance& m,
                     NumericInstance& inst) {
    auto defs = macroTable(c);
    for (const auto& k : c.constants) inst.setSym(k.name, k.sample);
    for (const auto& f : c.functions) {
        if (!f.init.empty()) inst.setInit(f.name, f.init);
        if (!f.sample.empty()) {
            Ex tmpl = parseSexpr(*m.ctx, expandMacros(f.sample, defs));
            auto derivs = std::make_shared<std::vector<Ex>>(std::vector<Ex>{tmpl});
            const Context* cx = m.ctx.get();
            const NumericInstance* self = &inst;
            inst.setClosedForm(
                f.name, [derivs, cx, self](const std::vector<int>& mid,
                                           const std::vector<Cplx>& args) {
                    int k = mid.empty() ? 0 : mid[0];
                    while ((int)derivs->size() <= k)
                        derivs->push_back(simplify(*cx, Dt(*cx, derivs->back())));
                    SamplePoint p;
                    p.t = args[0].real();
                    p.x.assign(cx->n, 0.0);
                    return self->eval((*derivs)[k], p);
                });
        }
    }
    for (double ts : c.avoid) inst.avoid(ts, 0.12);
    if (c.xfloor > 0) inst.xFloor(c.xfloor);
}

} // namespace liesym
