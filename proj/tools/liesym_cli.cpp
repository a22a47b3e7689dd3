// Command-line driver: load the case corpus, run verification suites, emit
// human or machine reports, and print per-case dossiers.
//
// Exit codes: 0 all selected checks pass, 1 verification failure, 2 usage
// error, 3 I/O or case-file error.
#include "liesym/tables.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace liesym;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1, kExitUsage = 2, kExitIo = 3;

bool isSymbolicCheck(const std::string& name) {
    return name == "membership" || name == "basis-size" ||
           name == "classifying-symbolic" || name == "materialize";
}

// drop the checks outside the selector and recompute the verdict
CaseReport filterChecks(CaseReport rep, const std::string& checks) {
    if (checks == "both") return rep;
    std::vector<CheckResult> kept;
    rep.pass = true;
    for (auto& ch : rep.checks) {
        bool sym = isSymbolicCheck(ch.name);
        if ((checks == "symbolic") == sym) {
            rep.pass = rep.pass && ch.pass;
            kept.push_back(std::move(ch));
        }
    }
    rep.checks = std::move(kept);
    return rep;
}

std::string sigStr(const std::array<int, 5>& s) {
    std::ostringstream os;
    os << "(" << s[0];
    for (int i = 1; i < 5; ++i) os << ", " << s[i];
    os << ")";
    return os.str();
}

void renderHuman(std::ostream& os, const std::vector<CaseReport>& reps,
                 unsigned seed) {
    int failures = 0;
    for (const auto& r : reps) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << theoremName(r.theorem) << "/"
           << r.id << "  dim " << r.dim << "  signature " << sigStr(r.signature);
        std::ostringstream w;
        w << r.worstResidual;
        os << "  worst residual " << w.str() << "\n";
        if (!r.pass) {
            ++failures;
            for (const auto& ch : r.checks)
                if (!ch.pass)
                    os << "      " << ch.name << ": "
                       << (ch.detail.empty() ? "failed" : ch.detail) << "\n";
        }
    }
    os << "summary: " << reps.size() << " case(s), " << failures
       << " failure(s), seed " << seed << "\n";
}

json renderMachine(const std::vector<CaseReport>& reps, const std::string& theorem,
                   const std::string& cases, const std::string& checks,
                   unsigned seed) {
    json out;
    out["schema"] = "liesym-report/1";
    out["command"] = "run";
    out["theorem"] = theorem;
    out["cases"] = cases;
    out["checks"] = checks;
    out["seed"] = seed;
    int failures = 0;
    json results = json::array();
    for (const auto& r : reps) {
        json jr;
        jr["theorem"] = theoremName(r.theorem);
        jr["id"] = r.id;
        jr["pass"] = r.pass;
        jr["dim"] = r.dim;
        jr["signature"] = r.signature;
        {
            std::ostringstream w;
            w << r.worstResidual;
            jr["worst_residual"] = w.str();
        }
        json checksJ = json::array();
        for (const auto& ch : r.checks)
            checksJ.push_back({{"name", ch.name}, {"pass", ch.pass},
                               {"detail", ch.detail}});
        jr["checks"] = std::move(checksJ);
        results.push_back(std::move(jr));
        if (!r.pass) ++failures;
    }
    out["results"] = std::move(results);
    out["summary"] = {{"cases", reps.size()}, {"failures", failures}};
    return out;
}

int writeReport(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file " << out << "\n";
        return kExitIo;
    }
    f << text;
    if (!f) {
        std::cerr << "error: cannot write output file " << out << "\n";
        return kExitIo;
    }
    return 0;
}

std::optional<TheoremId> theoremOf(const std::string& name) {
    if (name == "vf") return TheoremId::Vf;
    if (name == "log") return TheoremId::Log;
    if (name == "power") return TheoremId::Power;
    return std::nullopt;
}

std::string prettyField(const VectorField& q) {
    std::ostringstream os;
    os << "tau = " << pretty(q.tau) << ", kappa12 = " << pretty(q.kappa[0][1])
       << ", chi = (" << pretty(q.chi[0]) << ", " << pretty(q.chi[1])
       << "), sigma = " << pretty(q.sigma) << ", zeta = " << pretty(q.zeta);
    return os.str();
}

int cmdRun(const std::string& theorem, const std::string& cases,
           const std::string& checks, unsigned seed, const std::string& out,
           const std::string& format) {
    std::vector<ClassificationCase> corpus;
    try {
        if (theorem == "all") corpus = loadAll();
        else corpus = loadTheorem(*theoremOf(theorem));
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitIo;
    }
    std::vector<const ClassificationCase*> selected;
    if (cases == "all") {
        for (const auto& c : corpus) selected.push_back(&c);
    } else {
        std::stringstream ss(cases);
        std::string id;
        while (std::getline(ss, id, ',')) {
            if (id.empty()) continue;
            bool found = false;
            for (const auto& c : corpus)
                if (c.id == id) {
                    selected.push_back(&c);
                    found = true;
                }
            if (!found) {
                std::cerr << "usage error: unknown case id '" << id
                          << "' for theorem selector '" << theorem << "'\n";
                return kExitUsage;
            }
        }
        if (selected.empty()) {
            std::cerr << "usage error: empty case selector\n";
            return kExitUsage;
        }
    }
    std::vector<CaseReport> reps;
    bool allPass = true;
    for (const auto* c : selected) {
        reps.push_back(filterChecks(verifyCase(*c, seed), checks));
        allPass = allPass && reps.back().pass;
    }
    std::string text;
    if (format == "machine") {
        text = renderMachine(reps, theorem, cases, checks, seed).dump(2) + "\n";
    } else {
        std::ostringstream os;
        renderHuman(os, reps, seed);
        text = os.str();
    }
    if (int rc = writeReport(out, text)) return rc;
    return allPass ? 0 : kExitFail;
}

int cmdExplain(const std::string& theorem, const std::string& id) {
    std::vector<ClassificationCase> corpus;
    try {
        corpus = loadTheorem(*theoremOf(theorem));
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitIo;
    }
    const ClassificationCase* c = findCase(corpus, id);
    if (!c) {
        std::cerr << "usage error: unknown case " << theorem << "/" << id << "\n";
        return kExitUsage;
    }
    std::ostream& os = std::cout;
    os << "case " << theorem << "/" << c->id;
    if (!c->title.empty()) os << ": " << c->title;
    os << "\n";
    if (c->theorem == TheoremId::Power)
        os << "  lambda = " << c->lambda.n << "/" << c->lambda.d << "\n";
    if (c->theorem != TheoremId::Vf)
        os << "  delta = (" << c->delta.re.n << "/" << c->delta.re.d << ", "
           << c->delta.im.n << "/" << c->delta.im.d << ")\n";
    os << "  signature " << sigStr(c->signature) << ", dim " << c->dim << "\n";
    try {
        CaseInstance m = materialize(*c);
        os << "  potential: " << pretty(m.potential) << "\n";
        os << "  basis:\n";
        for (size_t g = 0; g < m.basis.size(); ++g) {
            os << "    Q" << g + 1 << ": " << prettyField(m.basis[g]) << "\n";
            Ex raw = rawClassifyingResidual(*m.ctx, m.basis[g], m.eq);
            try {
                auto rows = splitX(*m.ctx, raw);
                if (rows.empty()) {
                    os << "        classifying residual splits to the empty "
                          "monomial system (identically zero)\n";
                } else {
                    for (const auto& r : rows)
                        os << "        x-monomial coefficient: Re "
                           << pretty(r.re) << ", Im " << pretty(r.im) << "\n";
                }
            } catch (const std::exception&) {
                if (isZero(*m.ctx, raw))
                    os << "        classifying residual (non-polynomial in x): "
                          "identically zero after clearing denominators\n";
                else
                    os << "        classifying residual (non-polynomial in x), "
                          "canonical form: "
                       << pretty(simplify(*m.ctx, raw)) << "\n";
            }
        }
    } catch (const std::exception& ex) {
        os << "  materialization failed: " << ex.what() << "\n";
        return kExitFail;
    }
    for (const auto& k : c->constraints) os << "  constraint: " << k << "\n";
    if (!c->maximality.empty()) os << "  maximality: " << c->maximality << "\n";
    for (const auto& [other, note] : c->subsumes)
        os << "  maps onto case " << other << ": " << note << "\n";
    for (const auto& c2 : corpus) {
        auto it = c2.subsumes.find(c->id);
        if (it != c2.subsumes.end())
            os << "  mapped from case " << c2.id << ": " << it->second << "\n";
    }
    // branch variants share the id plus a one-letter suffix (e.g. 4 / 4z)
    for (const auto& c2 : corpus)
        if (c2.id.size() == c->id.size() + 1 && c2.id.rfind(c->id, 0) == 0 &&
            !std::isdigit((unsigned char)c2.id.back()))
            os << "  branch variant: case " << c2.id
               << (c2.title.empty() ? "" : " (" + c2.title + ")") << "\n";
    for (const auto& n : c->notes) os << "  note: " << n << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetry classification tables: verification driver"};
    app.require_subcommand(1);

    std::string theorem = "all", cases = "all", checks = "both";
    std::string out, format = "human";
    unsigned seed = 1;
    auto* run = app.add_subcommand("run", "verify selected classification cases");
    run->add_option("--theorem", theorem, "vf | log | power | all")
        ->check(CLI::IsMember({"vf", "log", "power", "all"}));
    run->add_option("--cases", cases, "comma-separated case ids, or 'all'");
    run->add_option("--checks", checks, "symbolic | numeric | both")
        ->check(CLI::IsMember({"symbolic", "numeric", "both"}));
    run->add_option("--seed", seed, "oracle sampling seed");
    run->add_option("--out", out, "report file (default: stdout)");
    run->add_option("--format", format, "human | machine")
        ->check(CLI::IsMember({"human", "machine"}));

    std::string exTheorem, exCase;
    auto* ex = app.add_subcommand("explain", "print a case dossier");
    ex->add_option("theorem", exTheorem, "vf | log | power")
        ->required()
        ->check(CLI::IsMember({"vf", "log", "power"}));
    ex->add_option("case", exCase, "case id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (run->parsed()) return cmdRun(theorem, cases, checks, seed, out, format);
    return cmdExplain(exTheorem, exCase);
}
