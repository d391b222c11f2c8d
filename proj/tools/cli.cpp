#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "jetlin/errors.hpp"
#include "jetlin/parser.hpp"
#include "jetlin/synthesis.hpp"

namespace jetlin::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Outcome {
    Json report;
    std::string text;   // human-readable form
    std::string error;  // one line for standard error, empty if none
    int code = kOk;
};

struct Settings {
    bool json = false;
    bool quiet = false;
    unsigned jobs = 1;
    std::string expr;
    std::string phi, psi, target = "0";
    std::vector<std::string> hints;
    SynthesisOptions options;
};

Outcome error_outcome(const std::string& command, const std::string& kind, const std::string& message,
                      const std::string& input, std::optional<std::size_t> column = std::nullopt)
{
    Outcome o;
    o.code = kUsage;
    o.report["command"] = command;
    o.report["input"] = input;
    o.report["status"] = "error";
    Json e;
    e["kind"] = kind;
    e["message"] = message;
    if (column) e["column"] = *column + 1;
    o.report["error"] = e;
    o.error = "error: " + kind + ": " + message;
    o.text = o.error + "\n";
    return o;
}

// Parses or throws a ParseError whose message names the argument.
RationalExpr parse_named(const std::string& what, const std::string& text)
{
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw ParseError("in " + what + ": " + std::string(e.what()).substr(0, std::string(e.what()).rfind(" at column")),
                         e.position());
    }
}

Json invariants_json(const InvariantReport& r)
{
    Json inv;
    for (std::size_t k = 0; k < 4; ++k) inv["I" + std::to_string(k + 1)] = r.values[k].to_string();
    return inv;
}

void add_classification(Outcome& o, const Ode3& ode, const InvariantReport& r)
{
    o.report["input"] = ode.f.to_string();
    o.report["invariants"] = invariants_json(r);
    o.report["verdict"] = to_string(r.verdict);
    o.report["witness"] = r.witness ? Json("I" + std::to_string(*r.witness)) : Json(nullptr);
    std::ostringstream text;
    text << "f = " << ode.f << "\n";
    for (std::size_t k = 0; k < 4; ++k) text << "I" << k + 1 << " = " << r.values[k] << "\n";
    text << "verdict: " << to_string(r.verdict);
    if (r.witness) text << " (I" << *r.witness << " does not vanish)";
    text << "\n";
    o.text = text.str();
}

Outcome classify_one(const std::string& expr)
{
    Outcome o;
    o.report["command"] = "classify";
    try {
        const Ode3 ode{parse(expr)};
        const InvariantReport r = invariants(ode);
        add_classification(o, ode, r);
        o.report["status"] = "ok";
        o.code = r.verdict == Verdict::MaximallySymmetric ? kOk : kNegative;
    } catch (const ParseError& e) {
        return error_outcome("classify", "parse", e.what(), expr, e.position());
    }
    return o;
}

Json transformation_json(const RationalExpr& phi, const RationalExpr& psi)
{
    Json t;
    t["phi"] = phi.to_string();
    t["psi"] = psi.to_string();
    return t;
}

Outcome synthesize_one(const std::string& expr, const SynthesisOptions& options)
{
    Outcome o;
    o.report["command"] = "synthesize";
    Ode3 ode;
    try {
        ode = Ode3{parse(expr)};
    } catch (const ParseError& e) {
        return error_outcome("synthesize", "parse", e.what(), expr, e.position());
    }
    const SynthesisResult r = synthesize(ode, options);
    add_classification(o, ode, r.invariants);
    std::ostringstream text;
    text << o.text;

    switch (r.outcome) {
    case SynthesisResult::Outcome::Success: o.report["status"] = "ok"; o.code = kOk; break;
    case SynthesisResult::Outcome::Partial: o.report["status"] = "partial"; o.code = kPartial; break;
    case SynthesisResult::Outcome::NotApplicable: o.report["status"] = "not-applicable"; o.code = kNegative; break;
    }
    text << "status: " << o.report["status"].get<std::string>() << "\n";
    if (r.outcome == SynthesisResult::Outcome::NotApplicable) {
        o.text = text.str();
        return o;
    }

    if (r.phi && r.psi) {
        o.report["transformation"] = transformation_json(*r.phi, *r.psi);
        text << "xbar = " << *r.phi << "\nubar = " << *r.psi << "\n";
    }
    Json aux;
    if (r.a1) aux["a1"] = r.a1->to_string();
    if (r.a2) aux["a2"] = r.a2->to_string();
    if (r.a3) aux["a3"] = r.a3->to_string();
    o.report["auxiliaries"] = aux.empty() ? Json::object() : aux;
    for (const char* name : {"a1", "a2", "a3"})
        if (aux.contains(name)) text << name << " = " << aux[name].get<std::string>() << "\n";

    Json trace = Json::array();
    text << "trace:\n";
    for (const TraceStep& s : r.trace.steps) {
        Json step;
        step["stage"] = to_string(s.stage);
        step["equation"] = s.equation;
        step["ansatz"] = s.ansatz;
        step["result"] = s.result;
        step["residual-check"] = s.residual_zero ? "zero" : "failed";
        trace.push_back(step);
        text << "  [" << to_string(s.stage) << "] " << s.equation << "\n      ansatz: " << s.ansatz
             << "\n      result: " << s.result << "\n";
    }
    o.report["trace"] = trace;

    if (r.outcome == SynthesisResult::Outcome::Partial) {
        o.report["blocking_stage"] = to_string(*r.blocking_stage);
        o.report["failure"] = to_string(*r.failure);
        o.report["message"] = r.message;
        text << "blocked at " << to_string(*r.blocking_stage) << ": " << to_string(*r.failure) << ": " << r.message << "\n";
    }
    o.text = text.str();
    return o;
}

Outcome verify_one(const std::string& expr, const std::string& phi_text, const std::string& psi_text)
{
    Outcome o;
    o.report["command"] = "verify";
    try {
        const Ode3 ode{parse_named("f", expr)};
        const RationalExpr phi = parse_named("--phi", phi_text), psi = parse_named("--psi", psi_text);
        const PointTransform t(phi, psi);
        const RationalExpr residual = linearization_residual(ode, t);
        o.report["input"] = ode.f.to_string();
        o.report["transformation"] = transformation_json(phi, psi);
        o.report["status"] = "ok";
        o.report["verified"] = residual.is_zero();
        o.report["residual"] = residual.to_string();
        o.code = residual.is_zero() ? kOk : kNegative;
        o.text = "f = " + ode.f.to_string() + "\nxbar = " + phi.to_string() + "\nubar = " + psi.to_string() +
                 "\nverified: " + (residual.is_zero() ? "true" : "false (residual " + residual.to_string() + ")") + "\n";
    } catch (const ParseError& e) {
        return error_outcome("verify", "parse", e.what(), expr, e.position());
    } catch (const DegenerateTransform& e) {
        return error_outcome("verify", "degenerate-transformation", e.what(), expr);
    }
    return o;
}

Outcome pullback_one(const std::string& phi_text, const std::string& psi_text, const std::string& target_text)
{
    Outcome o;
    o.report["command"] = "pullback";
    try {
        const RationalExpr phi = parse_named("--phi", phi_text), psi = parse_named("--psi", psi_text);
        const RationalExpr target = parse_named("--target", target_text);
        const Ode3 f = pullback(target, PointTransform(phi, psi));
        o.report["transformation"] = transformation_json(phi, psi);
        o.report["target"] = target.to_string();
        o.report["f"] = f.f.to_string();
        o.report["status"] = "ok";
        o.text = f.f.to_string() + "\n";
    } catch (const ParseError& e) {
        return error_outcome("pullback", "parse", e.what(), target_text, e.position());
    } catch (const DegenerateTransform& e) {
        return error_outcome("pullback", "degenerate-transformation", e.what(), target_text);
    } catch (const DivisionByZero& e) {
        return error_outcome("pullback", "division-by-zero", e.what(), target_text);
    }
    return o;
}

void emit(const Outcome& o, const Settings& s, bool batch, std::ostream& out, std::ostream& err)
{
    if (!o.error.empty()) err << o.error << "\n";
    if (s.quiet) return;
    if (batch)
        out << o.report.dump() << "\n";
    else if (s.json)
        out << o.report.dump(2) << "\n";
    else if (o.error.empty())
        out << o.text;
}

template <class Fn>
int run_batch(Fn fn, const Settings& s, std::istream& in, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(line);
    }
    std::vector<Outcome> results(lines.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < lines.size();) results[i] = fn(lines[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1U, s.jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kOk;
    for (const Outcome& o : results) {
        emit(o, s, true, out, err);
        code = std::max(code, o.code);
    }
    return code;
}

bool batch_input(const std::string& expr)
{
    return expr.empty() || expr == "-";
}

int apply_hints(Settings& s, std::ostream& err)
{
    for (const std::string& h : s.hints) {
        const auto eq = h.find('=');
        const std::string stage = h.substr(0, eq);
        if (eq == std::string::npos) {
            err << "error: usage: --hint expects stage=expression, got '" << h << "'\n";
            return kUsage;
        }
        std::optional<RationalExpr>* slot = nullptr;
        if (stage == "a3") slot = &s.options.hints.a3;
        else if (stage == "a2") slot = &s.options.hints.a2;
        else if (stage == "F2" || stage == "f2") slot = &s.options.hints.f2;
        else if (stage == "phi") slot = &s.options.hints.phi;
        else if (stage == "psi") slot = &s.options.hints.psi;
        if (!slot) {
            err << "error: usage: unknown hint stage '" << stage << "' (expected a3, a2, F2, phi or psi)\n";
            return kUsage;
        }
        try {
            *slot = parse(h.substr(eq + 1));
        } catch (const ParseError& e) {
            err << "error: parse: in hint " << stage << ": " << e.what() << "\n";
            return kUsage;
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    Settings s;
    CLI::App app{"Point-equivalence test and linearizing transformations for u''' = f(x, u, u', u'')", "jetlin"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", s.json, "Print a JSON report");
    app.add_flag("--quiet", s.quiet, "Print nothing; report through the exit code only");
    const std::string expr_help = "Right-hand side f in x, u, u', u'' (p and q also accepted); '-' or omitted reads lines from standard input";

    CLI::App* classify = app.add_subcommand("classify", "Evaluate the invariants I1-I4 and decide maximal symmetry");
    classify->add_option("expr", s.expr, expr_help);
    classify->add_option("--jobs", s.jobs, "Worker threads in batch mode")->check(CLI::Range(1, 256));

    CLI::App* synth = app.add_subcommand("synthesize", "Construct a point transformation to ubar''' = 0");
    synth->add_option("expr", s.expr, expr_help);
    synth->add_option("--max-degree", s.options.max_degree, "Degree bound for psi candidates and completion")
        ->capture_default_str();
    synth->add_option("--riccati-degree", s.options.riccati_degree, "Degree bound for Riccati candidates")
        ->capture_default_str();
    synth->add_option("--hint", s.hints, "Replace a stage by a validated value: a3=, a2=, F2=, phi= or psi=");
    synth->add_option("--jobs", s.jobs, "Worker threads in batch mode")->check(CLI::Range(1, 256));

    CLI::App* ver = app.add_subcommand("verify", "Check that (phi, psi) maps u''' = f onto ubar''' = 0");
    ver->add_option("expr", s.expr, expr_help);
    ver->add_option("--phi", s.phi, "New independent variable phi(x, u)")->required();
    ver->add_option("--psi", s.psi, "New dependent variable psi(x, u)")->required();
    ver->add_option("--jobs", s.jobs, "Worker threads in batch mode")->check(CLI::Range(1, 256));

    CLI::App* pull = app.add_subcommand("pullback", "Equation mapped onto ubar''' = target by (phi, psi)");
    pull->add_option("--phi", s.phi, "New independent variable phi(x, u)")->required();
    pull->add_option("--psi", s.psi, "New dependent variable psi(x, u)")->required();
    pull->add_option("--target", s.target, "Target right-hand side in the barred variables")->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (classify->parsed()) {
        if (batch_input(s.expr)) return run_batch(classify_one, s, in, out, err);
        const Outcome o = classify_one(s.expr);
        emit(o, s, false, out, err);
        return o.code;
    }
    if (synth->parsed()) {
        if (const int code = apply_hints(s, err); code != kOk) return code;
        auto fn = [&](const std::string& e) { return synthesize_one(e, s.options); };
        if (batch_input(s.expr)) return run_batch(fn, s, in, out, err);
        const Outcome o = fn(s.expr);
        emit(o, s, false, out, err);
        return o.code;
    }
    if (ver->parsed()) {
        auto fn = [&](const std::string& e) { return verify_one(e, s.phi, s.psi); };
        if (batch_input(s.expr)) return run_batch(fn, s, in, out, err);
        const Outcome o = fn(s.expr);
        emit(o, s, false, out, err);
        return o.code;
    }
    const Outcome o = pullback_one(s.phi, s.psi, s.target);
    emit(o, s, false, out, err);
    return o.code;
}

}  // namespace jetlin::cli
