// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "jetlin/parser.hpp"
#include "jetlin/synthesis.hpp"
#include "support.hpp"

using namespace jetlin;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<void(Check&)>& body)
{
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0) c.expect(secs < limit_s, "over the time limit");
    if (!c.ok) ++failures;
    std::printf("[%s] %2d %s (%.2f s%s%s)\n", c.ok ? "PASS" : "FAIL", id, name, secs,
                c.detail.empty() ? "" : "; ", c.detail.c_str());
    std::fflush(stdout);
}

int cli_code(const std::vector<std::string>& args)
{
    std::istringstream in;
    std::ostringstream out, err;
    return cli::run(args, in, out, err);
}

bool all_vanish(const InvariantReport& r)
{
    for (const RationalExpr& v : r.values)
        if (!v.is_zero()) return false;
    return r.verdict == Verdict::MaximallySymmetric;
}

// Consistency of the auxiliary triple induced by t on its source equation.
void expect_aux_consistent(Check& c, const Ode3& f, const PointTransform& t, const std::string& label)
{
    const AuxResiduals res = aux_residuals(f, aux_from_transform(t, f));
    c.expect(res.all_zero(), "aux residual nonzero for " + label);
    c.expect(res.a2_structure.is_zero(), "a2 + a3 f_qq q/6 depends on q for " + label);
}

std::vector<PointTransform> round_trip_family()
{
    std::mt19937 rng(606);
    std::vector<PointTransform> ts;
    for (int i = 0; i < 24; ++i) ts.push_back(testing::random_transform(rng));
    return ts;
}

}  // namespace

int main()
{
    const Ode3 f31{parse(testing::kExample31)};
    const Ode3 f32{parse(testing::kExample32)};
    const Ode3 f33{parse(testing::kExample33)};
    const PointTransform t31(kX, -1 / (kX * kU));
    const PointTransform t32(kX + kU, -kX);
    const std::vector<PointTransform> family = round_trip_family();

    criterion(1, "worked example A classification: I1..I4 = 0, MaximallySymmetric", 5, [&](Check& c) {
        c.expect(all_vanish(invariants(f31)), "an invariant does not vanish");
        // The equation is also the pullback of ubar''' = 0 by the reference map.
        c.expect(pullback(0, t31).f == f31.f, "pullback of the reference map differs");
    });

    criterion(2, "worked example B classification: I1..I4 = 0, MaximallySymmetric", 5,
              [&](Check& c) { c.expect(all_vanish(invariants(f32)), "an invariant does not vanish"); });

    criterion(3, "worked example C classification: I1 = 0, I2 = -9/p^2", 5, [&](Check& c) {
        const InvariantReport r = invariants(f33);
        // Hand derivation: f_qq = 3/p, f_pqq = -3/p^2, I2 = 9/p^2 - 18/p^2.
        const RationalExpr oracle = RationalExpr(9) / (kP * kP) + 6 * (RationalExpr(-3) / (kP * kP));
        c.expect(r.values[0].is_zero(), "I1 does not vanish");
        c.expect(r.values[1] == oracle, "I2 = " + r.values[1].to_string());
        c.expect(oracle == parse("-9/p^2"), "oracle arithmetic");
        c.expect(r.verdict == Verdict::NotMaximallySymmetric && r.witness == 2, "verdict or witness");
    });

    criterion(4, "worked example A synthesis matches a3, a2, a1, phi; reference psi verifies", 30, [&](Check& c) {
        const SynthesisResult r = synthesize(f31);
        c.expect(r.outcome == SynthesisResult::Outcome::Success, "synthesis did not succeed");
        if (!c.ok) return;
        c.expect(*r.a3 == 1 / (kX * kU * kU), "a3 = " + r.a3->to_string());
        c.expect(*r.a2 == -2 * kP / (kX * kU.pow(3)) - 1 / (kX * kX * kU * kU), "a2 = " + r.a2->to_string());
        c.expect(*r.a1 == 1 / (kX * kU * kU), "a1 = " + r.a1->to_string());
        c.expect(*r.phi == kX, "phi = " + r.phi->to_string());
        c.expect(verify(f31, *r.transform), "synthesized map does not verify");
        c.expect(cli_code({"verify", testing::kExample31, "--phi", "x", "--psi", "-1/(x*u)"}) == cli::kOk,
                 "verify command rejects psi = -1/(x*u)");
    });

    criterion(5, "worked example B synthesis matches a3, a2, a1, phi; reference psi verifies", 30, [&](Check& c) {
        const SynthesisResult r = synthesize(f32);
        c.expect(r.outcome == SynthesisResult::Outcome::Success, "synthesis did not succeed");
        if (!c.ok) return;
        c.expect(*r.a3 == 1 / (1 + kP).pow(2), "a3 = " + r.a3->to_string());
        c.expect(*r.a2 == -kQ / (1 + kP).pow(3), "a2 = " + r.a2->to_string());
        c.expect(*r.a1 == 1 / (1 + kP), "a1 = " + r.a1->to_string());
        c.expect(*r.phi == kX + kU, "phi = " + r.phi->to_string());
        c.expect(verify(f32, *r.transform), "synthesized map does not verify");
        c.expect(cli_code({"verify", testing::kExample32, "--phi", "x+u", "--psi", "-x"}) == cli::kOk,
                 "verify command rejects psi = -x");
    });

    criterion(6, "round trip on 24 generated maps: classify and verify pullback(0, T)", 120, [&](Check& c) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            const Ode3 f = pullback(0, family[i]);
            c.expect(classify(f) == Verdict::MaximallySymmetric, "map " + std::to_string(i) + " not maximal");
            c.expect(verify(f, family[i]), "map " + std::to_string(i) + " does not verify");
        }
    });

    criterion(7, "relative invariance on 12 generated maps: pullback((3/2)q^2/p, T)", 120, [&](Check& c) {
        std::mt19937 rng(707);
        for (int i = 0; i < 12; ++i) {
            const PointTransform t = testing::random_transform(rng);
            c.expect(classify(pullback(f33.f, t)) == Verdict::NotMaximallySymmetric,
                     "map " + std::to_string(i) + " made the invariants vanish");
        }
    });

    criterion(8, "auxiliary system residuals vanish for the pairs of 4-6", 0, [&](Check& c) {
        expect_aux_consistent(c, f31, t31, "worked example A");
        expect_aux_consistent(c, f32, t32, "worked example B");
        for (const Ode3* f : {&f31, &f32}) {
            const SynthesisResult r = synthesize(*f);
            if (r.outcome != SynthesisResult::Outcome::Success) {
                c.expect(false, "synthesis failed");
                continue;
            }
            expect_aux_consistent(c, *f, *r.transform, "synthesized map");
            c.expect(aux_residuals(*f, {*r.a1, *r.a2, *r.a3}).all_zero(), "synthesized triple");
        }
        for (std::size_t i = 0; i < family.size(); ++i)
            expect_aux_consistent(c, pullback(0, family[i]), family[i], "generated map " + std::to_string(i));
    });

    criterion(9, "I3 via s1, s2, s3 equals the direct form on 50 random f", 0, [&](Check& c) {
        std::mt19937 rng(909);
        for (int i = 0; i < 50; ++i) {
            const Ode3 f{testing::random_expr(rng, 3, 2)};
            const InvariantForms forms = invariant_forms(f);
            c.expect(forms.direct[2] == forms.via_s[2], "disagreement for f = " + f.f.to_string());
        }
    });

    criterion(10, "completion: synthesize(x) verifies with psi = u - x^4/24", 10, [&](Check& c) {
        const Ode3 fx{kX};
        const SynthesisResult r = synthesize(fx);
        c.expect(r.outcome == SynthesisResult::Outcome::Success, "synthesis did not succeed");
        if (!c.ok) return;
        c.expect(verify(fx, *r.transform), "does not verify");
        c.expect(r.transform->psi() == kU - kX.pow(4) / 24, "psi = " + r.transform->psi().to_string());
        bool completed = false;
        for (const TraceStep& s : r.trace.steps) completed = completed || s.stage == Stage::Completion;
        c.expect(completed, "no completion step in the trace");
    });

    criterion(11, "kernel properties over 600 random cases", 60, [&](Check& c) {
        std::mt19937 rng(1111);
        int cases = 0;
        for (int i = 0; i < 150; ++i) {
            const RationalExpr a = testing::random_expr(rng), b = testing::random_expr(rng),
                               g = testing::random_expr(rng);
            // Canonical form: equal values built two ways are structurally
            // equal, and agree with evaluation at random points.
            const RationalExpr lhs = (a + b) * (a - b) / g, rhs = a * a / g - b * b / g;
            c.expect(lhs == rhs && testing::agree_at_points(lhs, rhs, rng, 3), "canonical form");
            c.expect(a + 1 != a, "distinct values compare equal");
            ++cases;
            for (JetVar v : kAllVars)
                c.expect(partial(a * b, v) == partial(a, v) * b + a * partial(b, v), "Leibniz rule");
            ++cases;
            for (JetVar v : kAllVars)
                for (JetVar w : kAllVars)
                    c.expect(partial(partial(g, v), w) == partial(partial(g, w), v), "mixed partials");
            ++cases;
            c.expect(parse(a.to_string()) == a && parse(lhs.to_string()) == lhs, "parser round trip");
            ++cases;
        }
        c.expect(cases >= 500, "too few cases");
    });

    std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
