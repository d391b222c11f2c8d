#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetlin/jet.hpp"
#include "jetlin/point_transform.hpp"

namespace jetlin {

enum class Stage { A3, A2, A1, Phi, Psi, Completion, Verified };

/// "A3", "A2", "A1", "PHI", "PSI", "COMPLETION", "VERIFIED".
const char* to_string(Stage s) noexcept;

enum class FailureKind {
    AnsatzExhausted,
    RiccatiUnsolved,
    CompatibilityViolated,
    NotExact,
    NonrationalAntiderivative,
    CompletionFailed,
    HintRejected,
};

const char* to_string(FailureKind k) noexcept;

/// A stage that could not produce its unknown inside the ansatz.
class StageFailure : public std::runtime_error {
public:
    StageFailure(Stage stage, FailureKind kind, const std::string& what)
        : std::runtime_error(what), stage_(stage), kind_(kind)
    {
    }
    Stage stage() const noexcept { return stage_; }
    FailureKind kind() const noexcept { return kind_; }

private:
    Stage stage_;
    FailureKind kind_;
};

struct TraceStep {
    Stage stage;
    std::string equation;
    std::string ansatz;
    std::string result;
    bool residual_zero = true;  // false only on the record of a failed stage
};

struct SynthesisTrace {
    std::vector<TraceStep> steps;
};

struct Hints {
    std::optional<RationalExpr> a3, a2, phi, psi;
    /// Solution of the reduced Riccati equation, written with x standing for
    /// the reduced variable.
    std::optional<RationalExpr> f2;
};

struct SynthesisOptions {
    unsigned max_degree = 6;      // psi undetermined coefficients and completion basis
    unsigned riccati_degree = 4;  // numerator and denominator bound of Riccati candidates
    Hints hints;
};

/// D_x a3 = -(1/3) f_q a3, normalized to leading coefficient 1.
RationalExpr solve_a3(const Ode3& ode, SynthesisTrace* trace = nullptr);

/// D_x a2 = a2^2 / (2 a3) - (1/18) a3 s2 with a2 = -(1/6) a3 f_qq q + A(x, u, p).
RationalExpr solve_a2(const Ode3& ode, const RationalExpr& a3, const SynthesisOptions& options = {},
                      SynthesisTrace* trace = nullptr);

/// D_x a1 = (a2 / a3) a1 plus both compatibility identities.
RationalExpr solve_a1(const Ode3& ode, const RationalExpr& a2, const RationalExpr& a3, SynthesisTrace* trace = nullptr);

/// D_x phi = a1 / a3.
RationalExpr solve_phi(const RationalExpr& a1, const RationalExpr& a3, SynthesisTrace* trace = nullptr);

/// phi_x psi_u - phi_u psi_x = a1^2 / a3, followed by the completion that
/// adds g(x) (or g(phi)) to psi until the transformation verifies.
RationalExpr solve_psi(const Ode3& ode, const RationalExpr& phi, const RationalExpr& a1, const RationalExpr& a3,
                       const SynthesisOptions& options = {}, SynthesisTrace* trace = nullptr);

struct SynthesisResult {
    enum class Outcome { Success, Partial, NotApplicable };

    Outcome outcome = Outcome::NotApplicable;
    InvariantReport invariants;
    // Filled as far as the pipeline got; all set on Success.
    std::optional<RationalExpr> a1, a2, a3, phi, psi;
    std::optional<PointTransform> transform;  // Success only
    SynthesisTrace trace;
    // Partial only.
    std::optional<Stage> blocking_stage;
    std::optional<FailureKind> failure;
    std::string message;
};

const char* to_string(SynthesisResult::Outcome o) noexcept;

/// Runs the stages in order. Success is returned only after exact
/// verification; NotApplicable iff the ODE is not maximally symmetric.
SynthesisResult synthesize(const Ode3& ode, const SynthesisOptions& options = {});

}  // namespace jetlin
