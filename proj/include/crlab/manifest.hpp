#pragma once

#include <json.hpp>

#include <complex>
#include <string>

#include "crlab/rational.hpp"
#include "crlab/rng.hpp"

namespace crlab {

// Reports and manifests keep insertion order so that a fixed manifest and
// seed always serialize to identical bytes.
using Json = nlohmann::ordered_json;

// Structural problems with a manifest: malformed JSON, missing or ill-typed
// fields, unknown operations, names that do not resolve, strings that fail to
// parse. Distinct from input_error so the driver can map it to its own exit
// code; task-level precondition failures stay input_error and mark the task
// failed without stopping the run.
struct schema_error : input_error {
    using input_error::input_error;
};

// Shortest decimal that parses back to exactly the same double. Floating
// values appear in reports as strings in this form, so serialization is
// platform-independent byte for byte.
std::string format_double(double x);

Json complex_json(const GaussianRational& z);       // {"re": "a/b", "im": "a/b"}
Json float_complex_json(std::complex<double> z);    // {"re": "...", "im": "..."}

// One batch of randomized exact determinant-identity checks in a fixed
// dimension: the two-by-two identity on bordered minors, the condensation
// step (forcing the zero-corner branch on every third trial), the bordered
// three-by-three displays, and the linear-dependence certificate.
struct IdentityTrialSummary {
    int dim = 0;
    int trials = 0;
    long bordered_failures = 0;
    long condensation_failures = 0;
    long display_failures = 0;
    long dependence_failures = 0;

    bool all_equal() const {
        return bordered_failures == 0 && condensation_failures == 0 && display_failures == 0 &&
               dependence_failures == 0;
    }
};

IdentityTrialSummary run_identity_trials(int dim, int trials, Rng& rng);

struct ManifestRun {
    Json report;
    // 0: all tasks succeeded; 1: at least one task failed its preconditions.
    int exit_code = 0;
};

// Executes a parsed manifest: builds the declared manifolds, map, and points,
// then runs the task list in order. Throws schema_error on invalid structure
// and internal_error on invariant violations; per-task input_error marks the
// task failed and the run continues.
ManifestRun run_manifest(const Json& manifest);

// Same, starting from raw text; JSON syntax errors become schema_error with
// line and column information.
ManifestRun run_manifest_text(const std::string& text);

}  // namespace crlab
