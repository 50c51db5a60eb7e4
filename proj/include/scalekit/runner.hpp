#pragma once

#include "scalekit/config.hpp"
#include "scalekit/report.hpp"

namespace scalekit {

// Executes the configured task and writes its output file. Returns a process
// exit status: 0 on success; for verification tasks, 0 only when every row
// meets its budget.
int run_task(const RunConfig& cfg);

// Row sets behind the verification tasks, exposed for tests.
VerificationReport verify_identities(const RunConfig& cfg);
VerificationReport verify_duality(const RunConfig& cfg);
VerificationReport laplace_rows(const RunConfig& cfg);

}  // namespace scalekit
