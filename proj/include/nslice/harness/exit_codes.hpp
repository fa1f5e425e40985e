// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace nslice::harness {

/// Process exit codes of the nslice CLI.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kIo = 4,
  kCheckpoint = 5,
  kDiverged = 6,
  kDimensionMismatch = 7,
  kScenarioMismatch = 8,
  kParse = 9,
};

}  // namespace nslice::harness
