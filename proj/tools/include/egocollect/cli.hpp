// Copyright 2026 The egocollect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace egocollect::cli {

enum ExitStatus : int {
  kOk = 0,
  kInputError = 1,
  kRuntimeFailure = 2,
  kAssertionFailed = 3,
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

/// One "--assert" expression: <field><op><number>, op in <= >= < > == !=.
struct Assertion {
  std::string field;
  std::string op;
  double value = 0.0;

  /// Throws Error(kInvalidArgument) on malformed text.
  static Assertion parse(const std::string& text);
  bool holds(double actual) const;
};

}  // namespace egocollect::cli
