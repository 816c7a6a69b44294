// Copyright 2026 The PLC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `plc` command-line tool. Subcommands:
//
//   synth          write a synthetic test track
//   train          train forward (and optionally backward) models
//   simulate-loss  drop frames from a WAV with the two-state loss model
//   conceal        repair a lossy WAV given its mask
//   evaluate       sweep loss regimes and score each strategy

#ifndef PLC_TOOLS_CLI_H_
#define PLC_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace plc::cli {

// Parses `args` (without the program name) and runs the command. Returns the
// process exit code; errors are reported on `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace plc::cli

#endif  // PLC_TOOLS_CLI_H_
