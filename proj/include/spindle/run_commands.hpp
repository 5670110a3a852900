/* Copyright 2026 The Spindle Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <map>
#include <string>
#include <vector>

#include "spindle/trace_io.hpp"

namespace spindle::cli {

// Configuration of one example run. Numeric parameters not set here fall
// back to per-command defaults; the resolved values are always embedded in
// the output metadata.
struct RunConfig {
  std::string command;
  std::string out_path = "-";
  std::string format = "csv";
  double dt = 0.0;        // 0: command default
  long steps = 0;         // 0: command default
  unsigned long seed = 0; // recorded in metadata; current commands are deterministic
  std::map<std::string, double> params;
};

// Spin-echo double-resonance time trace (reduced units, dimensionless r).
std::vector<Table> run_deer(const RunConfig& cfg);
// Room-temperature NV photoluminescence transients for m_S = 0 and +-1.
std::vector<Table> run_nv_pl(const RunConfig& cfg);
// Weak-measurement tracking of a 13C precession: signal trace + spectrum.
std::vector<Table> run_nv_weak(const RunConfig& cfg);
// cw-EPR field sweeps of radical-pair initial states (alpha = 0, 20, 90 deg).
std::vector<Table> run_scrp_cwepr(const RunConfig& cfg);
// Radical-pair fluorescence transients on and off the 2J resonance.
std::vector<Table> run_scrp_mary(const RunConfig& cfg);
// Static powder average of a dipolar-coupled pair: Pake spectrum.
std::vector<Table> run_pake(const RunConfig& cfg);
// Magic-angle spinning of the same pair: motionally narrowed spectrum.
std::vector<Table> run_mas(const RunConfig& cfg);

// Dispatch by cfg.command ("deer", "nv-pl", "nv-weak", "scrp-cwepr",
// "scrp-mary", "pake", "mas").
std::vector<Table> run_command(const RunConfig& cfg);

}  // namespace spindle::cli
