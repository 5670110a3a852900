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
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "spindle/run_commands.hpp"

namespace {

// Exit codes: 0 success, 2 bad arguments, 3 physics-domain error, 4 I/O.
constexpr int kExitBadArgs = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct CommandSpec {
  const char* name;
  const char* description;
  // flag name (without --), parameter key, help
  std::vector<std::array<const char*, 3>> params;
};

const std::vector<CommandSpec> kCommands = {
    {"deer",
     "Double electron-electron resonance echo trace (reduced units)",
     {{"r", "r", "inter-spin distance (reduced units)"},
      {"theta-deg", "theta-deg", "inter-spin vector polar angle in degrees"},
      {"gamma1", "gamma1", "observer gyromagnetic ratio (reduced)"},
      {"gamma2", "gamma2", "pump gyromagnetic ratio (reduced)"}}},
    {"nv-pl",
     "NV photoluminescence transients for m_S = 0 and m_S = +-1",
     {{"temperature", "temperature", "temperature in kelvin (>= 100)"},
      {"beta", "beta", "laser power as a fraction of saturation"}}},
    {"nv-weak",
     "Weak-measurement tracking of a 13C spin: trace and spectrum",
     {{"b0", "b0", "static field in tesla"},
      {"apara", "apara", "secular hyperfine coupling in rad/s"},
      {"aperp", "aperp", "pseudo-secular hyperfine coupling in rad/s"},
      {"blocks", "blocks", "number of measurement blocks"},
      {"pulses", "pulses", "XY8 pulses per block (multiple of 8)"}}},
    {"scrp-cwepr",
     "cw-EPR field sweeps of radical-pair states (alpha = 0, 20, 90 deg)",
     {{"theta-deg", "theta-deg", "pair orientation vs field in degrees"},
      {"broadening", "broadening", "line broadening in tesla"},
      {"f-mw", "f-mw", "microwave frequency in Hz"},
      {"dg", "dg", "relative g shift of spin B"},
      {"j", "j", "exchange coupling in rad/s"},
      {"d", "d", "dipolar coupling in rad/s"},
      {"azz-a", "azz-a", "hyperfine azz of spin A in rad/s"},
      {"azz-b", "azz-b", "hyperfine azz of spin B in rad/s"},
      {"b-span", "b-span", "sweep width in tesla"}}},
    {"scrp-mary",
     "Radical-pair fluorescence on and off the 2J resonance",
     {{"b-off", "b-off", "off-resonance field in tesla"},
      {"b-on", "b-on", "on-resonance field in tesla"},
      {"kfl", "kfl", "fluorescence rate in Hz"},
      {"kcs", "kcs", "charge-separation rate in Hz"},
      {"kbcr", "kbcr", "back charge-recombination rate in Hz"},
      {"kcrs", "kcrs", "singlet recombination rate in Hz"},
      {"kcrt", "kcrt", "triplet recombination rate in Hz"},
      {"kcrtt", "kcrtt", "T1 depletion rate in Hz"},
      {"beta", "beta", "pump strength relative to kfl"},
      {"a-hfi", "a-hfi", "isotropic hyperfine coupling in rad/s"},
      {"j", "j", "exchange coupling in rad/s"},
      {"pulse-steps", "pulse-steps", "laser pulse length in steps"}}},
    {"pake",
     "Static powder average of a dipolar pair (Pake spectrum)",
     {{"r", "r", "internuclear distance in meters"},
      {"grid", "grid", "number of powder orientations"}}},
    {"mas",
     "Magic-angle spinning of the dipolar pair (narrowed spectrum)",
     {{"r", "r", "internuclear distance in meters"},
      {"rotor-khz", "rotor-khz", "rotor frequency in kHz"},
      {"grid", "grid", "number of rotor phases"}}},
};

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("SPINDLE_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"spindle: spin-dynamics example runner"};
  app.require_subcommand(1);

  spindle::cli::RunConfig cfg;
  std::map<std::string, std::map<std::string, double>> sub_params;

  for (const auto& spec : kCommands) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->add_option("--out", cfg.out_path, "output path ('-' for stdout)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--dt", cfg.dt, "time step in seconds (command default when omitted)");
    sub->add_option("--steps", cfg.steps, "number of samples / grid points");
    sub->add_option("--seed", cfg.seed, "seed recorded in the metadata");
    for (const auto& [flag, key, help] : spec.params)
      sub->add_option(std::string("--") + flag, sub_params[spec.name][key], help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitBadArgs;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  for (const auto& [key, value] : sub_params[cfg.command]) {
    std::string flag = "--" + key;
    if (chosen->count(flag) > 0) cfg.params[key] = value;
  }

  try {
    auto tables = spindle::cli::run_command(cfg);
    spindle::write_tables(tables, cfg.out_path, cfg.format);
  } catch (const spindle::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const spindle::ValueError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const spindle::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
