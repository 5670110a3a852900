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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spindle/layout.hpp"
#include "spindle/qmatrix.hpp"

namespace spindle {

// Local (single-member) spin-operator matrices in the basis |m>, m from +s
// down to -s.
struct LocalSpinOps {
  cx_mat x, y, z, plus, minus;
};
LocalSpinOps local_spin_ops(double val);
cx_mat local_projector(double val, int sublevel);

// Sublevel index of magnetic number m (0 for m=+s); throws ValueError when m
// is not a magnetic number of this spin.
int sublevel_from_m(double val, double m);
double m_from_sublevel(double val, int sublevel);

// Formats a magnetic number the way operator keys spell it: integers bare
// ("1", "0", "-1"), half-integers with one decimal ("0.5", "-1.5").
std::string format_m(double m);

// Multipartite system with a pre-built operator dictionary. Operator keys are
// "Member.component": "S.x", "S.y", "S.z", "S.plus", "S.minus", "S.id" and
// projectors "S.p[m]" with the magnetic number in brackets. Ghost-spin
// sectors follow the same scheme under their sector key ("C_1.p[0]").
//
// Every operator is dim x dim, embedded with identity on all other tensor
// factors and zero on foreign direct-sum branches.
//
// The system is immutable after the construction phase; add_ghostspin and
// add_basis extend the dictionary and must be confined to single-threaded
// setup. Reads are freely shareable afterwards.
class SpinSystem {
 public:
  explicit SpinSystem(SpaceLayout layout);
  explicit SpinSystem(std::vector<Member> members);

  long dim() const { return dim_; }
  const SpaceLayout& layout() const { return layout_; }
  const std::vector<Member>& members() const { return members_; }
  const Member& member(const std::string& name) const;
  const std::vector<BasisState>& basis_table() const { return basis_; }

  const QMatrix& op(const std::string& key) const;
  bool has_op(const std::string& key) const { return ops_.count(key) > 0; }
  void register_op(const std::string& key, QMatrix m);

  // Coupled-basis pseudo-spins for a group of spins of one tensor group.
  // Creates full operator sets name_k.{x,y,z,plus,minus,id,p[m]} per
  // total-spin sector k (k = multiplicity; degenerate sectors get suffixes
  // a, b, ... in construction order) and stores the basis transform under
  // `name`. Coupling proceeds pairwise left to right.
  void add_ghostspin(const std::string& name, const std::vector<std::string>& member_names);

  // User-defined basis. `zeeman_to_new` maps Zeeman coordinates to new-basis
  // coordinates (rows are the new states); it must be unitary and span the
  // full system dimension. Creates one projector op "state.id" per named
  // state.
  void add_basis(const std::string& name, const QMatrix& zeeman_to_new,
                 const std::vector<std::string>& state_names);

  struct Basis {
    QMatrix to;    // columns are the new basis states in Zeeman coordinates
    QMatrix from;  // adjoint of `to`; from * to == identity
    std::vector<std::string> state_names;
  };
  const Basis& basis(const std::string& name) const;
  bool has_basis(const std::string& name) const { return bases_.count(name) > 0; }
  QMatrix to_basis(const std::string& name, const QMatrix& op) const;
  QMatrix from_basis(const std::string& name, const QMatrix& op) const;

  struct GhostSector {
    std::string key;                   // e.g. "C_1", "C_3", "C_2a"
    double total_spin;
    std::vector<std::string> members;  // constituent spins, coupling order
    cx_mat vectors;                    // group-space columns |S,m>, m descending
  };
  const GhostSector* ghost_sector(const std::string& key) const;
  const std::vector<std::string>* ghost_sector_keys(const std::string& ghost_name) const;

  // Extracts the reduced operator on the kept members, dispatching to
  // project_block for direct-sum branches and ptrace for tensor factors.
  // For sum branches the complementary block is returned as remainder.
  std::pair<QMatrix, std::optional<QMatrix>> subsystem(const QMatrix& op,
                                                       const std::set<std::string>& keep) const;

 private:
  void build_member_ops();

  SpaceLayout layout_;
  long dim_ = 0;
  std::vector<Member> members_;
  std::vector<BasisState> basis_;
  std::map<std::string, QMatrix> ops_;
  std::map<std::string, Basis> bases_;
  std::vector<GhostSector> ghost_sectors_;
  std::map<std::string, std::vector<std::string>> ghost_keys_;  // ghost name -> sector keys
};

}  // namespace spindle
