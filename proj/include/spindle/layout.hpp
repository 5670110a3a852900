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
#include <vector>

#include "spindle/qmatrix.hpp"

namespace spindle {

// One member of a multipartite system: a spin (val > 0, multiplicity 2*val+1)
// or an electronic level (val == 0, multiplicity 1). Attributes carry
// phenomenological parameters such as T1/T2 in seconds.
struct Member {
  std::string name;
  double val = 0.0;
  std::map<std::string, double> attributes;

  int multiplicity() const;
  bool is_spin() const { return val > 0.0; }
};

Member spin(const std::string& name, double val);
Member level(const std::string& name);

// Throws ValueError for empty names, names with brackets/commas/arrows/dots
// or whitespace, and for spin values that are not non-negative half-integers.
void validate_member(const Member& m);

// Composite-space layout: a tree whose leaves are members and whose internal
// nodes combine children by tensor product or direct sum. Child order is the
// embedding order (left factor slowest for tensor nodes, first branch first
// for sum nodes).
class SpaceLayout {
 public:
  enum class Node { Leaf, Tensor, Sum };

  static SpaceLayout leaf(Member m);
  static SpaceLayout tensor(std::vector<SpaceLayout> children);
  static SpaceLayout sum(std::vector<SpaceLayout> children);
  // Flat tensor product of members, the common case.
  static SpaceLayout tensor(std::vector<Member> members);

  Node node_type() const { return type_; }
  const Member& member() const;
  const std::vector<SpaceLayout>& children() const { return children_; }

  long dim() const;
  std::vector<std::string> member_names() const;  // depth-first order
  const Member* find(const std::string& name) const;
  bool contains(const std::string& name) const;
  // True if the leaf has a direct-sum node on its path from the root.
  bool under_sum(const std::string& name) const;

 private:
  SpaceLayout() = default;
  Node type_ = Node::Leaf;
  Member member_;
  std::vector<SpaceLayout> children_;
};

// Per-basis-state bookkeeping for one global index of a layout:
// which sum branches the state lives on and the sublevel of every member
// along that path.
struct BasisState {
  std::vector<int> branch_path;       // choice at each sum node, preorder
  std::map<std::string, int> sub;     // member name -> local sublevel index
};

// All basis states of the layout in global-index order.
std::vector<BasisState> enumerate_basis(const SpaceLayout& layout);

// Global indices whose basis state passes through the named member.
std::vector<long> span_indices(const SpaceLayout& layout, const std::string& name);

// Embeds a local operator of one member into the full space: identity on
// tensor companions, zero on foreign direct-sum branches.
QMatrix embed_local(const SpaceLayout& layout, const std::string& name, const QMatrix& local);

// Embeds an operator acting on several members of one tensor group. The local
// operator is indexed by the packed sublevels of `names` in the given order.
// foreign_identity selects identity (basis transforms) or zero (observables)
// on basis states that do not pass through all named members.
QMatrix embed_on_members(const SpaceLayout& layout, const std::vector<std::string>& names,
                         const QMatrix& local, bool foreign_identity = false);

// Partial trace over all tensor factors not named in keep. The kept names
// must exactly cover a group of top-level tensor factors (direct-sum subtrees
// count as single factors). Trace is preserved: tr(result) == tr(op).
QMatrix ptrace(const QMatrix& op, const SpaceLayout& layout, const std::set<std::string>& keep);

// Restriction of op to the span of the named direct-sum branch (all basis
// states passing through the member `branch`).
QMatrix project_block(const QMatrix& op, const SpaceLayout& layout, const std::string& branch);

// Top-down subsystem resolution: resolves every direct sum on the paths to
// the kept members and reports the retained global indices, the pruned
// layout, and whether any sum projection happened.
struct SubspaceResolution {
  SpaceLayout pruned;
  std::vector<long> indices;
  bool projected = false;
};
SubspaceResolution resolve_subspace(const SpaceLayout& layout, const std::set<std::string>& keep);

}  // namespace spindle
