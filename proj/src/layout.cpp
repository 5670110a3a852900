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
#include "spindle/layout.hpp"

#include <algorithm>
#include <cmath>

namespace spindle {

int Member::multiplicity() const {
  return static_cast<int>(std::lround(2.0 * val)) + 1;
}

Member spin(const std::string& name, double val) { return Member{name, val, {}}; }

Member level(const std::string& name) { return Member{name, 0.0, {}}; }

void validate_member(const Member& m) {
  if (m.name.empty()) throw ValueError("member name must not be empty");
  for (char c : m.name) {
    if (c == '[' || c == ']' || c == ',' || c == '<' || c == '>' || c == '.' ||
        std::isspace(static_cast<unsigned char>(c)))
      throw ValueError("member name '" + m.name + "' contains a reserved character");
  }
  double two_val = 2.0 * m.val;
  if (m.val < 0.0 || std::abs(two_val - std::lround(two_val)) > 1e-9)
    throw ValueError("member '" + m.name + "': spin value must be a non-negative half-integer");
}

SpaceLayout SpaceLayout::leaf(Member m) {
  validate_member(m);
  SpaceLayout node;
  node.type_ = Node::Leaf;
  node.member_ = std::move(m);
  return node;
}

SpaceLayout SpaceLayout::tensor(std::vector<SpaceLayout> children) {
  if (children.empty()) throw ValueError("tensor node requires at least one child");
  SpaceLayout node;
  node.type_ = Node::Tensor;
  node.children_ = std::move(children);
  return node;
}

SpaceLayout SpaceLayout::sum(std::vector<SpaceLayout> children) {
  if (children.empty()) throw ValueError("sum node requires at least one child");
  SpaceLayout node;
  node.type_ = Node::Sum;
  node.children_ = std::move(children);
  return node;
}

SpaceLayout SpaceLayout::tensor(std::vector<Member> members) {
  std::vector<SpaceLayout> leaves;
  leaves.reserve(members.size());
  for (auto& m : members) leaves.push_back(leaf(std::move(m)));
  return tensor(std::move(leaves));
}

const Member& SpaceLayout::member() const {
  if (type_ != Node::Leaf) throw Error("member() called on a non-leaf layout node");
  return member_;
}

long SpaceLayout::dim() const {
  switch (type_) {
    case Node::Leaf:
      return member_.multiplicity();
    case Node::Tensor: {
      long d = 1;
      for (const auto& c : children_) d *= c.dim();
      return d;
    }
    case Node::Sum: {
      long d = 0;
      for (const auto& c : children_) d += c.dim();
      return d;
    }
  }
  return 0;
}

std::vector<std::string> SpaceLayout::member_names() const {
  std::vector<std::string> names;
  if (type_ == Node::Leaf) {
    names.push_back(member_.name);
    return names;
  }
  for (const auto& c : children_) {
    auto sub = c.member_names();
    names.insert(names.end(), sub.begin(), sub.end());
  }
  return names;
}

const Member* SpaceLayout::find(const std::string& name) const {
  if (type_ == Node::Leaf) return member_.name == name ? &member_ : nullptr;
  for (const auto& c : children_)
    if (const Member* m = c.find(name)) return m;
  return nullptr;
}

bool SpaceLayout::contains(const std::string& name) const { return find(name) != nullptr; }

bool SpaceLayout::under_sum(const std::string& name) const {
  if (type_ == Node::Leaf) return false;
  for (const auto& c : children_) {
    if (!c.contains(name)) continue;
    if (type_ == Node::Sum) return true;
    return c.under_sum(name);
  }
  return false;
}

std::vector<BasisState> enumerate_basis(const SpaceLayout& layout) {
  switch (layout.node_type()) {
    case SpaceLayout::Node::Leaf: {
      std::vector<BasisState> out(layout.member().multiplicity());
      for (size_t i = 0; i < out.size(); ++i) out[i].sub[layout.member().name] = static_cast<int>(i);
      return out;
    }
    case SpaceLayout::Node::Tensor: {
      std::vector<BasisState> out{BasisState{}};
      for (const auto& child : layout.children()) {
        auto part = enumerate_basis(child);
        std::vector<BasisState> next;
        next.reserve(out.size() * part.size());
        for (const auto& a : out)
          for (const auto& b : part) {
            BasisState s = a;
            s.branch_path.insert(s.branch_path.end(), b.branch_path.begin(), b.branch_path.end());
            s.sub.insert(b.sub.begin(), b.sub.end());
            next.push_back(std::move(s));
          }
        out = std::move(next);
      }
      return out;
    }
    case SpaceLayout::Node::Sum: {
      std::vector<BasisState> out;
      int branch = 0;
      for (const auto& child : layout.children()) {
        for (auto& s : enumerate_basis(child)) {
          s.branch_path.insert(s.branch_path.begin(), branch);
          out.push_back(std::move(s));
        }
        ++branch;
      }
      return out;
    }
  }
  return {};
}

std::vector<long> span_indices(const SpaceLayout& layout, const std::string& name) {
  if (!layout.contains(name)) throw ValueError("unknown member '" + name + "'");
  auto basis = enumerate_basis(layout);
  std::vector<long> idx;
  for (size_t g = 0; g < basis.size(); ++g)
    if (basis[g].sub.count(name)) idx.push_back(static_cast<long>(g));
  return idx;
}

QMatrix embed_local(const SpaceLayout& layout, const std::string& name, const QMatrix& local) {
  return embed_on_members(layout, {name}, local, false);
}

QMatrix embed_on_members(const SpaceLayout& layout, const std::vector<std::string>& names,
                         const QMatrix& local, bool foreign_identity) {
  if (names.empty()) throw ValueError("embed_on_members: empty member list");
  long local_dim = 1;
  for (const auto& n : names) {
    const Member* m = layout.find(n);
    if (!m) throw ValueError("unknown member '" + n + "'");
    local_dim *= m->multiplicity();
  }
  if (local.rows() != local_dim || local.cols() != local_dim)
    throw DimensionError("embed_on_members: local operator dimension mismatch");

  auto basis = enumerate_basis(layout);
  const long dim = static_cast<long>(basis.size());
  cx_mat local_d = local.to_dense();
  cx_mat out = cx_mat::Zero(dim, dim);

  // Group the span states by environment (branch path plus companion
  // sublevels); the operator couples states within one environment only.
  using EnvKey = std::pair<std::vector<int>, std::map<std::string, int>>;
  std::map<EnvKey, std::vector<std::pair<long, long>>> groups;  // env -> (global, packed local)
  for (long g = 0; g < dim; ++g) {
    const auto& st = basis[g];
    bool on_span = std::all_of(names.begin(), names.end(),
                               [&](const std::string& n) { return st.sub.count(n) > 0; });
    if (!on_span) {
      if (foreign_identity) out(g, g) = 1.0;
      continue;
    }
    long packed = 0;
    for (const auto& n : names) packed = packed * layout.find(n)->multiplicity() + st.sub.at(n);
    std::map<std::string, int> companions = st.sub;
    for (const auto& n : names) companions.erase(n);
    groups[{st.branch_path, companions}].emplace_back(g, packed);
  }
  for (const auto& [env, states] : groups) {
    (void)env;
    for (const auto& [g1, l1] : states)
      for (const auto& [g2, l2] : states) out(g1, g2) = local_d(l1, l2);
  }
  return QMatrix(std::move(out));
}

namespace {

struct Factor {
  std::set<std::string> names;
  long dim;
};

void flatten_factors(const SpaceLayout& node, std::vector<Factor>& out) {
  switch (node.node_type()) {
    case SpaceLayout::Node::Leaf:
      out.push_back({{node.member().name}, node.dim()});
      return;
    case SpaceLayout::Node::Tensor:
      for (const auto& c : node.children()) flatten_factors(c, out);
      return;
    case SpaceLayout::Node::Sum: {
      auto names = node.member_names();
      out.push_back({{names.begin(), names.end()}, node.dim()});
      return;
    }
  }
}

}  // namespace

QMatrix ptrace(const QMatrix& op, const SpaceLayout& layout, const std::set<std::string>& keep) {
  if (op.rows() != layout.dim() || op.cols() != layout.dim())
    throw DimensionError("ptrace: operator dimension does not match layout");
  if (keep.empty()) throw ValueError("ptrace: empty keep set");
  for (const auto& n : keep)
    if (!layout.contains(n)) throw ValueError("ptrace: unknown member '" + n + "'");

  std::vector<Factor> factors;
  if (layout.node_type() == SpaceLayout::Node::Sum) {
    auto names = layout.member_names();
    if (std::set<std::string>(names.begin(), names.end()) != keep)
      throw DomainError("ptrace: cannot trace across a direct sum; resolve branches first");
    return op;
  }
  flatten_factors(layout, factors);

  std::vector<bool> kept(factors.size(), false);
  std::set<std::string> covered;
  for (size_t f = 0; f < factors.size(); ++f) {
    bool any = std::any_of(factors[f].names.begin(), factors[f].names.end(),
                           [&](const std::string& n) { return keep.count(n) > 0; });
    if (any) {
      kept[f] = true;
      covered.insert(factors[f].names.begin(), factors[f].names.end());
    }
  }
  for (const auto& n : covered)
    if (!keep.count(n))
      throw DomainError("ptrace: member '" + n +
                        "' shares a factor with the kept set but is not kept");

  // Strides of the flattened factor list, left factor slowest.
  std::vector<long> stride(factors.size(), 1);
  for (size_t f = factors.size(); f-- > 1;) stride[f - 1] = stride[f] * factors[f].dim;

  std::vector<size_t> kept_f, traced_f;
  for (size_t f = 0; f < factors.size(); ++f) (kept[f] ? kept_f : traced_f).push_back(f);

  auto offsets = [&](const std::vector<size_t>& fs) {
    std::vector<long> offs{0};
    for (size_t f : fs) {
      std::vector<long> next;
      next.reserve(offs.size() * factors[f].dim);
      for (long base : offs)
        for (long i = 0; i < factors[f].dim; ++i) next.push_back(base + i * stride[f]);
      offs = std::move(next);
    }
    return offs;
  };
  std::vector<long> kept_off = offsets(kept_f), traced_off = offsets(traced_f);

  cx_mat dense = op.to_dense();
  cx_mat out = cx_mat::Zero(static_cast<long>(kept_off.size()), static_cast<long>(kept_off.size()));
  for (size_t a = 0; a < kept_off.size(); ++a)
    for (size_t b = 0; b < kept_off.size(); ++b) {
      cx acc = 0;
      for (long t : traced_off) acc += dense(kept_off[a] + t, kept_off[b] + t);
      out(static_cast<long>(a), static_cast<long>(b)) = acc;
    }
  return QMatrix(std::move(out));
}

QMatrix project_block(const QMatrix& op, const SpaceLayout& layout, const std::string& branch) {
  if (op.rows() != layout.dim() || op.cols() != layout.dim())
    throw DimensionError("project_block: operator dimension does not match layout");
  if (!layout.contains(branch)) throw ValueError("project_block: unknown branch '" + branch + "'");
  if (!layout.under_sum(branch))
    throw DomainError("project_block: member '" + branch + "' is not a direct-sum branch");
  auto idx = span_indices(layout, branch);
  cx_mat dense = op.to_dense();
  cx_mat out(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) out(i, j) = dense(idx[i], idx[j]);
  return QMatrix(std::move(out));
}

SubspaceResolution resolve_subspace(const SpaceLayout& layout, const std::set<std::string>& keep) {
  switch (layout.node_type()) {
    case SpaceLayout::Node::Leaf: {
      SubspaceResolution r{layout, {}, false};
      for (long i = 0; i < layout.dim(); ++i) r.indices.push_back(i);
      return r;
    }
    case SpaceLayout::Node::Tensor: {
      std::vector<SubspaceResolution> parts;
      bool projected = false;
      for (const auto& c : layout.children()) {
        parts.push_back(resolve_subspace(c, keep));
        projected = projected || parts.back().projected;
      }
      std::vector<long> stride(parts.size(), 1);
      for (size_t f = parts.size(); f-- > 1;)
        stride[f - 1] = stride[f] * layout.children()[f].dim();
      std::vector<long> idx{0};
      std::vector<SpaceLayout> pruned_children;
      for (size_t f = 0; f < parts.size(); ++f) {
        pruned_children.push_back(parts[f].pruned);
        std::vector<long> next;
        next.reserve(idx.size() * parts[f].indices.size());
        for (long base : idx)
          for (long i : parts[f].indices) next.push_back(base + i * stride[f]);
        idx = std::move(next);
      }
      return {SpaceLayout::tensor(std::move(pruned_children)), std::move(idx), projected};
    }
    case SpaceLayout::Node::Sum: {
      std::vector<size_t> hits;
      for (size_t c = 0; c < layout.children().size(); ++c)
        for (const auto& n : keep)
          if (layout.children()[c].contains(n)) {
            hits.push_back(c);
            break;
          }
      if (hits.empty()) {
        SubspaceResolution r{layout, {}, false};
        for (long i = 0; i < layout.dim(); ++i) r.indices.push_back(i);
        return r;
      }
      if (hits.size() > 1)
        throw DomainError(
            "subsystem: kept members span multiple branches of a direct sum and are "
            "inseparable");
      long offset = 0;
      for (size_t c = 0; c < hits[0]; ++c) offset += layout.children()[c].dim();
      SubspaceResolution r = resolve_subspace(layout.children()[hits[0]], keep);
      for (long& i : r.indices) i += offset;
      r.projected = true;
      return r;
    }
  }
  throw Error("resolve_subspace: unreachable");
}

}  // namespace spindle
