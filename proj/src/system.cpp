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
#include "spindle/system.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace spindle {

LocalSpinOps local_spin_ops(double val) {
  validate_member(Member{"spin", val, {}});
  const int d = static_cast<int>(std::lround(2.0 * val)) + 1;
  cx_mat z = cx_mat::Zero(d, d);
  cx_mat plus = cx_mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    double m = val - i;
    z(i, i) = m;
    if (i >= 1) plus(i - 1, i) = std::sqrt(val * (val + 1.0) - m * (m + 1.0));
  }
  cx_mat minus = plus.adjoint();
  cx_mat x = 0.5 * (plus + minus);
  cx_mat y = (plus - minus) / (2.0 * ci);
  return LocalSpinOps{x, y, z, plus, minus};
}

cx_mat local_projector(double val, int sublevel) {
  const int d = static_cast<int>(std::lround(2.0 * val)) + 1;
  if (sublevel < 0 || sublevel >= d) throw ValueError("local_projector: sublevel out of range");
  cx_mat p = cx_mat::Zero(d, d);
  p(sublevel, sublevel) = 1.0;
  return p;
}

int sublevel_from_m(double val, double m) {
  double idx = val - m;
  long rounded = std::lround(idx);
  if (std::abs(idx - rounded) > 1e-9 || rounded < 0 || rounded > std::lround(2.0 * val))
    throw ValueError("magnetic number " + std::to_string(m) + " invalid for spin " +
                     std::to_string(val));
  return static_cast<int>(rounded);
}

double m_from_sublevel(double val, int sublevel) { return val - sublevel; }

std::string format_m(double m) {
  long two_m = std::lround(2.0 * m);
  if (two_m % 2 == 0) return std::to_string(two_m / 2);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", m);
  return std::string(buf);
}

SpinSystem::SpinSystem(SpaceLayout layout) : layout_(std::move(layout)) {
  dim_ = layout_.dim();
  auto names = layout_.member_names();
  if (names.empty()) throw ValueError("system: empty member declaration");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw ValueError("system: duplicate member name '" + n + "'");
    members_.push_back(*layout_.find(n));
  }
  for (const auto& m : members_) {
    auto t1 = m.attributes.find("T1");
    auto t2 = m.attributes.find("T2");
    if (t1 != m.attributes.end() && t2 != m.attributes.end() && t2->second > 2.0 * t1->second)
      std::cerr << "warning: member '" << m.name << "' has T2 > 2*T1 (unphysical)\n";
  }
  basis_ = enumerate_basis(layout_);
  build_member_ops();
}

SpinSystem::SpinSystem(std::vector<Member> members)
    : SpinSystem(SpaceLayout::tensor(std::move(members))) {}

void SpinSystem::build_member_ops() {
  for (const auto& m : members_) {
    const int mult = m.multiplicity();
    register_op(m.name + ".id", auto_storage(embed_local(layout_, m.name, QMatrix::identity(mult))));
    if (!m.is_spin()) continue;
    LocalSpinOps local = local_spin_ops(m.val);
    register_op(m.name + ".x", auto_storage(embed_local(layout_, m.name, QMatrix(local.x))));
    register_op(m.name + ".y", auto_storage(embed_local(layout_, m.name, QMatrix(local.y))));
    register_op(m.name + ".z", auto_storage(embed_local(layout_, m.name, QMatrix(local.z))));
    register_op(m.name + ".plus", auto_storage(embed_local(layout_, m.name, QMatrix(local.plus))));
    register_op(m.name + ".minus",
                auto_storage(embed_local(layout_, m.name, QMatrix(local.minus))));
    for (int k = 0; k < mult; ++k) {
      double mval = m_from_sublevel(m.val, k);
      register_op(m.name + ".p[" + format_m(mval) + "]",
                  auto_storage(embed_local(layout_, m.name, QMatrix(local_projector(m.val, k)))));
    }
  }
}

const Member& SpinSystem::member(const std::string& name) const {
  for (const auto& m : members_)
    if (m.name == name) return m;
  throw ValueError("unknown member '" + name + "'");
}

const QMatrix& SpinSystem::op(const std::string& key) const {
  auto it = ops_.find(key);
  if (it == ops_.end()) throw ValueError("unknown operator '" + key + "'");
  return it->second;
}

void SpinSystem::register_op(const std::string& key, QMatrix m) {
  if (ops_.count(key)) throw ValueError("operator key '" + key + "' already exists");
  ops_.emplace(key, std::move(m));
}

namespace {

cx_mat kron_dense(const cx_mat& a, const cx_mat& b) {
  cx_mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct Multiplet {
  double total_spin;
  cx_mat vecs;  // ambient x (2S+1), columns |S,m> with m descending
};

// Clebsch-Gordan coupling of a spin-Sa multiplet with a bare spin sb, built
// by explicit diagonalization: top states from Gram-Schmidt in the maximal-m
// subspace (Condon-Shortley phase), lower states by applying J-.
std::vector<Multiplet> couple_pair(double sa, double sb) {
  const int da = static_cast<int>(std::lround(2.0 * sa)) + 1;
  const int db = static_cast<int>(std::lround(2.0 * sb)) + 1;
  const int dd = da * db;
  LocalSpinOps a = local_spin_ops(sa), b = local_spin_ops(sb);
  cx_mat jminus = kron_dense(a.minus, cx_mat::Identity(db, db)) +
                  kron_dense(cx_mat::Identity(da, da), b.minus);

  auto m_total = [&](int idx) {
    int i = idx / db, j = idx % db;
    return (sa - i) + (sb - j);
  };

  std::vector<Multiplet> out;
  for (double st = sa + sb; st >= std::abs(sa - sb) - 1e-9; st -= 1.0) {
    // Candidates in the m = st subspace, ordered by descending m_a.
    std::vector<int> cand;
    for (int idx = 0; idx < dd; ++idx)
      if (std::abs(m_total(idx) - st) < 1e-9) cand.push_back(idx);
    cx_vec v = cx_vec::Zero(dd);
    v(cand.front()) = 1.0;
    for (const auto& prior : out) {
      int col = static_cast<int>(std::lround(prior.total_spin - st));
      cx_vec u = prior.vecs.col(col);
      v -= u * (u.dot(v));
    }
    double nrm = v.norm();
    if (nrm < 1e-9) throw Error("ghost spin coupling: degenerate top state");
    v /= nrm;
    cx phase = v(cand.front());
    v *= std::conj(phase) / std::abs(phase);

    const int cols = static_cast<int>(std::lround(2.0 * st)) + 1;
    cx_mat vecs(dd, cols);
    vecs.col(0) = v;
    for (int k = 1; k < cols; ++k) {
      double m = st - (k - 1);
      double c = std::sqrt(st * (st + 1.0) - m * (m - 1.0));
      vecs.col(k) = jminus * vecs.col(k - 1) / c;
    }
    out.push_back({st, std::move(vecs)});
  }
  return out;
}

std::vector<Multiplet> couple_sequential(const std::vector<double>& vals) {
  const int d0 = static_cast<int>(std::lround(2.0 * vals[0])) + 1;
  std::vector<Multiplet> cur{{vals[0], cx_mat::Identity(d0, d0)}};
  for (size_t b = 1; b < vals.size(); ++b) {
    const int db = static_cast<int>(std::lround(2.0 * vals[b])) + 1;
    std::vector<Multiplet> next;
    for (const auto& mp : cur) {
      cx_mat lifted = kron_dense(mp.vecs, cx_mat::Identity(db, db));
      for (auto& pair : couple_pair(mp.total_spin, vals[b]))
        next.push_back({pair.total_spin, lifted * pair.vecs});
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

void SpinSystem::add_ghostspin(const std::string& name,
                               const std::vector<std::string>& member_names) {
  validate_member(Member{name, 0.0, {}});
  if (member_names.size() < 2) throw ValueError("add_ghostspin: need at least two members");
  std::vector<double> vals;
  std::vector<long> ref_span;
  for (const auto& n : member_names) {
    const Member& m = member(n);
    if (!m.is_spin()) throw DomainError("add_ghostspin: member '" + n + "' is not a spin");
    vals.push_back(m.val);
    auto span = span_indices(layout_, n);
    if (ref_span.empty())
      ref_span = span;
    else if (span != ref_span)
      throw DomainError("add_ghostspin: members span a direct-sum boundary");
  }

  std::vector<Multiplet> multiplets = couple_sequential(vals);

  // Sector keys carry the multiplicity; degenerate sectors get letter
  // suffixes in construction order.
  std::map<int, int> mult_count, mult_seen;
  for (const auto& mp : multiplets)
    mult_count[static_cast<int>(std::lround(2.0 * mp.total_spin)) + 1]++;
  std::vector<std::string> sector_keys;
  std::vector<std::string> state_names;
  long group_dim = multiplets.front().vecs.rows();
  cx_mat to_group(group_dim, group_dim);
  long col = 0;
  for (const auto& mp : multiplets) {
    int mult = static_cast<int>(std::lround(2.0 * mp.total_spin)) + 1;
    std::string key = name + "_" + std::to_string(mult);
    if (mult_count[mult] > 1) key += static_cast<char>('a' + mult_seen[mult]);
    mult_seen[mult]++;
    sector_keys.push_back(key);
    ghost_sectors_.push_back({key, mp.total_spin, member_names, mp.vecs});

    QMatrix id_group(cx_mat(mp.vecs * mp.vecs.adjoint()));
    register_op(key + ".id", auto_storage(embed_on_members(layout_, member_names, id_group)));
    if (mp.total_spin > 0) {
      LocalSpinOps sec = local_spin_ops(mp.total_spin);
      auto lift = [&](const cx_mat& local) {
        return auto_storage(embed_on_members(layout_, member_names,
                                             QMatrix(cx_mat(mp.vecs * local * mp.vecs.adjoint()))));
      };
      register_op(key + ".x", lift(sec.x));
      register_op(key + ".y", lift(sec.y));
      register_op(key + ".z", lift(sec.z));
      register_op(key + ".plus", lift(sec.plus));
      register_op(key + ".minus", lift(sec.minus));
    }
    for (int k = 0; k < mult; ++k) {
      double mval = m_from_sublevel(mp.total_spin, k);
      cx_vec v = mp.vecs.col(k);
      register_op(key + ".p[" + format_m(mval) + "]",
                  auto_storage(embed_on_members(layout_, member_names, QMatrix(cx_mat(v * v.adjoint())))));
      state_names.push_back(key + "[" + format_m(mval) + "]");
    }
    to_group.block(0, col, group_dim, mult) = mp.vecs;
    col += mult;
  }

  QMatrix to = embed_on_members(layout_, member_names, QMatrix(to_group), /*foreign_identity=*/true);
  bases_[name] = Basis{to, to.adjoint(), state_names};
  ghost_keys_[name] = sector_keys;
}

void SpinSystem::add_basis(const std::string& name, const QMatrix& zeeman_to_new,
                           const std::vector<std::string>& state_names) {
  if (bases_.count(name)) throw ValueError("basis '" + name + "' already exists");
  if (zeeman_to_new.rows() != dim_ || zeeman_to_new.cols() != dim_)
    throw DimensionError("add_basis: transform must span the full system dimension");
  cx_mat t = zeeman_to_new.to_dense();
  if ((t.adjoint() * t - cx_mat::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::unitarity)
    throw DomainError("add_basis: transform is not unitary");
  if (state_names.size() != static_cast<size_t>(dim_))
    throw ValueError("add_basis: need one state name per dimension");
  for (const auto& sn : state_names) validate_member(Member{sn, 0.0, {}});

  QMatrix to(cx_mat(t.adjoint()));
  for (long k = 0; k < dim_; ++k) {
    cx_vec v = to.to_dense().col(k);
    register_op(state_names[k] + ".id", QMatrix(cx_mat(v * v.adjoint())));
  }
  bases_[name] = Basis{to, QMatrix(std::move(t)), state_names};
}

const SpinSystem::Basis& SpinSystem::basis(const std::string& name) const {
  auto it = bases_.find(name);
  if (it == bases_.end()) throw ValueError("unknown basis '" + name + "'");
  return it->second;
}

QMatrix SpinSystem::to_basis(const std::string& name, const QMatrix& op) const {
  const Basis& b = basis(name);
  return b.from * op * b.to;
}

QMatrix SpinSystem::from_basis(const std::string& name, const QMatrix& op) const {
  const Basis& b = basis(name);
  return b.to * op * b.from;
}

const SpinSystem::GhostSector* SpinSystem::ghost_sector(const std::string& key) const {
  for (const auto& s : ghost_sectors_)
    if (s.key == key) return &s;
  return nullptr;
}

const std::vector<std::string>* SpinSystem::ghost_sector_keys(const std::string& ghost_name) const {
  auto it = ghost_keys_.find(ghost_name);
  return it == ghost_keys_.end() ? nullptr : &it->second;
}

namespace {

QMatrix gather(const cx_mat& m, const std::vector<long>& idx) {
  cx_mat out(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return QMatrix(std::move(out));
}

}  // namespace

std::pair<QMatrix, std::optional<QMatrix>> SpinSystem::subsystem(
    const QMatrix& op, const std::set<std::string>& keep) const {
  if (keep.empty()) throw ValueError("subsystem: empty keep set");
  for (const auto& n : keep)
    if (!layout_.contains(n)) throw ValueError("subsystem: unknown member '" + n + "'");
  if (op.rows() != dim_ || op.cols() != dim_)
    throw DimensionError("subsystem: operator dimension does not match system");

  SubspaceResolution res = resolve_subspace(layout_, keep);
  cx_mat dense = op.to_dense();
  QMatrix sub = gather(dense, res.indices);
  std::optional<QMatrix> remainder;
  if (res.projected) {
    std::vector<bool> in_sub(dim_, false);
    for (long i : res.indices) in_sub[i] = true;
    std::vector<long> comp;
    for (long i = 0; i < dim_; ++i)
      if (!in_sub[i]) comp.push_back(i);
    if (!comp.empty()) remainder = gather(dense, comp);
  }
  return {ptrace(sub, res.pruned, keep), remainder};
}

}  // namespace spindle
