#pragma once

// Orbits of matrix groups (given by generators) on the Lagrangian Grassmannian, partitions
// with stratum annotations, and stabilizers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "fsiegel/lagrangian.hpp"

namespace fsiegel {

template <int Q>
using LagrangianOrbit = OrbitRecord<Lagrangian<Q>>;

template <int Q>
LagrangianOrbit<Q> orbit(const Lagrangian<Q>& seed, std::span<const Mat<Q>> gens, std::size_t cap) {
  return orbit_bfs(
      seed, gens.size(), [&](std::size_t g, const Lagrangian<Q>& W) { return act(gens[g], W); },
      [](const Lagrangian<Q>& W) { return W.key(); }, cap);
}

template <int Q>
struct PartitionReport {
  std::vector<LagrangianOrbit<Q>> orbits;
  std::vector<std::optional<int>> labels;  // per orbit; empty optional if members disagree
  std::vector<std::string> anomalies;

  bool ok() const { return anomalies.empty(); }

  /// Orbit sizes sorted by label, then size; independent of generator and traversal order.
  std::vector<std::pair<int, std::size_t>> signature() const {
    std::vector<std::pair<int, std::size_t>> sig;
    for (std::size_t i = 0; i < orbits.size(); ++i) sig.emplace_back(labels[i].value_or(-1), orbits[i].size());
    std::sort(sig.begin(), sig.end());
    return sig;
  }
};

/// Splits points into orbits under gens. Each orbit is annotated with label_of of its members;
/// label disagreement inside an orbit, or an orbit leaving the input set, is an anomaly.
template <int Q, typename LabelFn>
PartitionReport<Q> partition(std::span<const Lagrangian<Q>> points, std::span<const Mat<Q>> gens,
                             LabelFn&& label_of, std::size_t cap) {
  PartitionReport<Q> rep;
  std::unordered_set<std::string> input;
  for (const auto& p : points) input.insert(p.key());
  std::unordered_set<std::string> covered;
  for (const auto& p : points) {
    if (covered.count(p.key())) continue;
    auto rec = orbit<Q>(p, gens, cap);
    std::optional<int> lbl = label_of(rec.representative());
    for (const auto& w : rec.points) {
      if (!input.count(w.key())) {
        rep.anomalies.push_back("orbit of point " + to_text(p.basis()) + " leaves the input set");
        break;
      }
    }
    for (const auto& w : rec.points) {
      if (lbl && label_of(w) != *lbl) {
        rep.anomalies.push_back("orbit of " + to_text(p.basis()) + " mixes labels");
        lbl.reset();
      }
      covered.insert(w.key());
    }
    rep.labels.push_back(lbl);
    rep.orbits.push_back(std::move(rec));
  }
  std::size_t total = 0;
  for (const auto& o : rep.orbits) total += o.size();
  if (total != points.size()) rep.anomalies.push_back("orbits do not partition the input set");
  return rep;
}

/// True when the orbit partition coincides with the partition by label: every orbit is
/// label-constant and no label value is split across orbits.
template <int Q>
bool matches_label_partition(const PartitionReport<Q>& rep) {
  if (!rep.ok()) return false;
  std::map<int, int> orbits_per_label;
  for (const auto& l : rep.labels) {
    if (!l) return false;
    ++orbits_per_label[*l];
  }
  for (const auto& [lbl, count] : orbits_per_label) {
    if (count != 1) return false;
  }
  return true;
}

/// |G| / |orbit|; a non-integral quotient is a verification failure.
inline std::uint64_t stabilizer_order(std::uint64_t group_order, std::uint64_t orbit_size) {
  if (orbit_size == 0 || group_order % orbit_size != 0) {
    throw VerificationFailure("orbit size " + std::to_string(orbit_size) + " does not divide group order " +
                              std::to_string(group_order));
  }
  return group_order / orbit_size;
}

/// {g in G : g(W) = W} by filtering a fully enumerated group.
template <int Q>
std::vector<Mat<Q>> stabilizer_elements(const Lagrangian<Q>& W, const GroupEnumeration<Q>& group) {
  std::vector<Mat<Q>> out;
  for (const auto& g : group.elements) {
    if (act(g, W) == W) out.push_back(g);
  }
  return out;
}

}  // namespace fsiegel
