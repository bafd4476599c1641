#include "dbisim/tableau.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace dbisim {

std::string to_string(Rule r) {
  switch (r) {
    case Rule::Step: return "STEP";
    case Rule::Lin: return "LIN";
    case Rule::Repeat: return "REPEAT";
    case Rule::Failure: return "FAILURE";
    case Rule::Open: return "OPEN";
  }
  return "?";
}

std::vector<std::size_t> Verdict::failure_path() const {
  std::vector<std::size_t> path;
  if (!failure) return path;
  for (std::optional<std::size_t> n = failure; n; n = nodes[*n].parent) path.push_back(*n);
  std::reverse(path.begin(), path.end());
  return path;
}

std::string Verdict::summary() const {
  if (bisimilar) return "BISIMILAR";
  const auto& f = nodes[*failure];
  return "NOT-BISIMILAR: " + f.failed_action + " timing mismatch at depth " + std::to_string(f.depth);
}

namespace {

std::vector<std::size_t> actions_by_name(const FinitePA& fpa) {
  std::vector<std::size_t> order(fpa.actions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fpa.actions[a] < fpa.actions[b]; });
  return order;
}

void check_size(const FinitePA& fpa, const RatVector& v) {
  if (v.size() != static_cast<Index>(fpa.size())) throw DimensionError("distribution size differs from the abstraction");
}

struct Mixed {
  Rational mass;
  Rational atom;
  Expolynomial density;

  friend bool operator==(const Mixed&, const Mixed&) = default;
};

Mixed mix(const FinitePA& fpa, const RatVector& mu, std::size_t action) {
  Mixed m;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu(i) == 0) continue;
    const auto& acts = fpa.states[static_cast<std::size_t>(i)].timing.actions;
    auto it = acts.find(action);
    if (it == acts.end()) continue;
    m.mass += mu(i) * it->second.mass;
    m.atom += mu(i) * it->second.atom;
    m.density += mu(i) * it->second.density;
  }
  return m;
}

RatVector push(const FinitePA& fpa, const RatVector& mu, std::size_t action, const Rational& mass) {
  RatVector out = RatVector::Zero(mu.size());
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu(i) == 0) continue;
    const auto& steps = fpa.states[static_cast<std::size_t>(i)].steps;
    auto it = steps.find(action);
    if (it == steps.end()) continue;
    const Rational w = mu(i) * it->second.probability / mass;
    for (const auto& [t, p] : it->second.targets) out(static_cast<Index>(t)) += w * p;
  }
  return out;
}

bool identical_ancestor(const std::vector<TableauNode>& nodes, const TableauNode& n, std::size_t& found) {
  for (auto p = n.parent; p; p = nodes[*p].parent) {
    if (nodes[*p].left == n.left && nodes[*p].right == n.right) {
      found = *p;
      return true;
    }
  }
  return false;
}

}  // namespace

TimingReport compatible_timing(const FinitePA& fpa, const RatVector& mu, const RatVector& nu) {
  check_size(fpa, mu);
  check_size(fpa, nu);
  TimingReport report;
  for (auto a : actions_by_name(fpa)) {
    const Mixed l = mix(fpa, mu, a);
    const Mixed r = mix(fpa, nu, a);
    ActionMismatch m{fpa.actions[a], l.mass != r.mass, l.atom != r.atom || !(l.density == r.density)};
    if (m.mass || m.timing) {
      report.compatible = false;
      report.mismatches.push_back(std::move(m));
    }
  }
  return report;
}

TimingReport compatible_timing(const FinitePA& fpa, const Dist& mu, const Dist& nu) {
  return compatible_timing(fpa, mu.vector(), nu.vector());
}

std::vector<StepChild> step_children(const FinitePA& fpa, const RatVector& mu, const RatVector& nu) {
  check_size(fpa, mu);
  check_size(fpa, nu);
  std::vector<StepChild> children;
  for (auto a : actions_by_name(fpa)) {
    const Rational ml = mix(fpa, mu, a).mass;
    const Rational mr = mix(fpa, nu, a).mass;
    if (ml != mr) throw Error("step on a node with mismatched '" + fpa.actions[a] + "' mass");
    if (ml == 0) continue;
    children.push_back({fpa.actions[a], push(fpa, mu, a, ml), push(fpa, nu, a, mr)});
  }
  return children;
}

std::optional<RatVector> lin_closes(const RatVector& difference, const std::vector<RatVector>& retained) {
  if (retained.empty()) {
    if (is_zero_vector(difference)) return RatVector(0);
    return std::nullopt;
  }
  RatMatrix a(difference.size(), static_cast<Index>(retained.size()));
  for (std::size_t k = 0; k < retained.size(); ++k) a.col(static_cast<Index>(k)) = retained[k];
  return solve(a, difference);
}

Verdict decide(const FinitePA& fpa, const Dist& mu, const Dist& nu) {
  check_size(fpa, mu.vector());
  check_size(fpa, nu.vector());
  Verdict v;
  TableauNode root;
  root.left = mu.vector();
  root.right = nu.vector();
  v.nodes.push_back(std::move(root));

  RatBasis span(static_cast<Index>(fpa.size()));
  std::vector<std::size_t> retained;
  std::vector<RatVector> retained_diffs;
  std::deque<std::size_t> queue{0};

  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const RatVector diff = v.nodes[id].difference();

    std::size_t twin = 0;
    if (identical_ancestor(v.nodes, v.nodes[id], twin)) {
      v.nodes[id].rule = Rule::Repeat;
      v.nodes[id].repeat_of = twin;
      continue;
    }
    if (is_zero_vector(diff)) {
      v.nodes[id].rule = Rule::Repeat;
      continue;
    }
    if (span.contains(diff)) {
      const auto coeffs = lin_closes(diff, retained_diffs);
      if (!coeffs) throw Error("retained span and generators disagree");
      auto& n = v.nodes[id];
      n.rule = Rule::Lin;
      n.basis = retained;
      n.coefficients.assign(coeffs->begin(), coeffs->end());
      continue;
    }
    const TimingReport timing = compatible_timing(fpa, v.nodes[id].left, v.nodes[id].right);
    if (!timing.compatible) {
      v.nodes[id].rule = Rule::Failure;
      v.nodes[id].failed_action = timing.mismatches.front().action;
      v.bisimilar = false;
      v.failure = id;
      for (auto rest : queue) v.nodes[rest].rule = Rule::Open;
      break;
    }
    span.insert(diff);
    retained.push_back(id);
    retained_diffs.push_back(diff);
    v.nodes[id].rule = Rule::Step;
    for (auto& child : step_children(fpa, v.nodes[id].left, v.nodes[id].right)) {
      TableauNode n;
      n.left = std::move(child.left);
      n.right = std::move(child.right);
      n.parent = id;
      n.action = child.action;
      n.depth = v.nodes[id].depth + 1;
      queue.push_back(v.nodes.size());
      v.nodes.push_back(std::move(n));
    }
  }
  return v;
}

Verdict check_locations(const SA& sa, std::size_t q1, std::size_t q2) {
  const FinitePA fpa = abstract(sa, {q1, q2});
  return decide(fpa, fpa.dirac(fpa.initials[0]), fpa.dirac(fpa.initials[1]));
}

CommuteResult check_commute(const CTMC& c1, const CTMC& c2) {
  CommuteResult r;
  r.composed = sa_parallel(ctmc_to_sa(c1), ctmc_to_sa(c2));
  r.embedded = ctmc_to_sa(ctmc_parallel(c1, c2));
  const SAUnion u = disjoint_union(r.composed, r.embedded);
  r.abstraction = abstract(u.sa, {u.left[r.composed.initial()], u.right[r.embedded.initial()]});
  r.verdict = decide(r.abstraction, r.abstraction.dirac(r.abstraction.initials[0]),
                     r.abstraction.dirac(r.abstraction.initials[1]));
  return r;
}

std::string audit_tableau(const FinitePA& fpa, const Verdict& v) {
  const auto& nodes = v.nodes;
  if (nodes.empty()) return "empty tableau";
  auto where = [](std::size_t id) { return "node " + std::to_string(id) + ": "; };
  std::size_t failures = 0;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const TableauNode& n = nodes[id];
    if (n.parent) {
      const TableauNode& p = nodes[*n.parent];
      if (p.rule != Rule::Step) return where(id) + "parent was not expanded";
      if (n.depth != p.depth + 1) return where(id) + "depth does not follow its parent";
    } else if (id != 0 || n.depth != 1) {
      return where(id) + "only the root may lack a parent";
    }
    const RatVector diff = n.difference();
    switch (n.rule) {
      case Rule::Step: {
        if (!compatible_timing(fpa, n.left, n.right).compatible) return where(id) + "expanded despite a timing mismatch";
        const auto expected = step_children(fpa, n.left, n.right);
        std::vector<const TableauNode*> kids;
        for (const auto& m : nodes) {
          if (m.parent == id) kids.push_back(&m);
        }
        if (kids.size() != expected.size()) return where(id) + "wrong number of step children";
        for (std::size_t k = 0; k < kids.size(); ++k) {
          if (kids[k]->action != expected[k].action || kids[k]->left != expected[k].left ||
              kids[k]->right != expected[k].right) {
            return where(id) + "step child " + std::to_string(k) + " does not re-derive";
          }
        }
        break;
      }
      case Rule::Lin: {
        if (n.basis.size() != n.coefficients.size()) return where(id) + "coefficient count mismatch";
        RatVector sum = RatVector::Zero(diff.size());
        for (std::size_t k = 0; k < n.basis.size(); ++k) {
          if (n.basis[k] >= nodes.size() || nodes[n.basis[k]].rule != Rule::Step) {
            return where(id) + "Lin refers to a node that was not retained";
          }
          sum += n.coefficients[k] * nodes[n.basis[k]].difference();
        }
        if (sum != diff) return where(id) + "Lin coefficients do not reproduce the node";
        break;
      }
      case Rule::Repeat: {
        if (n.repeat_of) {
          bool ancestor = false;
          for (auto p = n.parent; p; p = nodes[*p].parent) ancestor = ancestor || *p == *n.repeat_of;
          const auto& twin = nodes[*n.repeat_of];
          if (!ancestor || twin.left != n.left || twin.right != n.right) return where(id) + "bad repeat";
        } else if (!is_zero_vector(diff)) {
          return where(id) + "repeat of a nonzero node without an ancestor";
        }
        break;
      }
      case Rule::Failure: {
        ++failures;
        const auto t = compatible_timing(fpa, n.left, n.right);
        if (t.compatible) return where(id) + "failure node has compatible timing";
        if (t.mismatches.front().action != n.failed_action) return where(id) + "failure names the wrong action";
        break;
      }
      case Rule::Open:
        if (v.bisimilar) return where(id) + "open node in a successful tableau";
        break;
    }
  }
  if (v.bisimilar != (failures == 0)) return "verdict disagrees with the failure nodes";
  if (!v.bisimilar && (!v.failure || nodes[*v.failure].rule != Rule::Failure)) return "failure index is wrong";
  return {};
}

}  // namespace dbisim
