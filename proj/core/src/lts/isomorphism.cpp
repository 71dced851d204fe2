#include "rybu/lts/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace rybu::lts {

namespace {

constexpr std::size_t kMaxAgents = 8;
constexpr NodeId kUnmapped = static_cast<NodeId>(-1);

struct Shape {
  // Per node: outgoing (agent, target) pairs sorted, and a signature.
  std::vector<std::vector<std::pair<std::uint32_t, NodeId>>> out;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> signature;  // depth, in, out
};

Shape shape_of(const Lts& lts, const std::vector<std::uint32_t>& agent_label) {
  Shape s;
  s.out.resize(lts.node_count());
  std::vector<std::size_t> in(lts.node_count(), 0);
  for (const Edge& e : lts.edges()) {
    s.out[e.source].emplace_back(agent_label[lts.model().action(e.action).agent().index], e.target);
    ++in[e.target];
  }
  for (auto& o : s.out) std::sort(o.begin(), o.end());
  for (NodeId n = 0; n < lts.node_count(); ++n) s.signature.emplace_back(lts.depth(n), in[n], s.out[n].size());
  return s;
}

class Matcher {
 public:
  Matcher(const Shape& l, const Shape& r) : l_(l), r_(r), map_(l.out.size(), kUnmapped), used_(r.out.size(), false) {}

  bool run() {
    bind(0, 0);
    return step(0);
  }

  std::vector<NodeId> result() const { return map_; }

 private:
  struct Group {
    NodeId left;
    std::size_t count;
    std::vector<NodeId> candidates;
  };

  void bind(NodeId a, NodeId b) {
    map_[a] = b;
    used_[b] = true;
    order_.push_back(a);
  }

  void unbind_to(std::size_t size) {
    while (order_.size() > size) {
      used_[map_[order_.back()]] = false;
      map_[order_.back()] = kUnmapped;
      order_.pop_back();
    }
  }

  bool step(std::size_t i) {
    if (i == order_.size()) return order_.size() == l_.out.size();
    const NodeId a = order_[i];
    const NodeId b = map_[a];
    const auto& lo = l_.out[a];
    const auto& ro = r_.out[b];
    if (lo.size() != ro.size()) return false;

    // Per label: mapped targets must correspond, the rest are grouped.
    std::vector<Group> groups;
    std::size_t li = 0, ri = 0;
    while (li < lo.size()) {
      const std::uint32_t label = lo[li].first;
      std::size_t le = li, re = ri;
      while (le < lo.size() && lo[le].first == label) ++le;
      while (re < ro.size() && ro[re].first == label) ++re;
      if (re - ri != le - li || (ri < ro.size() && ro[ri].first != label)) return false;
      std::map<NodeId, std::size_t> right_free, right_mapped;
      for (std::size_t k = ri; k < re; ++k) (used_[ro[k].second] ? right_mapped : right_free)[ro[k].second]++;
      std::map<NodeId, std::size_t> left_free;
      for (std::size_t k = li; k < le; ++k) {
        const NodeId t = lo[k].second;
        if (map_[t] == kUnmapped) {
          left_free[t]++;
        } else if (right_mapped[map_[t]]-- == 0) {
          return false;
        }
      }
      for (const auto& [t, count] : left_free) {
        Group g{t, count, {}};
        for (const auto& [u, c] : right_free)
          if (c == count && l_.signature[t] == r_.signature[u]) g.candidates.push_back(u);
        if (g.candidates.empty()) return false;
        groups.push_back(std::move(g));
      }
      li = le;
      ri = re;
    }
    if (ri != ro.size()) return false;
    return assign(groups, 0, i);
  }

  bool exact(NodeId a) const {
    std::vector<std::pair<std::uint32_t, NodeId>> mapped;
    for (const auto& [label, t] : l_.out[a]) mapped.emplace_back(label, map_[t]);
    std::sort(mapped.begin(), mapped.end());
    return mapped == r_.out[map_[a]];
  }

  bool assign(const std::vector<Group>& groups, std::size_t g, std::size_t i) {
    if (g == groups.size()) return exact(order_[i]) && step(i + 1);
    const Group& group = groups[g];
    if (map_[group.left] != kUnmapped) {
      // Same target under two labels: already placed by an earlier group.
      return std::find(group.candidates.begin(), group.candidates.end(), map_[group.left]) != group.candidates.end() &&
             assign(groups, g + 1, i);
    }
    for (NodeId c : group.candidates) {
      if (used_[c]) continue;
      const std::size_t mark = order_.size();
      bind(group.left, c);
      if (assign(groups, g + 1, i)) return true;
      unbind_to(mark);
    }
    return false;
  }

  const Shape& l_;
  const Shape& r_;
  std::vector<NodeId> map_;
  std::vector<bool> used_;
  std::vector<NodeId> order_;
};

}  // namespace

std::optional<Isomorphism> find_isomorphism(const Lts& left, const Lts& right) {
  if (!left.complete() || !right.complete()) throw std::invalid_argument("isomorphism needs complete LTSs");
  const std::size_t agents = left.model().agent_count();
  if (agents != right.model().agent_count() || left.node_count() != right.node_count() ||
      left.edge_count() != right.edge_count())
    return std::nullopt;
  if (agents > kMaxAgents) throw std::invalid_argument("too many agents for exhaustive isomorphism search");

  std::vector<std::uint32_t> identity(agents);
  std::iota(identity.begin(), identity.end(), 0u);
  const Shape right_shape = shape_of(right, identity);

  std::vector<std::uint32_t> perm = identity;
  do {
    const Shape left_shape = shape_of(left, perm);
    Matcher m(left_shape, right_shape);
    if (m.run()) {
      Isomorphism iso;
      iso.node_map = m.result();
      for (std::uint32_t p : perm) iso.agent_map.push_back(imds::AgentId(std::size_t{p}));
      return iso;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace rybu::lts
