#include "causim/topology.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "causim/errors.hpp"

namespace causim {

namespace {

constexpr const char* kNewNode = "\x01new";
constexpr std::uint64_t kMaterializeGuard = 1ULL << 22;

// Lightweight name graph; topology legality is a pure graph property, so
// candidate filtering does not build full SCMs.
struct Digraph {
  std::vector<std::string> nodes;                           // sorted
  std::map<std::string, std::vector<std::string>> parents;  // node -> sorted parents

  std::map<std::string, int> outdeg() const {
    std::map<std::string, int> d;
    for (const auto& n : nodes) d[n] = 0;
    for (const auto& [c, ps] : parents)
      for (const auto& p : ps) d[p]++;
    return d;
  }
};

Digraph graph_of(const GraphSpec& spec) {
  Digraph g;
  g.nodes = spec.nodes;
  std::sort(g.nodes.begin(), g.nodes.end());
  for (const auto& n : g.nodes) g.parents[n];
  for (const auto& [p, c] : spec.edges) g.parents[c].push_back(p);
  for (auto& [c, ps] : g.parents) std::sort(ps.begin(), ps.end());
  return g;
}

Digraph graph_of(const Scm& scm) { return graph_of(graph_spec(scm)); }

std::vector<std::string> try_layer_order(const Digraph& g) {
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& n : g.nodes) indeg[n] = 0;
  for (const auto& [c, ps] : g.parents) {
    indeg[c] += static_cast<int>(ps.size());
    for (const auto& p : ps) children[p].push_back(c);
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.push(n);
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto n = ready.top();
    ready.pop();
    order.push_back(n);
    for (const auto& c : children[n])
      if (--indeg[c] == 0) ready.push(c);
  }
  if (order.size() != g.nodes.size()) return {};
  return order;
}

bool acyclic(const Digraph& g) { return g.nodes.empty() || !try_layer_order(g).empty(); }

bool weakly_connected(const Digraph& g) {
  if (g.nodes.size() <= 1) return true;
  std::map<std::string, std::string> up;
  for (const auto& n : g.nodes) up[n] = n;
  auto find = [&](std::string x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  };
  for (const auto& [c, ps] : g.parents)
    for (const auto& p : ps) up[find(p)] = find(c);
  std::set<std::string> roots;
  for (const auto& n : g.nodes) roots.insert(find(n));
  return roots.size() == 1;
}

std::map<std::string, int> longest_path_layers(const Digraph& g) {
  auto order = try_layer_order(g);
  if (order.empty() && !g.nodes.empty()) throw CycleDetected("layer derivation");
  std::map<std::string, int> layer;
  for (const auto& n : order) {
    int v = 0;
    for (const auto& p : g.parents.at(n)) v = std::max(v, layer[p] + 1);
    layer[n] = v;
  }
  return layer;
}

void topology_report(const Digraph& g, TopologyKind kind, ValidationReport& report) {
  if (g.nodes.size() <= 1) return;
  if (!acyclic(g)) {
    report.add("CYCLE", "topology check requires a DAG");
    return;
  }
  auto out = g.outdeg();
  switch (kind) {
    case TopologyKind::Chain: {
      for (const auto& n : g.nodes) {
        if (out[n] > 1) report.add("CHAIN_FANOUT", n);
        if (g.parents.at(n).size() > 1) report.add("CHAIN_FANIN", n);
      }
      break;
    }
    case TopologyKind::Star: {
      std::vector<std::string> hubs;
      for (const auto& n : g.nodes)
        if (out[n] >= 1) hubs.push_back(n);
      if (hubs.size() != 1) {
        report.add("STAR_NO_HUB", std::to_string(hubs.size()) + " nodes with children");
        break;
      }
      const std::string& hub = hubs[0];
      for (const auto& n : g.nodes) {
        if (n == hub) {
          if (!g.parents.at(n).empty()) report.add("STAR_NO_HUB", "hub has a parent");
          continue;
        }
        if (g.parents.at(n).size() > 1) report.add("STAR_MULTIPARENT", n);
        if (g.parents.at(n).empty()) report.add("STAR_ORPHAN", n);
      }
      break;
    }
    case TopologyKind::InvertedStar: {
      std::vector<std::string> sinks;
      for (const auto& n : g.nodes)
        if (!g.parents.at(n).empty()) sinks.push_back(n);
      if (sinks.size() != 1) {
        report.add("INV_STAR_NO_SINK", std::to_string(sinks.size()) + " nodes with parents");
        break;
      }
      const std::string& sink = sinks[0];
      if (out[sink] != 0) report.add("INV_STAR_NO_SINK", "sink has children");
      for (const auto& n : g.nodes)
        if (n != sink && out[n] != 1) report.add("INV_STAR_ORPHAN", n);
      break;
    }
    case TopologyKind::Tree: {
      int roots = 0;
      for (const auto& n : g.nodes) {
        if (g.parents.at(n).size() > 1) report.add("TREE_MULTIPARENT", n);
        if (g.parents.at(n).empty()) ++roots;
      }
      if (roots != 1) report.add("TREE_MULTIROOT", std::to_string(roots) + " roots");
      break;
    }
    case TopologyKind::Layered: {
      auto layer = longest_path_layers(g);
      for (const auto& [c, ps] : g.parents)
        for (const auto& p : ps) {
          int gap = layer[c] - layer[p];
          if (gap == 0) report.add("LAYER_INTERNAL_EDGE", p + " -> " + c);
          else if (gap != 1) report.add("LAYER_SKIP", p + " -> " + c);
        }
      break;
    }
    case TopologyKind::PolyTree: {
      size_t undirected_edges = 0;
      for (const auto& [c, ps] : g.parents) undirected_edges += ps.size();
      if (undirected_edges != g.nodes.size() - 1 || !weakly_connected(g))
        report.add("POLYTREE_CYCLE", "undirected graph is not a tree");
      break;
    }
  }
}

Digraph insert_node(const Digraph& g, const Insertion& ins) {
  Digraph g2 = g;
  g2.nodes.push_back(kNewNode);
  std::sort(g2.nodes.begin(), g2.nodes.end());
  g2.parents[kNewNode] = ins.parents;
  for (const auto& child : ins.children) {
    auto& ps = g2.parents[child];
    auto it = ins.drops.find(child);
    if (it != ins.drops.end()) {
      for (const auto& dropped : it->second)
        ps.erase(std::remove(ps.begin(), ps.end(), dropped), ps.end());
    }
    ps.push_back(kNewNode);
    std::sort(ps.begin(), ps.end());
  }
  return g2;
}

bool insertion_valid(const Digraph& g, TopologyKind kind, const Insertion& ins) {
  if (ins.parents.empty() && ins.children.empty()) return false;
  Digraph g2 = insert_node(g, ins);
  if (!acyclic(g2) || !weakly_connected(g2)) return false;
  ValidationReport report;
  topology_report(g2, kind, report);
  return report.ok();
}

Insertion make_insertion(std::vector<std::string> parents, std::vector<std::string> children,
                         const Digraph& g, bool drop_all) {
  Insertion ins;
  std::sort(parents.begin(), parents.end());
  std::sort(children.begin(), children.end());
  ins.parents = std::move(parents);
  ins.children = std::move(children);
  if (drop_all) {
    for (const auto& c : ins.children) {
      const auto& ps = g.parents.at(c);
      if (!ps.empty()) ins.drops[c] = ps;
    }
  }
  return ins;
}

std::vector<std::string> subset_of(const std::vector<std::string>& elems, std::uint64_t mask) {
  std::vector<std::string> out;
  for (size_t i = 0; i < elems.size(); ++i)
    if (mask & (1ULL << i)) out.push_back(elems[i]);
  return out;
}

void check_width(size_t width) {
  if (width > 22) throw TooLarge("insertion family over " + std::to_string(width) + " nodes");
}

// Ancestors of x (transitive parents).
std::set<std::string> ancestors(const Digraph& g, const std::string& x) {
  std::set<std::string> anc;
  std::vector<std::string> frontier = {x};
  while (!frontier.empty()) {
    auto n = frontier.back();
    frontier.pop_back();
    for (const auto& p : g.parents.at(n))
      if (anc.insert(p).second) frontier.push_back(p);
  }
  return anc;
}

std::string tree_root(const Digraph& g) {
  for (const auto& n : g.nodes)
    if (g.parents.at(n).empty()) return n;
  throw CycleDetected("tree without root");
}

// Tree insertions come in closed-form families (see legal_insertions):
//   F0: new root adopting {root} union any subset of the other nodes;
//   Fx: child of x adopting any subset of non-ancestors of x.
// Every member is valid, so both counting and indexing are direct.
struct TreeFamilies {
  std::string root;
  std::vector<std::string> f0_pool;                          // sorted, no root
  std::vector<std::pair<std::string, std::vector<std::string>>> fx;  // x -> allowed, x ascending

  explicit TreeFamilies(const Digraph& g) {
    root = tree_root(g);
    for (const auto& n : g.nodes)
      if (n != root) f0_pool.push_back(n);
    for (const auto& x : g.nodes) {
      auto anc = ancestors(g, x);
      std::vector<std::string> allowed;
      for (const auto& s : g.nodes)
        if (s != x && !anc.count(s)) allowed.push_back(s);
      fx.emplace_back(x, std::move(allowed));
    }
  }

  std::uint64_t count() const {
    check_width(f0_pool.size());
    std::uint64_t total = 1ULL << f0_pool.size();
    for (const auto& [x, allowed] : fx) {
      check_width(allowed.size());
      total += 1ULL << allowed.size();
    }
    return total;
  }

  Insertion nth(const Digraph& g, std::uint64_t index) const {
    std::uint64_t f0 = 1ULL << f0_pool.size();
    if (index < f0) {
      auto children = subset_of(f0_pool, index);
      children.push_back(root);
      return make_insertion({}, std::move(children), g, /*drop_all=*/true);
    }
    index -= f0;
    for (const auto& [x, allowed] : fx) {
      std::uint64_t size = 1ULL << allowed.size();
      if (index < size)
        return make_insertion({x}, subset_of(allowed, index), g, /*drop_all=*/true);
      index -= size;
    }
    throw std::out_of_range("insertion index");
  }
};

void layered_candidates(const Digraph& g, std::vector<Insertion>& out) {
  auto layer = longest_path_layers(g);
  int max_layer = 0;
  for (const auto& [n, l] : layer) max_layer = std::max(max_layer, l);
  int levels = g.nodes.empty() ? 0 : max_layer + 1;
  std::vector<std::vector<std::string>> by_layer(levels);
  for (const auto& n : g.nodes) by_layer[layer[n]].push_back(n);  // nodes sorted already

  auto nonempty_subsets = [](const std::vector<std::string>& pool) {
    check_width(pool.size());
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 1; m < (1ULL << pool.size()); ++m) masks.push_back(m);
    return masks;
  };

  // Placement into an existing layer k: parents fill from layer k-1,
  // children sit in layer k+1 and keep their other parents.
  for (int k = 0; k < levels; ++k) {
    std::vector<std::uint64_t> parent_masks =
        k == 0 ? std::vector<std::uint64_t>{0} : nonempty_subsets(by_layer[k - 1]);
    std::vector<std::uint64_t> child_masks = {0};
    if (k + 1 < levels) {
      check_width(by_layer[k + 1].size());
      for (std::uint64_t m = 1; m < (1ULL << by_layer[k + 1].size()); ++m) child_masks.push_back(m);
    }
    for (auto pm : parent_masks)
      for (auto cm : child_masks) {
        auto parents = k == 0 ? std::vector<std::string>{} : subset_of(by_layer[k - 1], pm);
        auto children = k + 1 < levels ? subset_of(by_layer[k + 1], cm) : std::vector<std::string>{};
        out.push_back(make_insertion(std::move(parents), std::move(children), g, false));
      }
  }

  // A new layer at position p: children are nodes of old layer p, which drop
  // all former parents (now two layers above).
  for (int p = 0; p <= levels; ++p) {
    std::vector<std::uint64_t> parent_masks =
        p == 0 ? std::vector<std::uint64_t>{0} : nonempty_subsets(by_layer[p - 1]);
    std::vector<std::uint64_t> child_masks =
        p < levels ? nonempty_subsets(by_layer[p]) : std::vector<std::uint64_t>{0};
    for (auto pm : parent_masks)
      for (auto cm : child_masks) {
        auto parents = p == 0 ? std::vector<std::string>{} : subset_of(by_layer[p - 1], pm);
        auto children = p < levels ? subset_of(by_layer[p], cm) : std::vector<std::string>{};
        out.push_back(make_insertion(std::move(parents), std::move(children), g, true));
      }
  }
}

void singleton_candidates(const Digraph& g, bool drop_all, std::vector<Insertion>& out) {
  for (const auto& x : g.nodes) {
    out.push_back(make_insertion({x}, {}, g, drop_all));
    out.push_back(make_insertion({}, {x}, g, drop_all));
  }
}

std::vector<Insertion> candidates_for(const Digraph& g, TopologyKind kind) {
  std::vector<Insertion> out;
  switch (kind) {
    case TopologyKind::Chain:
      singleton_candidates(g, true, out);
      for (const auto& a : g.nodes)
        for (const auto& b : g.nodes)
          if (a != b) out.push_back(make_insertion({a}, {b}, g, true));
      break;
    case TopologyKind::Star:
    case TopologyKind::InvertedStar:
    case TopologyKind::PolyTree:
      singleton_candidates(g, false, out);
      break;
    case TopologyKind::Tree: {
      TreeFamilies fam(g);
      std::uint64_t total = fam.count();
      if (total > kMaterializeGuard) throw TooLarge("tree insertion list of " + std::to_string(total));
      for (std::uint64_t i = 0; i < total; ++i) out.push_back(fam.nth(g, i));
      break;
    }
    case TopologyKind::Layered:
      layered_candidates(g, out);
      break;
  }
  return out;
}

}  // namespace

GraphSpec graph_spec(const Scm& scm) {
  GraphSpec spec;
  for (const auto& [name, mech] : scm.mechanisms) spec.nodes.push_back(name);
  spec.edges = scm.edges();
  return spec;
}

GraphSpec graph_spec(const SemanticView& view) {
  GraphSpec spec;
  for (const auto& m : view.mechanisms) spec.nodes.push_back(m.name);
  spec.edges = view.edges;
  return spec;
}

ValidationReport validate_topology(const GraphSpec& graph, TopologyKind kind) {
  ValidationReport report;
  topology_report(graph_of(graph), kind, report);
  return report;
}

ValidationReport validate_topology(const Scm& scm) {
  return validate_topology(graph_spec(scm), scm.topology);
}

std::map<std::string, int> derive_layers(const Scm& scm) {
  return longest_path_layers(graph_of(scm));
}

std::vector<Insertion> legal_insertions(const GraphSpec& graph, TopologyKind kind) {
  Digraph g = graph_of(graph);
  std::set<Insertion> seen;
  for (auto& ins : candidates_for(g, kind))
    if (insertion_valid(g, kind, ins)) seen.insert(std::move(ins));
  return {seen.begin(), seen.end()};
}

std::vector<Insertion> legal_insertions(const Scm& scm) {
  return legal_insertions(graph_spec(scm), scm.topology);
}

std::uint64_t count_legal_insertions(const GraphSpec& graph, TopologyKind kind) {
  if (kind == TopologyKind::Tree) return TreeFamilies(graph_of(graph)).count();
  return legal_insertions(graph, kind).size();
}

Insertion nth_legal_insertion(const GraphSpec& graph, TopologyKind kind, std::uint64_t index) {
  Digraph g = graph_of(graph);
  if (kind == TopologyKind::Tree) return TreeFamilies(g).nth(g, index);
  auto list = legal_insertions(graph, kind);
  return list.at(index);
}

ValidationReport validate_layered_placement(
    const Scm& pre, const std::vector<std::string>& parents,
    const std::vector<std::string>& children,
    const std::map<std::string, std::vector<std::string>>& drops) {
  ValidationReport report;
  auto layer = derive_layers(pre);
  int k = 0;
  if (!parents.empty()) {
    int l = -1;
    for (const auto& p : parents) {
      auto it = layer.find(p);
      if (it == layer.end()) {
        report.add("LAYER_SKIP", "unknown parent " + p);
        return report;
      }
      if (l == -1) l = it->second;
      else if (l != it->second) {
        report.add("LAYER_SKIP", "parents span layers");
        return report;
      }
    }
    k = l + 1;
  }
  Digraph g = graph_of(pre);
  for (const auto& c : children) {
    auto it = layer.find(c);
    if (it == layer.end()) {
      report.add("LAYER_SKIP", "unknown child " + c);
      continue;
    }
    int m = it->second;
    auto dropped = drops.find(c);
    bool has_drops = dropped != drops.end() && !dropped->second.empty();
    if (!has_drops) {
      // Adopting a parentless root from layer 0 pushes it down one; that is
      // the degenerate new-layer insert and is fine.
      if (m == 0 && k == 0 && g.parents.at(c).empty()) continue;
      if (m == k) report.add("LAYER_INTERNAL_EDGE", c);
      else if (m != k + 1)
        report.add("LAYER_SKIP", "child " + c + " in layer " + std::to_string(m));
    } else {
      // new-layer insertion: child moves down one, shedding all old parents
      if (m != k) report.add("LAYER_INTERNAL_EDGE", "child " + c + " not in claimed layer");
      auto expect = g.parents.at(c);
      auto got = dropped->second;
      std::sort(got.begin(), got.end());
      if (got != expect) report.add("LAYER_SKIP", "child " + c + " keeps a parent two layers up");
    }
  }
  return report;
}

}  // namespace causim
