#include "secx/secure_crossover.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "secx/errors.hpp"

namespace secx {

namespace {

constexpr int kMaxVisits = 3;

std::string dir_name(Direction d) { return std::string(to_string(d)); }

}  // namespace

void CrossoverConfig::validate() const {
  for (double p : {p_node_gsub, p_node_hsub, p_edge_hsub, p_swap, p_node_cp, p_edge_cp,
                   p_free_node_cp}) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("crossover probability outside [0, 1]");
  }
}

int CrossoverState::max_visits() const {
  int m = 0;
  for (const auto& [n, v] : visit_count) m = std::max(m, v);
  return m;
}

SecureCrossover::SecureCrossover(const InstanceGraph& g, const InstanceGraph& h,
                                 const CrossoverConfig& cfg, Decider& decider)
    : g_(g), h_(h), cfg_(cfg), dec_(decider) {
  cfg_.validate();
  if (!(g.types() == h.types())) throw PreconditionError("parents use different type graphs");
  if (!same_search_space(g, h)) throw PreconditionError("parents solve different problem instances");
}

SecureCrossoverResult SecureCrossover::run() {
  create_gsub();
  init_cp();
  construct_cp();
  process_free_nodes();
  return finish();
}

// ---- counting ------------------------------------------------------------

std::size_t SecureCrossover::gsub_count(NodeId g, EdgeTypeId t, Direction d) const {
  std::size_t n = 0;
  for (EdgeId e : g_.edges_at(g, t, d)) n += st_.gsub_edges.contains(e);
  return n;
}

std::size_t SecureCrossover::hsub_count(NodeId h, EdgeTypeId t, Direction d) const {
  std::size_t n = 0;
  for (EdgeId e : h_.edges_at(h, t, d)) n += st_.hsub_edges.contains(e);
  return n;
}

std::size_t SecureCrossover::hsub_unpaired_count(NodeId h, EdgeTypeId t, Direction d) const {
  std::size_t n = 0;
  for (EdgeId e : h_.edges_at(h, t, d)) {
    n += st_.hsub_edges.contains(e) && !st_.edge_h_to_g.contains(e);
  }
  return n;
}

SecureCrossover::ONode SecureCrossover::onode_of_h(NodeId h) const {
  auto it = st_.node_h_to_g.find(h);
  if (it != st_.node_h_to_g.end()) return {true, it->second};
  return {false, h};
}

std::size_t SecureCrossover::count(ONode n, EdgeTypeId t, Direction d) const {
  if (!n.g_side) return hsub_count(n.id, t, d);
  std::size_t c = gsub_count(n.id, t, d);
  auto it = st_.node_g_to_h.find(n.id);
  if (it != st_.node_g_to_h.end()) c += hsub_unpaired_count(it->second, t, d);
  return c;
}

std::size_t SecureCrossover::reserved(ONode n, EdgeTypeId t, Direction d) const {
  if (!n.g_side) return 0;
  std::size_t r = 0;
  for (const auto& [eh, rec] : st_.swaps) {
    const Edge& e = g_.edge(rec.g_edge);
    if (e.type == t && opposite(rec.dir) == d && e.endpoint(d) == n.id) ++r;
  }
  return r;
}

std::size_t SecureCrossover::stable(ONode n, EdgeTypeId t, Direction d) const {
  if (!n.g_side) return hsub_count(n.id, t, d);
  std::size_t s = gsub_count(n.id, t, d);
  for (const auto& [eh, rec] : st_.swaps) {
    if (rec.x_g == n.id && rec.dir == d && g_.edge(rec.g_edge).type == t) ++s;
  }
  return s;
}

std::size_t SecureCrossover::target(ONode n, EdgeTypeId t, Direction d) const {
  const std::size_t available = n.g_side ? g_.count_at(n.id, t, d) : h_.count_at(n.id, t, d);
  return std::min<std::size_t>(g_.types().edge_type(t).bound_at(d).lb, available);
}

std::optional<std::size_t> SecureCrossover::allowance(ONode n, EdgeTypeId t, Direction d) const {
  const auto& m = g_.types().edge_type(t).bound_at(d);
  if (!m.ub) return std::nullopt;
  const std::size_t available = n.g_side ? g_.count_at(n.id, t, d) : h_.count_at(n.id, t, d);
  return std::max<std::size_t>(*m.ub, available);
}

bool SecureCrossover::fits(std::span<const Delta> deltas) const {
  std::map<std::tuple<ONode, EdgeTypeId, Direction>, int> net;
  for (const Delta& dl : deltas) net[{dl.node, dl.type, dl.dir}] += dl.amount;
  for (const auto& [key, amount] : net) {
    if (amount <= 0) continue;
    const auto& [n, t, d] = key;
    const auto allow = allowance(n, t, d);
    if (allow && count(n, t, d) + reserved(n, t, d) + amount > *allow) return false;
  }
  return true;
}

bool SecureCrossover::fits_raw(NodeId x, EdgeId e_h, Direction d, bool only_far) const {
  const Edge& e = h_.edge(e_h);
  std::vector<Delta> ds{{onode_of_h(e.endpoint(opposite(d))), e.type, opposite(d), 1}};
  if (!only_far) ds.push_back({onode_of_h(x), e.type, d, 1});
  return fits(ds);
}

// ---- state mutation ------------------------------------------------------

void SecureCrossover::add_h_node(NodeId y) { st_.hsub_nodes.insert(y); }

void SecureCrossover::pair_nodes(NodeId h, NodeId g) {
  st_.node_h_to_g.emplace(h, g);
  st_.node_g_to_h.emplace(g, h);
}

void SecureCrossover::pair_edges(EdgeId h, EdgeId g) {
  st_.edge_h_to_g.emplace(h, g);
  st_.edge_g_to_h.emplace(g, h);
}

void SecureCrossover::enqueue_free(NodeId y) {
  if (st_.free_pending.insert(y).second) st_.queue.push_back(y);
}

void SecureCrossover::visit(NodeId h) {
  if (++st_.visit_count[h] > kMaxVisits) {
    throw std::logic_error("node " + std::to_string(h.value) + " visited more than three times");
  }
}

// ---- Gsub ----------------------------------------------------------------

void SecureCrossover::create_gsub() {
  for (const auto& [id, type] : g_.nodes()) {
    if (g_.types().is_problem(type)) st_.gsub_nodes.insert(id);
  }
  for (const auto& [id, e] : g_.edges()) {
    if (g_.types().is_problem(e.type)) st_.gsub_edges.insert(id);
  }
  std::set<NodeId> expanded;
  std::deque<NodeId> pending;
  auto expand = [&](NodeId x) {
    if (expanded.insert(x).second) include_adjacent_edges(x, pending);
  };
  for (const auto& [x, type] : g_.nodes()) {
    if (!st_.gsub_nodes.contains(x)) {
      if (!dec_.bernoulli(site("gsub.node", x.value), cfg_.p_node_gsub)) continue;
      st_.gsub_nodes.insert(x);
    }
    expand(x);
    while (!pending.empty()) {
      const NodeId y = pending.front();
      pending.pop_front();
      expand(y);
    }
  }
}

void SecureCrossover::include_adjacent_edges(NodeId x, std::deque<NodeId>& pending) {
  const TypeGraph& tg = g_.types();
  for (Direction d : kDirections) {
    for (EdgeTypeId t : tg.incident_types(g_.node_type(x), d)) {
      if (tg.is_problem(t)) continue;  // problem edges are all present already
      const auto available = g_.edges_at(x, t, d);
      const auto& m = tg.edge_type(t).bound_at(d);
      const auto n_avail = static_cast<std::int64_t>(available.size());
      const std::int64_t lo = std::min<std::int64_t>(m.lb, n_avail);
      const std::int64_t hi = m.ub ? std::min<std::int64_t>(*m.ub, n_avail) : n_avail;
      const std::int64_t want =
          dec_.uniform_int(site("gsub.count", x.value, t.value, dir_name(d)), lo, hi);
      std::int64_t have = 0;
      std::vector<EdgeId> candidates;
      for (EdgeId e : available) {
        if (st_.gsub_edges.contains(e)) {
          ++have;
        } else {
          candidates.push_back(e);
        }
      }
      while (have < want && !candidates.empty()) {
        const EdgeId e = dec_.pick_id<EdgeId>(
            site("gsub.edge", x.value, t.value, dir_name(d)), candidates);
        std::erase(candidates, e);
        st_.gsub_edges.insert(e);
        const NodeId other = g_.edge(e).endpoint(opposite(d));
        if (st_.gsub_nodes.insert(other).second) pending.push_back(other);
        ++have;
      }
    }
  }
}

// ---- crossover point -----------------------------------------------------

void SecureCrossover::init_cp() {
  for (const auto& [id, type] : h_.nodes()) {
    if (!h_.types().is_problem(type)) continue;
    st_.hsub_nodes.insert(id);
    pair_nodes(id, id);
  }
  for (const auto& [id, e] : h_.edges()) {
    if (!h_.types().is_problem(e.type)) continue;
    st_.hsub_edges.insert(id);
    pair_edges(id, id);
  }
  for (NodeId x : border(problem_graph_of(h_), h_)) st_.queue.push_back(x);
}

void SecureCrossover::construct_cp() {
  const TypeGraph& tg = h_.types();
  while (!st_.queue.empty()) {
    const NodeId x = st_.queue.front();
    st_.queue.pop_front();
    visit(x);
    for (Direction d : kDirections) {
      for (EdgeTypeId t : tg.incident_types(h_.node_type(x), d)) {
        for (EdgeId e : h_.edges_at(x, t, d)) {
          if (process_cp_edge(x, e, t, d) == Step::SkipType) break;
        }
      }
    }
  }
}

SecureCrossover::Step SecureCrossover::process_cp_edge(NodeId x, EdgeId e_h, EdgeTypeId t,
                                                       Direction d) {
  (void)t;
  const NodeId y = h_.edge(e_h).endpoint(opposite(d));
  const bool y_in = st_.hsub_nodes.contains(y);
  bool y_cp = false;
  if (y_in) {
    if (st_.hsub_edges.contains(e_h)) return Step::Next;
    y_cp = st_.paired(y);
  } else {
    if (st_.banned.contains(y)) return Step::Next;
    st_.decided.insert(y);
    if (!dec_.bernoulli(site("hsub.node", y.value), cfg_.p_node_hsub)) return Step::Next;
  }

  const bool edge_in = dec_.bernoulli(site("hsub.edge", e_h.value), cfg_.p_edge_hsub);
  bool swapped = false;
  if (edge_in) {
    if (y_cp && !fits_raw(x, e_h, d, true)) {
      include_into_cp(x, e_h, d);
      return Step::Next;
    }
    swapped = random_edge_swap(x, e_h, d);
    if (!swapped) {
      if (!fits_raw(x, e_h, d, false)) {
        if (y_cp) {
          include_into_cp(x, e_h, d);
          return Step::Next;
        }
        return resolve_breach(x, e_h, d) ? Step::Next : Step::SkipType;
      }
      add_h_node(y);
      st_.hsub_edges.insert(e_h);
    }
  }
  add_h_node(y);
  if (!y_cp && random_node_to_cp(y) && edge_in && !swapped) random_edge_to_cp(x, e_h, d);
  return Step::Next;
}

bool SecureCrossover::random_edge_swap(NodeId x, EdgeId e_h, Direction dir) {
  if (!dec_.bernoulli(site("swap", e_h.value), cfg_.p_swap)) return false;
  const Edge& eh = h_.edge(e_h);
  const NodeId y = eh.endpoint(opposite(dir));
  const NodeId x_g = st_.node_h_to_g.at(x);
  // Removing the G edge frees one slot at x and reserves one at its far end,
  // so only the new edge's far end gains.
  const Delta gain[] = {{onode_of_h(y), eh.type, opposite(dir), 1}};
  if (!fits(gain)) return false;

  std::vector<EdgeId> candidates;
  for (EdgeId e_g : g_.edges_at(x_g, eh.type, dir)) {
    if (!st_.gsub_edges.contains(e_g) || st_.edge_g_to_h.contains(e_g)) continue;
    const ONode w{true, g_.edge(e_g).endpoint(opposite(dir))};
    if (stable(w, eh.type, opposite(dir)) < target(w, eh.type, opposite(dir)) + 1) continue;
    candidates.push_back(e_g);
  }
  if (candidates.empty()) return false;
  const EdgeId e_g = dec_.pick_id<EdgeId>(site("swap.pick", e_h.value), candidates);
  st_.gsub_edges.erase(e_g);
  st_.swapped_edges.insert(e_g);
  st_.swaps.emplace(e_h, SwapRecord{e_g, e_h, x_g, dir});
  add_h_node(y);
  st_.hsub_edges.insert(e_h);
  return true;
}

bool SecureCrossover::resolve_breach(NodeId x, EdgeId e_h, Direction dir) {
  const Edge& eh = h_.edge(e_h);
  const NodeId y = eh.endpoint(opposite(dir));
  const NodeId x_g = st_.node_h_to_g.at(x);
  std::map<NodeId, EdgeId> via;
  for (EdgeId e_g : g_.edges_at(x_g, eh.type, dir)) {
    if (!st_.gsub_edges.contains(e_g) || st_.edge_g_to_h.contains(e_g)) continue;
    const NodeId z = g_.edge(e_g).endpoint(opposite(dir));
    if (st_.node_g_to_h.contains(z) || via.contains(z)) continue;
    if (!verify_inclusion(y, z)) continue;
    via.emplace(z, e_g);
  }
  if (via.empty()) return false;
  std::vector<NodeId> zs;
  for (const auto& [z, e] : via) zs.push_back(z);
  const NodeId z = dec_.pick_id<NodeId>(site("breach.pick", e_h.value), zs);
  add_h_node(y);
  pair_nodes(y, z);
  st_.hsub_edges.insert(e_h);
  pair_edges(e_h, via.at(z));
  st_.queue.push_back(y);
  return true;
}

bool SecureCrossover::include_into_cp(NodeId x, EdgeId e_h, Direction dir) {
  const Edge& eh = h_.edge(e_h);
  const NodeId x_g = st_.node_h_to_g.at(x);
  const NodeId y_g = st_.node_h_to_g.at(eh.endpoint(opposite(dir)));
  std::vector<EdgeId> candidates;
  for (EdgeId e_g : g_.edges_at(x_g, eh.type, dir)) {
    if (!st_.gsub_edges.contains(e_g) || st_.edge_g_to_h.contains(e_g)) continue;
    if (g_.edge(e_g).endpoint(opposite(dir)) == y_g) candidates.push_back(e_g);
  }
  if (candidates.empty()) return false;
  const EdgeId e_g = dec_.pick_id<EdgeId>(site("cp.into.pick", e_h.value), candidates);
  st_.hsub_edges.insert(e_h);
  pair_edges(e_h, e_g);
  return true;
}

std::vector<NodeId> SecureCrossover::free_partners(NodeId x) const {
  const NodeTypeId type = h_.node_type(x);
  std::vector<NodeId> result;
  for (NodeId z : st_.gsub_nodes) {
    if (g_.node_type(z) != type || st_.node_g_to_h.contains(z)) continue;
    if (verify_inclusion(x, z)) result.push_back(z);
  }
  return result;
}

bool SecureCrossover::random_node_to_cp(NodeId y) {
  if (!dec_.bernoulli(site("cp.node", y.value), cfg_.p_node_cp)) return false;
  const auto candidates = free_partners(y);
  if (candidates.empty()) return false;
  pair_nodes(y, dec_.pick_id<NodeId>(site("cp.node.pick", y.value), candidates));
  st_.queue.push_back(y);
  return true;
}

bool SecureCrossover::random_edge_to_cp(NodeId x, EdgeId e_h, Direction dir) {
  if (!dec_.bernoulli(site("cp.edge", e_h.value), cfg_.p_edge_cp)) return false;
  const Edge& eh = h_.edge(e_h);
  const NodeId x_g = st_.node_h_to_g.at(x);
  const NodeId z = st_.node_h_to_g.at(eh.endpoint(opposite(dir)));
  std::vector<EdgeId> candidates;
  for (EdgeId e_g : g_.edges_at(x_g, eh.type, dir)) {
    if (!st_.gsub_edges.contains(e_g) || st_.edge_g_to_h.contains(e_g)) continue;
    if (g_.edge(e_g).endpoint(opposite(dir)) == z) candidates.push_back(e_g);
  }
  if (candidates.empty()) return false;
  pair_edges(e_h, dec_.pick_id<EdgeId>(site("cp.edge.pick", e_h.value), candidates));
  return true;
}

bool SecureCrossover::verify_inclusion(NodeId x, NodeId z) const {
  const TypeGraph& tg = h_.types();
  const ONode zn{true, z};
  for (Direction d : kDirections) {
    for (EdgeTypeId t : tg.incident_types(h_.node_type(x), d)) {
      const auto allow = allowance(zn, t, d);
      if (!allow) continue;
      const std::size_t merged =
          gsub_count(z, t, d) + hsub_unpaired_count(x, t, d) + reserved(zn, t, d);
      if (merged > *allow) return false;
    }
  }
  return true;
}

// ---- free nodes ----------------------------------------------------------

void SecureCrossover::process_free_nodes() {
  for (const auto& [x, type] : h_.nodes()) {
    if (h_.types().is_problem(type)) continue;
    const bool in = st_.hsub_nodes.contains(x);
    if ((in && !st_.paired(x)) || (!in && !st_.decided.contains(x))) enqueue_free(x);
  }
  while (!st_.queue.empty()) {
    const NodeId x = st_.queue.front();
    st_.queue.pop_front();
    st_.free_pending.erase(x);
    if (st_.paired(x) || st_.banned.contains(x)) continue;
    visit(x);
    if (!st_.hsub_nodes.contains(x)) {
      if (!dec_.bernoulli(site("free.node", x.value), cfg_.p_node_hsub)) continue;
      add_h_node(x);
    }
    bool merged = false;
    if (dec_.bernoulli(site("free.cp", x.value), cfg_.p_free_node_cp)) {
      const auto candidates = free_partners(x);
      if (!candidates.empty()) {
        pair_nodes(x, dec_.pick_id<NodeId>(site("free.cp.pick", x.value), candidates));
        merged = true;
        random_include_more_edges(x);
      }
    }
    if (merged) continue;
    if (ensure_minimum_free_node(x)) {
      st_.settled.insert(x);
    } else {
      cascade_remove(x);
    }
  }
}

void SecureCrossover::random_include_more_edges(NodeId x) {
  const TypeGraph& tg = h_.types();
  for (Direction d : kDirections) {
    for (EdgeTypeId t : tg.incident_types(h_.node_type(x), d)) {
      for (EdgeId e : h_.edges_at(x, t, d)) {
        if (st_.hsub_edges.contains(e)) continue;
        const NodeId w = h_.edge(e).endpoint(opposite(d));
        if (st_.banned.contains(w)) continue;
        if (!dec_.bernoulli(site("free.more", e.value), cfg_.p_edge_hsub)) continue;
        const Delta ds[] = {{onode_of_h(x), t, d, 1}, {onode_of_h(w), t, opposite(d), 1}};
        if (!fits(ds)) continue;
        if (!st_.hsub_nodes.contains(w)) {
          add_h_node(w);
          enqueue_free(w);
        }
        st_.hsub_edges.insert(e);
      }
    }
  }
}

bool SecureCrossover::ensure_minimum_free_node(NodeId x) {
  const TypeGraph& tg = h_.types();
  const ONode xn{false, x};
  for (Direction d : kDirections) {
    for (EdgeTypeId t : tg.incident_types(h_.node_type(x), d)) {
      const std::size_t goal = target(xn, t, d);
      std::size_t have = hsub_count(x, t, d);
      for (EdgeId e : h_.edges_at(x, t, d)) {
        if (have >= goal) break;
        if (st_.hsub_edges.contains(e)) continue;
        const NodeId w = h_.edge(e).endpoint(opposite(d));
        if (st_.banned.contains(w)) continue;
        const Delta ds[] = {{xn, t, d, 1}, {onode_of_h(w), t, opposite(d), 1}};
        if (!fits(ds)) continue;
        if (!st_.hsub_nodes.contains(w)) {
          add_h_node(w);
          enqueue_free(w);
        }
        st_.hsub_edges.insert(e);
        ++have;
      }
      if (have < goal) return false;
    }
  }
  return true;
}

void SecureCrossover::cascade_remove(NodeId x) {
  std::deque<NodeId> work{x};
  while (!work.empty()) {
    const NodeId r = work.front();
    work.pop_front();
    if (!st_.hsub_nodes.contains(r) || st_.paired(r) || h_.is_problem(r)) continue;
    visit(r);
    std::set<EdgeId> incident;
    for (Direction d : kDirections) {
      for (EdgeId e : h_.incident(r, d)) {
        if (st_.hsub_edges.contains(e)) incident.insert(e);
      }
    }
    for (EdgeId e : incident) {
      st_.hsub_edges.erase(e);
      if (auto it = st_.swaps.find(e); it != st_.swaps.end()) {
        st_.gsub_edges.insert(it->second.g_edge);
        st_.swapped_edges.erase(it->second.g_edge);
        st_.swaps.erase(it);
      }
      const Edge& he = h_.edge(e);
      for (Direction d : kDirections) {
        const NodeId f = he.endpoint(d);
        if (f == r || st_.paired(f) || !st_.settled.contains(f)) continue;
        if (hsub_count(f, he.type, d) < target({false, f}, he.type, d)) work.push_back(f);
      }
    }
    st_.hsub_nodes.erase(r);
    st_.settled.erase(r);
    st_.banned.insert(r);
  }
}

// ---- result --------------------------------------------------------------

InstanceGraph SecureCrossover::gsub_graph() const {
  InstanceGraph sub(g_.types_ptr());
  for (NodeId n : st_.gsub_nodes) sub.add_node(n, g_.node_type(n));
  for (EdgeId e : st_.gsub_edges) {
    const Edge& ed = g_.edge(e);
    sub.add_edge(e, ed.type, ed.src, ed.tar);
  }
  return sub;
}

InstanceGraph SecureCrossover::hsub_graph() const {
  InstanceGraph sub(h_.types_ptr());
  for (NodeId n : st_.hsub_nodes) sub.add_node(n, h_.node_type(n));
  for (EdgeId e : st_.hsub_edges) {
    const Edge& ed = h_.edge(e);
    sub.add_edge(e, ed.type, ed.src, ed.tar);
  }
  return sub;
}

CrossoverPoint SecureCrossover::crossover_point() const {
  CrossoverPoint cp{InstanceGraph(g_.types_ptr()), {}, {}, {}, {}};
  for (const auto& [h, g] : st_.node_h_to_g) {
    cp.graph.add_node(g, g_.node_type(g));
    cp.node_to_a.emplace(g, g);
    cp.node_to_b.emplace(g, h);
  }
  for (const auto& [h, g] : st_.edge_h_to_g) {
    const Edge& e = g_.edge(g);
    cp.graph.add_edge(g, e.type, e.src, e.tar);
    cp.edge_to_a.emplace(g, g);
    cp.edge_to_b.emplace(g, h);
  }
  return cp;
}

SecureCrossoverResult SecureCrossover::finish() const {
  InstanceGraph gsub = gsub_graph();
  InstanceGraph hsub = hsub_graph();
  CrossoverPoint cp = crossover_point();
  UnionResult u = union_over_with_maps(gsub, hsub, cp);
  std::optional<InstanceGraph> second;
  if (cfg_.compute_second_offspring) second = union_over(g_, h_, cp);
  return SecureCrossoverResult{std::move(u.graph),
                               std::move(second),
                               dec_.trace(),
                               st_,
                               std::move(gsub),
                               std::move(hsub),
                               std::move(cp),
                               std::move(u.node_from_a),
                               std::move(u.node_from_b)};
}

SecureCrossoverResult secure_crossover(const InstanceGraph& g, const InstanceGraph& h,
                                       const CrossoverConfig& cfg, Decider& decider) {
  return SecureCrossover(g, h, cfg, decider).run();
}

InstanceGraph create_gsub(const InstanceGraph& g, const CrossoverConfig& cfg, Decider& decider) {
  SecureCrossover run(g, g, cfg, decider);
  run.create_gsub();
  return run.gsub_graph();
}

}  // namespace secx
