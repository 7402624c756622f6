// Left-right planarity test (Brandes' formulation of de Fraysseix-Rosenstiehl).
// Only the decision phase is implemented; no embedding is produced.

#include "lgdc/algorithms.hpp"

#include <algorithm>
#include <vector>

namespace lgdc {

namespace {

constexpr int kNone = -1;

struct Interval {
  int low = kNone;
  int high = kNone;
  [[nodiscard]] bool empty() const { return low == kNone && high == kNone; }
};

struct ConflictPair {
  Interval left;
  Interval right;
  void swap() { std::swap(left, right); }
};

class LeftRightTest {
 public:
  explicit LeftRightTest(const Graph& g) : n_(g.num_nodes()), adj_(g.adjacency()) {
    height_.assign(static_cast<std::size_t>(n_), kNone);
    parent_edge_.assign(static_cast<std::size_t>(n_), kNone);
    out_.resize(static_cast<std::size_t>(n_));
    // Undirected edge id lookup for "already oriented" checks.
    edge_index_.assign(static_cast<std::size_t>(n_ * n_), kNone);
    int next = 0;
    for (const auto& e : g.edges()) {
      edge_index_[static_cast<std::size_t>(e.u * n_ + e.v)] = next;
      edge_index_[static_cast<std::size_t>(e.v * n_ + e.u)] = next;
      ++next;
    }
    oriented_.assign(static_cast<std::size_t>(next), false);
  }

  bool run() {
    for (int v = 0; v < n_; ++v) {
      if (height_[at(v)] == kNone) {
        height_[at(v)] = 0;
        roots_.push_back(v);
        orient(v);
      }
    }
    for (int v = 0; v < n_; ++v) {
      auto& out = out_[at(v)];
      std::stable_sort(out.begin(), out.end(),
                       [&](int a, int b) { return nesting_depth_[at(a)] < nesting_depth_[at(b)]; });
    }
    for (int root : roots_) {
      if (!test(root)) return false;
    }
    return true;
  }

 private:
  static std::size_t at(int i) { return static_cast<std::size_t>(i); }

  int add_oriented(int from, int to) {
    const int id = static_cast<int>(src_.size());
    src_.push_back(from);
    dst_.push_back(to);
    lowpt_.push_back(0);
    lowpt2_.push_back(0);
    nesting_depth_.push_back(0);
    ref_.push_back(kNone);
    lowpt_edge_.push_back(kNone);
    stack_bottom_.push_back(0);
    out_[at(from)].push_back(id);
    return id;
  }

  void orient(int v) {
    const int e = parent_edge_[at(v)];
    for (int w : adj_[at(v)]) {
      const int undirected = edge_index_[at(v * n_ + w)];
      if (oriented_[at(undirected)]) continue;
      oriented_[at(undirected)] = true;
      const int vw = add_oriented(v, w);
      lowpt_[at(vw)] = height_[at(v)];
      lowpt2_[at(vw)] = height_[at(v)];
      if (height_[at(w)] == kNone) {  // tree edge
        parent_edge_[at(w)] = vw;
        height_[at(w)] = height_[at(v)] + 1;
        orient(w);
      } else {  // back edge
        lowpt_[at(vw)] = height_[at(w)];
      }
      nesting_depth_[at(vw)] = 2 * lowpt_[at(vw)];
      if (lowpt2_[at(vw)] < height_[at(v)]) nesting_depth_[at(vw)] += 1;  // chordal
      if (e != kNone) {
        if (lowpt_[at(vw)] < lowpt_[at(e)]) {
          lowpt2_[at(e)] = std::min(lowpt_[at(e)], lowpt2_[at(vw)]);
          lowpt_[at(e)] = lowpt_[at(vw)];
        } else if (lowpt_[at(vw)] > lowpt_[at(e)]) {
          lowpt2_[at(e)] = std::min(lowpt2_[at(e)], lowpt_[at(vw)]);
        } else {
          lowpt2_[at(e)] = std::min(lowpt2_[at(e)], lowpt2_[at(vw)]);
        }
      }
    }
  }

  [[nodiscard]] bool conflicting(const Interval& i, int b) const {
    return !i.empty() && lowpt_[at(i.high)] > lowpt_[at(b)];
  }

  [[nodiscard]] int lowest(const ConflictPair& p) const {
    if (p.left.empty()) return lowpt_[at(p.right.low)];
    if (p.right.empty()) return lowpt_[at(p.left.low)];
    return std::min(lowpt_[at(p.left.low)], lowpt_[at(p.right.low)]);
  }

  bool test(int v) {
    const int e = parent_edge_[at(v)];
    const auto& out = out_[at(v)];
    for (int ei : out) {
      const int w = dst_[at(ei)];
      stack_bottom_[at(ei)] = static_cast<int>(stack_.size());
      if (ei == parent_edge_[at(w)]) {  // tree edge
        if (!test(w)) return false;
      } else {  // back edge
        lowpt_edge_[at(ei)] = ei;
        ConflictPair p;
        p.right = Interval{ei, ei};
        stack_.push_back(p);
      }
      if (lowpt_[at(ei)] < height_[at(v)]) {  // ei has a return edge
        if (ei == out.front()) {
          lowpt_edge_[at(e)] = lowpt_edge_[at(ei)];
        } else if (!add_constraints(ei, e)) {
          return false;
        }
      }
    }
    if (e != kNone) remove_back_edges(e);
    return true;
  }

  bool add_constraints(int ei, int e) {
    ConflictPair p;
    // Merge return edges of ei into p.right.
    do {
      ConflictPair q = stack_.back();
      stack_.pop_back();
      if (!q.left.empty()) q.swap();
      if (!q.left.empty()) return false;
      if (lowpt_[at(q.right.low)] > lowpt_[at(e)]) {
        if (p.right.empty()) {
          p.right = q.right;
        } else {
          ref_[at(p.right.low)] = q.right.high;
        }
        p.right.low = q.right.low;
      } else {
        ref_[at(q.right.low)] = lowpt_edge_[at(e)];
      }
    } while (static_cast<int>(stack_.size()) != stack_bottom_[at(ei)]);

    // Merge conflicting return edges of earlier siblings into p.left.
    while (!stack_.empty() && (conflicting(stack_.back().left, ei) || conflicting(stack_.back().right, ei))) {
      ConflictPair q = stack_.back();
      stack_.pop_back();
      if (conflicting(q.right, ei)) q.swap();
      if (conflicting(q.right, ei)) return false;
      ref_[at(p.right.low)] = q.right.high;
      if (q.right.low != kNone) p.right.low = q.right.low;
      if (p.left.empty()) {
        p.left = q.left;
      } else {
        ref_[at(p.left.low)] = q.left.high;
      }
      p.left.low = q.left.low;
    }
    if (!(p.left.empty() && p.right.empty())) stack_.push_back(p);
    return true;
  }

  void remove_back_edges(int e) {
    const int u = src_[at(e)];
    while (!stack_.empty() && lowest(stack_.back()) == height_[at(u)]) stack_.pop_back();
    if (!stack_.empty()) {
      ConflictPair p = stack_.back();
      stack_.pop_back();
      while (p.left.high != kNone && dst_[at(p.left.high)] == u) p.left.high = ref_[at(p.left.high)];
      if (p.left.high == kNone && p.left.low != kNone) {
        ref_[at(p.left.low)] = p.right.low;
        p.left.low = kNone;
      }
      while (p.right.high != kNone && dst_[at(p.right.high)] == u) p.right.high = ref_[at(p.right.high)];
      if (p.right.high == kNone && p.right.low != kNone) {
        ref_[at(p.right.low)] = p.left.low;
        p.right.low = kNone;
      }
      stack_.push_back(p);
    }
    if (lowpt_[at(e)] < height_[at(u)] && !stack_.empty()) {
      const int hl = stack_.back().left.high;
      const int hr = stack_.back().right.high;
      if (hl != kNone && (hr == kNone || lowpt_[at(hl)] > lowpt_[at(hr)])) {
        ref_[at(e)] = hl;
      } else {
        ref_[at(e)] = hr;
      }
    }
  }

  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> edge_index_;
  std::vector<bool> oriented_;
  std::vector<int> height_;
  std::vector<int> parent_edge_;
  std::vector<int> roots_;
  std::vector<std::vector<int>> out_;

  // Per oriented edge.
  std::vector<int> src_, dst_, lowpt_, lowpt2_, nesting_depth_, ref_, lowpt_edge_, stack_bottom_;
  std::vector<ConflictPair> stack_;
};

}  // namespace

bool is_planar(const Graph& g) {
  const int n = g.num_nodes();
  const int m = g.num_edges();
  if (n > 2 && m > 3 * n - 6) return false;
  return LeftRightTest(g).run();
}

}  // namespace lgdc
