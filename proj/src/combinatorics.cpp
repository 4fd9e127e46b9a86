#include "bandcov/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "bandcov/errors.hpp"

namespace bandcov {

BigInt binomial(long long n, long long k) {
  if (n < 0 || k < 0 || n < k) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: r is C(n-k+i, i) at this point
  }
  return r;
}

BigInt count_restricted_compositions(long long n, long long k, long long m) {
  if (k < 1 || m < 1) throw std::invalid_argument("compositions need k >= 1 and m >= 1");
  BigInt total = 0;
  for (long long j = 0; j <= k; ++j) {
    BigInt term = binomial(k, j) * binomial(n - j * m - 1, k - 1);
    if (j % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

namespace {

void compositions_rec(long long remaining, int pos, int k, long long m,
                      std::vector<int>& parts, long long& emitted, long long budget,
                      const std::function<void(const std::vector<int>&)>& visit) {
  int left = k - pos;
  if (left == 0) {
    if (remaining == 0) {
      if (++emitted > budget) throw BudgetExceeded("composition enumeration exceeded budget");
      visit(parts);
    }
    return;
  }
  // each of the remaining parts is in [1, m]
  long long lo = std::max<long long>(1, remaining - (left - 1) * m);
  long long hi = std::min<long long>(m, remaining - (left - 1));
  for (long long v = lo; v <= hi; ++v) {
    parts[pos] = static_cast<int>(v);
    compositions_rec(remaining - v, pos + 1, k, m, parts, emitted, budget, visit);
  }
}

}  // namespace

void enumerate_restricted_compositions(
    long long n, int k, long long m,
    const std::function<void(const std::vector<int>&)>& visit, long long budget) {
  if (k < 1 || m < 1) throw std::invalid_argument("compositions need k >= 1 and m >= 1");
  if (static_cast<long long>(k) * m > budget)
    throw BudgetExceeded("composition enumeration: k*m exceeds budget");
  if (n < k || n > static_cast<long long>(k) * m) return;
  std::vector<int> parts(static_cast<size_t>(k));
  long long emitted = 0;
  compositions_rec(n, 0, k, m, parts, emitted, budget, visit);
}

bool is_valid_preorder(const std::vector<int>& child_counts) {
  if (child_counts.empty()) return false;
  long long open = 1;
  for (size_t v = 0; v < child_counts.size(); ++v) {
    if (child_counts[v] < 0) return false;
    if (open <= 0) return false;  // ran out of slots before consuming all vertices
    open += child_counts[v] - 1;
  }
  return open == 0;
}

namespace {

// parent of each vertex (preorder indices); assumes valid preorder
std::vector<int> parents_of(const std::vector<int>& cc) {
  std::vector<int> parent(cc.size(), -1);
  std::vector<std::pair<int, int>> st;  // vertex, unfilled child slots
  st.emplace_back(0, cc[0]);
  for (size_t v = 1; v < cc.size(); ++v) {
    while (st.back().second == 0) st.pop_back();
    parent[v] = st.back().first;
    --st.back().second;
    st.emplace_back(static_cast<int>(v), cc[v]);
  }
  return parent;
}

std::vector<int> depths_of(const std::vector<int>& cc) {
  std::vector<int> parent = parents_of(cc);
  std::vector<int> depth(cc.size(), 0);
  for (size_t v = 1; v < cc.size(); ++v) depth[v] = depth[parent[v]] + 1;
  return depth;
}

void require_tree(const PlaneTree& t) {
  if (!is_valid_preorder(t.child_counts))
    throw std::invalid_argument("child_counts is not a preorder tree encoding");
}

}  // namespace

int PlaneTree::edge_count() const {
  return static_cast<int>(child_counts.size()) - 1;
}

int PlaneTree::row_vertices() const {
  require_tree(*this);
  std::vector<int> depth = depths_of(child_counts);
  int c = 0;
  for (int d : depth) c += (d % 2 == 0);
  return c;
}

int PlaneTree::sample_vertices() const {
  require_tree(*this);
  std::vector<int> depth = depths_of(child_counts);
  int c = 0;
  for (int d : depth) c += (d % 2 == 1);
  return c;
}

std::vector<int> PlaneTree::degree_profile() const {
  require_tree(*this);
  std::vector<int> depth = depths_of(child_counts);
  std::vector<int> prof;
  for (size_t v = 0; v < child_counts.size(); ++v)
    if (depth[v] % 2 == 1) prof.push_back(child_counts[v] + 1);
  std::sort(prof.rbegin(), prof.rend());
  return prof;
}

std::vector<int> canonical_walk(const PlaneTree& t) {
  require_tree(t);
  const std::vector<int>& cc = t.child_counts;
  std::vector<int> parent = parents_of(cc);
  std::vector<std::vector<int>> ch(cc.size());
  for (size_t v = 1; v < cc.size(); ++v) ch[parent[v]].push_back(static_cast<int>(v));

  std::vector<int> depth = depths_of(cc);
  std::vector<int> label(cc.size());
  int next_row = 1, next_sample = 1;
  for (size_t v = 0; v < cc.size(); ++v)
    label[v] = (depth[v] % 2 == 0) ? next_row++ : next_sample++;

  std::vector<int> walk;
  walk.reserve(2 * cc.size() - 1);
  // iterative Euler tour: emit vertex, descend, emit again after each child
  std::vector<std::pair<int, size_t>> st;
  walk.push_back(label[0]);
  st.emplace_back(0, 0);
  while (!st.empty()) {
    auto& [v, idx] = st.back();
    if (idx < ch[v].size()) {
      int c = ch[v][idx++];
      walk.push_back(label[c]);
      st.emplace_back(c, 0);
    } else {
      st.pop_back();
      if (!st.empty()) walk.push_back(label[st.back().first]);
    }
  }
  return walk;
}

PlaneTree tree_from_walk(const std::vector<int>& labels) {
  std::vector<int> w = labels;
  if (w.size() < 2) throw ParityError("walk needs at least two labels");
  if (w.size() % 2 == 1) {
    if (w.front() != w.back())
      throw ParityError("odd-length walk must end where it starts");
    w.pop_back();
  }

  // vertex ids; row and sample labels live in separate namespaces
  std::map<std::pair<int, int>, int> ids;
  std::vector<int> vw(w.size());
  for (size_t s = 0; s < w.size(); ++s) {
    auto key = std::make_pair(static_cast<int>(s % 2), w[s]);
    vw[s] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
  }
  int nv = static_cast<int>(ids.size());

  std::set<std::pair<int, int>> edges;
  for (size_t s = 0; s < vw.size(); ++s) {
    int a = vw[s], b = vw[(s + 1) % vw.size()];
    edges.insert(std::minmax(a, b));
  }
  // a walk is connected, so tree-ness is just the edge count
  if (static_cast<int>(edges.size()) != nv - 1)
    throw NotATreeError("distinct walk steps contain a cycle");

  // children in first-visit order
  std::vector<int> parent(nv, -2);
  std::vector<std::vector<int>> ch(nv);
  parent[vw[0]] = -1;
  int cur = vw[0];
  for (size_t s = 1; s < vw.size(); ++s) {
    int v = vw[s];
    if (parent[v] == -2) {
      parent[v] = cur;
      ch[cur].push_back(v);
    } else if (v != parent[cur] && parent[v] != cur) {
      throw NotATreeError("walk steps off the discovered tree");
    }
    cur = v;
  }

  PlaneTree t;
  t.child_counts.reserve(nv);
  // preorder with ordered children
  std::vector<std::pair<int, size_t>> stack{{vw[0], 0}};
  t.child_counts.push_back(static_cast<int>(ch[vw[0]].size()));
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    if (idx < ch[v].size()) {
      int c = ch[v][idx++];
      t.child_counts.push_back(static_cast<int>(ch[c].size()));
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
    }
  }
  return t;
}

namespace {

struct TreeGen {
  int l;
  std::vector<int> cc;
  std::vector<int> open;  // stack of preorder indices on the current path
  const std::function<void(const PlaneTree&)>* visit;
  PlaneTree scratch;

  void rec(int ups, int downs) {
    if (ups == l && downs == l) {
      scratch.child_counts = cc;
      (*visit)(scratch);
      return;
    }
    if (ups < l) {
      int parent = open.back();
      ++cc[parent];
      cc.push_back(0);
      open.push_back(static_cast<int>(cc.size()) - 1);
      rec(ups + 1, downs);
      open.pop_back();
      cc.pop_back();
      --cc[parent];
    }
    if (downs < ups && open.size() > 1) {
      int v = open.back();
      open.pop_back();
      rec(ups, downs + 1);
      open.push_back(v);
    }
  }
};

}  // namespace

void enumerate_plane_trees(int l, const std::function<void(const PlaneTree&)>& visit,
                           int cap) {
  if (l < 1) throw std::invalid_argument("tree enumeration needs l >= 1");
  if (l > cap) throw CapExceeded("tree enumeration: l exceeds cap");
  TreeGen g;
  g.l = l;
  g.cc = {0};
  g.open = {0};
  g.visit = &visit;
  g.rec(0, 0);
}

std::vector<PlaneTree> enumerate_canonical_trees(int l, int cap) {
  std::vector<PlaneTree> out;
  enumerate_plane_trees(l, [&](const PlaneTree& t) { out.push_back(t); }, cap);
  return out;
}

BigInt narayana_count(int l, int r) {
  if (l < 1 || r < 0 || r > l - 1) throw std::invalid_argument("narayana_count: need l >= 1, 0 <= r <= l-1");
  return binomial(l, r) * binomial(l - 1, r) / (r + 1);
}

namespace {

BigInt falling(long long x, int j) {
  BigInt r = 1;
  for (int i = 0; i < j; ++i) r *= x - i;
  return r;
}

}  // namespace

BigInt count_ordered_trees(long long p, long long n, int l) {
  if (l < 1 || p < 0 || n < 0) throw std::invalid_argument("count_ordered_trees: bad arguments");
  BigInt total = 0;
  for (int r = 0; r <= l - 1; ++r)
    total += narayana_count(l, r) * falling(p, r + 1) * falling(n, l - r);
  return total;
}

std::string tree_to_json_line(const PlaneTree& t) {
  std::ostringstream os;
  os << "{\"child_counts\":[";
  for (size_t i = 0; i < t.child_counts.size(); ++i) {
    if (i) os << ',';
    os << t.child_counts[i];
  }
  os << "],\"r\":" << t.excess() << ",\"profile\":[";
  std::vector<int> prof = t.degree_profile();
  for (size_t i = 0; i < prof.size(); ++i) {
    if (i) os << ',';
    os << prof[i];
  }
  os << "]}";
  return os.str();
}

}  // namespace bandcov
