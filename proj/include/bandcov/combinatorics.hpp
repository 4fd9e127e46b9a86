#pragma once

#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bandcov {

using BigInt = boost::multiprecision::cpp_int;

// C(n, k); zero when n < 0, k < 0 or n < k.
BigInt binomial(long long n, long long k);

// Count of ordered ways to write n as a sum of k parts, each in [1, m].
// Closed form: sum_j (-1)^j C(k,j) C(n - j*m - 1, k - 1).
BigInt count_restricted_compositions(long long n, long long k, long long m);

// Visits every such composition in lexicographic order.  `budget` caps both
// k*m and the number of emitted tuples; throws BudgetExceeded beyond it.
void enumerate_restricted_compositions(
    long long n, int k, long long m,
    const std::function<void(const std::vector<int>&)>& visit,
    long long budget = 10'000'000);

// Rooted tree with ordered children, stored as child counts in depth-first
// preorder.  Vertices at even depth carry row labels, vertices at odd depth
// carry sample labels when the tree is read as a closed alternating walk.
struct PlaneTree {
  std::vector<int> child_counts;

  int edge_count() const;
  int row_vertices() const;     // even-depth vertices, root included
  int sample_vertices() const;  // odd-depth vertices
  // Row vertices beyond the root; the geometric weight exponent.
  int excess() const { return row_vertices() - 1; }
  // Degrees of the sample vertices, sorted descending.
  std::vector<int> degree_profile() const;

  bool operator==(const PlaneTree&) const = default;
};

// True when `child_counts` is a valid preorder encoding of a rooted tree.
bool is_valid_preorder(const std::vector<int>& child_counts);

// Closed alternating walk visiting the whole tree: 2l+1 labels starting and
// ending at the root, where row and sample labels are numbered 1,2,... by
// first appearance.
std::vector<int> canonical_walk(const PlaneTree& t);

// Rebuilds the tree whose edges are the distinct steps of the walk.  Accepts
// 2l labels (closure implicit) or 2l+1 labels ending at the start.  Labels at
// even positions live on the row line, odd positions on the sample line.
// Throws ParityError for malformed input and NotATreeError when the distinct
// steps contain a cycle.
PlaneTree tree_from_walk(const std::vector<int>& labels);

// All plane trees with l edges (Catalan(l) of them), deepest-first order.
// Throws CapExceeded when l > cap.
void enumerate_plane_trees(int l, const std::function<void(const PlaneTree&)>& visit,
                           int cap = 14);
std::vector<PlaneTree> enumerate_canonical_trees(int l, int cap = 14);

// Plane trees with l edges and r+1 row vertices.
BigInt narayana_count(int l, int r);

// Labelled census: walks on l-edge trees with distinct row labels from [p]
// and distinct sample labels from [n], no adjacency restriction.
BigInt count_ordered_trees(long long p, long long n, int l);

// {"child_counts":[...],"r":...,"profile":[...]}
std::string tree_to_json_line(const PlaneTree& t);

}  // namespace bandcov
