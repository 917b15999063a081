#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "catbranch/common.hpp"

namespace catbranch {

inline constexpr int kNoParent = -1;

struct Node {
  int parent = kNoParent;
  double birth = 0.0;
  double death = kInf;  // +inf until the forest is truncated
  std::vector<int> children;
  std::vector<int> label;  // Ulam-Harris word
};

// Rooted, linearly ordered forest. Children are born at the parent's death.
struct FamilyForest {
  std::vector<Node> nodes;
  std::vector<int> roots;
  std::optional<double> height_cap;
};

struct TreePoint {
  int node = 0;
  double offset = 0.0;  // measured from the node's birth
};

struct GhBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> skeleton_estimate;
};

// construction helpers
int add_root(FamilyForest& f, double birth = 0.0, double death = kInf);
int add_child(FamilyForest& f, int parent, double death = kInf);
void assign_labels(FamilyForest& f);
void validate(const FamilyForest& f);

double point_height(const FamilyForest& f, const TreePoint& p);
double height(const FamilyForest& f);
double total_length(const FamilyForest& f);
std::size_t leaf_count(const FamilyForest& f);
bool is_finite(const FamilyForest& f);
// DFS pre-order (roots in order, children in order).
std::vector<int> preorder(const FamilyForest& f);
// Index of the root whose tree contains `node`.
int tree_of(const FamilyForest& f, int node);

double genealogical_distance(const FamilyForest& f, const TreePoint& a, const TreePoint& b);
Eigen::MatrixXd pairwise_distances(const FamilyForest& f, const std::vector<TreePoint>& pts);

FamilyForest truncate(const FamilyForest& f, double t);
std::vector<TreePoint> level_set(const FamilyForest& f, double t);
FamilyForest trim(const FamilyForest& f, double eps);
std::vector<TreePoint> ancestors(const FamilyForest& f, double t, double eps);
GhBounds gh_distance_bounds(const FamilyForest& f1, const FamilyForest& f2);
double i2_length(const FamilyForest& f, double mesh);

// Exact order-preserving isometry test for forests without degree-2 points.
// Unary nodes are merged first, so trimmed forests compare correctly.
bool ordered_isometric(const FamilyForest& a, const FamilyForest& b);
// Merges every node having exactly one child into that child.
FamilyForest merge_unary(const FamilyForest& f);

}  // namespace catbranch
