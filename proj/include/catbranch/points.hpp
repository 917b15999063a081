#pragma once

#include <vector>

#include <Eigen/Dense>

#include "catbranch/contour.hpp"
#include "catbranch/paths.hpp"
#include "catbranch/rtree.hpp"

namespace catbranch {

struct GenealogyPoint {
  double ell = 0.0;
  double h = 0.0;
  bool separator = false;  // neighbours lie in different trees
};

struct GenealogicalPointProcess {
  double t = 0.0;
  double spacing = 1.0;
  std::size_t zero_marks = 0;
  std::vector<GenealogyPoint> points;
};

struct DepthEntry {
  double index = 0.0;
  double depth = 0.0;
};

GenealogicalPointProcess point_process_at_level(const FamilyForest& f, double t, double spacing);
// (k+1)x(k+1) distances of the level population, max rule over consecutive pairs.
Eigen::MatrixXd reconstruct_distance_matrix(const GenealogicalPointProcess& p);

// Exact contour: one entry per excursion below t that starts and ends at t.
// index = i * spacing for the i-th such excursion (i from 1).
std::vector<DepthEntry> excursion_depths_below_level(const Excursion& e, double t, double spacing = 1.0);

struct DepthOptions {
  double depth_floor = -1.0;   // <0: 10 * the path's rms step
  double depth_shift = 0.0;    // added to every depth (discrete-monitoring correction)
  double band = 0.0;           // local-time half width; 0 -> 5 * rms step
  double ell_scale = 0.5;      // index = ell_scale * semimartingale local time
};

// Sampled path: index = ell_scale * running local time at t when the excursion starts.
std::vector<DepthEntry> excursion_depths_below_level(const DiffusionPath& path, double t,
                                                     const DepthOptions& opt = {});

}  // namespace catbranch
