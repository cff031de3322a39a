#pragma once

#include <optional>
#include <vector>

#include "tpa/lattice/int_matrix.hpp"

namespace tpa::dynamics {
class SplittingFrame;
}

namespace tpa::lattice {

struct CenterScanResult {
  double c_estimate = 0;       // min |n^c| |n|_1^(r + delta)
  std::vector<long> argmin;    // canonical: first nonzero entry positive
  double center_norm = 0;      // |n^c| at the argmin
  double r = 0;
  double delta = 0;
  long radius = 0;
  long candidates_checked = 0; // exact evaluations after screening
};

// Exact minimum over 0 != n in Z^N with |n|_1 <= radius of |n^c| |n|_1^(r+delta),
// |n^c| measured in the adapted center norm. r defaults to N/2 - 1.
// Branch and bound: all but two coordinates are enumerated, the remaining
// pair is found by 2-D Fincke-Pohst around the target in a reduced basis.
// Ties go to the lexicographically smallest canonical n.
CenterScanResult center_projection_scan(const ToralMatrix& a, long radius, double delta,
                                        std::optional<double> r = std::nullopt);
CenterScanResult center_projection_scan(const dynamics::SplittingFrame& frame, long radius, double delta,
                                        std::optional<double> r = std::nullopt);

// Exhaustive reference (cost grows like radius^N); used for checks.
CenterScanResult center_projection_scan_bruteforce(const dynamics::SplittingFrame& frame, long radius, double delta,
                                                   std::optional<double> r = std::nullopt);

}  // namespace tpa::lattice
