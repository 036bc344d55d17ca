#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmaxent/operator_core.hpp"

namespace qmaxent {

enum class PartitionScheme { Ring4, Line3, Line4 };

/// Labeled site regions for conditional-mutual-information computations.
/// Ring4 splits a periodic chain into contiguous quarters A, B1, C, B2 with
/// B = B1 u B2; Line3 is quarter/half/quarter on an open chain; Line4 is
/// four quarters A, B, C, D with D traced out.
struct RegionPartition {
  PartitionScheme scheme = PartitionScheme::Ring4;
  int n_sites = 0;
  std::map<std::string, std::vector<int>> blocks;

  std::vector<int> region(const std::string& label) const;
  std::vector<int> region_a() const { return region("A"); }
  std::vector<int> region_b() const;  // B1 u B2 for Ring4
  std::vector<int> region_c() const { return region("C"); }
  std::vector<int> abc_sites() const;  // sorted union of A, B, C

  void validate() const;
};

RegionPartition default_partition(int n, PartitionScheme scheme);

const char* scheme_name(PartitionScheme scheme);
PartitionScheme scheme_from_name(const std::string& name);

}  // namespace qmaxent
