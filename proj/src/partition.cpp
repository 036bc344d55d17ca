#include "qmaxent/partition.hpp"

#include <algorithm>
#include <set>

namespace qmaxent {

namespace {

std::vector<int> range_block(int lo, int hi) {  // [lo, hi)
  std::vector<int> out;
  for (int i = lo; i < hi; ++i) out.push_back(i);
  return out;
}

bool adjacent_on_chain(int a, int b, int n, bool ring) {
  if (std::abs(a - b) == 1) return true;
  return ring && ((a == 0 && b == n - 1) || (b == 0 && a == n - 1));
}

}  // namespace

std::vector<int> RegionPartition::region(const std::string& label) const {
  const auto it = blocks.find(label);
  if (it == blocks.end()) throw std::invalid_argument("partition has no block '" + label + "'");
  return it->second;
}

std::vector<int> RegionPartition::region_b() const {
  if (blocks.count("B")) return region("B");
  std::vector<int> b = region("B1");
  const auto b2 = region("B2");
  b.insert(b.end(), b2.begin(), b2.end());
  std::sort(b.begin(), b.end());
  return b;
}

std::vector<int> RegionPartition::abc_sites() const {
  std::vector<int> all = region_a();
  const auto b = region_b();
  const auto c = region_c();
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  return all;
}

void RegionPartition::validate() const {
  if (n_sites <= 0) throw std::invalid_argument("partition needs a positive site count");
  std::set<int> used;
  for (const auto& [label, sites] : blocks) {
    (void)label;
    for (int s : sites) {
      if (s < 0 || s >= n_sites) throw std::invalid_argument("partition site out of range");
      if (!used.insert(s).second) throw std::invalid_argument("partition blocks overlap");
    }
  }
  const auto a = region_a();
  const auto c = region_c();
  region_b();  // presence check
  if (a.empty() || c.empty() || region_b().empty())
    throw std::invalid_argument("regions A, B, C must be nonempty");

  const bool covers_all = static_cast<int>(used.size()) == n_sites;
  switch (scheme) {
    case PartitionScheme::Ring4:
    case PartitionScheme::Line3:
      if (!covers_all) throw std::invalid_argument("scheme requires A,B,C to cover all sites");
      break;
    case PartitionScheme::Line4:
      if (!blocks.count("D") || region("D").empty())
        throw std::invalid_argument("line4 requires a nonempty traced block D");
      break;
  }

  // A and C must be disconnected under the declared chain locality.
  const bool ring = scheme == PartitionScheme::Ring4;
  for (int sa : a)
    for (int sc : c)
      if (sa == sc || adjacent_on_chain(sa, sc, n_sites, ring))
        throw std::invalid_argument("regions A and C are adjacent under the declared locality");
}

RegionPartition default_partition(int n, PartitionScheme scheme) {
  if (n < 4 || n % 4 != 0)
    throw std::invalid_argument("default partitions need a site count divisible by 4");
  const int q = n / 4;
  RegionPartition p;
  p.scheme = scheme;
  p.n_sites = n;
  switch (scheme) {
    case PartitionScheme::Ring4:
      p.blocks["A"] = range_block(0, q);
      p.blocks["B1"] = range_block(q, 2 * q);
      p.blocks["C"] = range_block(2 * q, 3 * q);
      p.blocks["B2"] = range_block(3 * q, 4 * q);
      break;
    case PartitionScheme::Line3:
      p.blocks["A"] = range_block(0, q);
      p.blocks["B"] = range_block(q, 3 * q);
      p.blocks["C"] = range_block(3 * q, 4 * q);
      break;
    case PartitionScheme::Line4:
      p.blocks["A"] = range_block(0, q);
      p.blocks["B"] = range_block(q, 2 * q);
      p.blocks["C"] = range_block(2 * q, 3 * q);
      p.blocks["D"] = range_block(3 * q, 4 * q);
      break;
  }
  p.validate();
  return p;
}

const char* scheme_name(PartitionScheme scheme) {
  switch (scheme) {
    case PartitionScheme::Ring4: return "ring4";
    case PartitionScheme::Line3: return "line3";
    case PartitionScheme::Line4: return "line4";
  }
  return "?";
}

PartitionScheme scheme_from_name(const std::string& name) {
  if (name == "ring4") return PartitionScheme::Ring4;
  if (name == "line3") return PartitionScheme::Line3;
  if (name == "line4") return PartitionScheme::Line4;
  throw std::invalid_argument("unknown partition scheme '" + name + "'");
}

}  // namespace qmaxent
