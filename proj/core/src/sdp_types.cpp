#include "ltac/sdp.hpp"

#include <algorithm>

namespace ltac {

void SdpCoeff::add(int block, int i, int j, double v) {
  if (v == 0.0) return;
  if (i > j) std::swap(i, j);
  entries.push_back({block, i, j, v});
}

void SdpCoeff::add_free(int index, double v) {
  if (v == 0.0) return;
  free_entries.emplace_back(index, v);
}

void SdpCoeff::sort() {
  std::sort(entries.begin(), entries.end(), [](const SdpEntry& a, const SdpEntry& b) {
    return std::tie(a.block, a.i, a.j) < std::tie(b.block, b.i, b.j);
  });
  std::sort(free_entries.begin(), free_entries.end());
}

void SdpProblem::check_shapes() const {
  auto check_coeff = [&](const SdpCoeff& c, const char* what) {
    for (const auto& e : c.entries) {
      if (e.block < 0 || e.block >= static_cast<int>(psd_blocks.size()))
        throw SdpError(std::string(what) + ": block index out of range");
      int s = psd_blocks[e.block];
      if (e.i < 0 || e.j < e.i || e.j >= s)
        throw SdpError(std::string(what) + ": entry index out of range");
    }
    for (const auto& [idx, v] : c.free_entries) {
      (void)v;
      if (idx < 0 || idx >= free_size)
        throw SdpError(std::string(what) + ": free index out of range");
    }
  };
  for (int s : psd_blocks)
    if (s <= 0) throw SdpError("SdpProblem: nonpositive block size");
  if (free_size < 0) throw SdpError("SdpProblem: negative free block size");
  if (b.size() != static_cast<Eigen::Index>(constraints.size()))
    throw SdpError("SdpProblem: b length mismatch");
  check_coeff(objective, "objective");
  for (const auto& a : constraints) check_coeff(a, "constraint");
}

bool SdpProblem::operator==(const SdpProblem& other) const {
  if (psd_blocks != other.psd_blocks || free_size != other.free_size) return false;
  if (!(objective == other.objective)) return false;
  if (!(constraints == other.constraints)) return false;
  if (b.size() != other.b.size()) return false;
  for (Eigen::Index i = 0; i < b.size(); ++i)
    if (b[i] != other.b[i]) return false;
  return true;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::primal_infeasible: return "primal-infeasible";
    case SdpStatus::dual_infeasible: return "dual-infeasible";
    case SdpStatus::max_iters: return "max-iters";
    case SdpStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace ltac
