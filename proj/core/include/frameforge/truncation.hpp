#pragma once

// Evaluate l2 claims at increasing finite truncation levels. Finite verdicts
// are exact statements about the truncated frames; when they contradict the
// declared l2 claim the report carries a divergence note instead of failing,
// because finite truncations genuinely can disagree with the infinite
// statement (the pairs family fails every finite complement-property check
// while the full family does phase retrieval).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frameforge/analyzer.hpp"
#include "frameforge/model.hpp"

namespace frameforge {

// What the source theorem asserts about the full l2 family. Tags are inputs;
// nothing here infers them from finite evidence.
enum class L2Claim { PrHolds, PrFails, None };

std::string to_string(L2Claim claim);
L2Claim claim_from_string(const std::string& text);  // FormatError on unknown

struct LevelReport {
  int level_n = 0;
  int count_k = 0;
  Verdict cp = Verdict::Holds;
  Verdict pr = Verdict::Holds;
  Verdict nr = Verdict::Holds;
  std::optional<PartitionWitness> cp_witness;
  std::optional<PairCertificate> pr_certificate;
  std::optional<PairCertificate> nr_certificate;
  std::vector<int> zero_vectors;   // 1-based, kept in place
  std::string divergence_note;     // empty when finite verdict matches claim
};

// Runs the exact CP/PR/NR deciders on truncate(s, N, K) for each level.
// Levels must be nonempty and strictly increasing in N.
std::vector<LevelReport> verify_levels(
    const SequenceFamily& s, const std::vector<std::pair<int, int>>& levels,
    L2Claim expected, const Tolerance& tol,
    std::uint64_t subset_budget = kDefaultSubsetBudget);

// Default schedule N in {4, 6, 8, 12, 16} with K = all members supported
// within N (relies on nondecreasing support bounds; scan capped at
// max_scan members).
std::vector<std::pair<int, int>> default_levels(const SequenceFamily& s,
                                                int max_level = 16,
                                                std::int64_t max_scan = 100000);

struct DeletionResult {
  PrResult pr;  // phase retrieval of the frame with the vector removed
  // For members labeled "pair k l": the closed-form certificate
  // x = e_k + e_l, y = e_k - e_l, and whether it was accepted against the
  // remaining frame.
  std::optional<PairCertificate> analytic_certificate;
  std::optional<bool> analytic_accepted;
};

// Removes 1-based vector `index` and reruns phase retrieval.
// Throws IndexOutOfRange.
DeletionResult deletion_test(const Frame& f, int index, const Tolerance& tol,
                             std::uint64_t subset_budget = kDefaultSubsetBudget);

}  // namespace frameforge
