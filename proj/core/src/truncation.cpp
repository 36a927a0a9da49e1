#include "frameforge/truncation.hpp"

#include <sstream>

namespace frameforge {

std::string to_string(L2Claim claim) {
  switch (claim) {
    case L2Claim::PrHolds: return "pr-holds";
    case L2Claim::PrFails: return "pr-fails";
    case L2Claim::None: return "none";
  }
  throw Error("unreachable claim");
}

L2Claim claim_from_string(const std::string& text) {
  if (text == "pr-holds") return L2Claim::PrHolds;
  if (text == "pr-fails") return L2Claim::PrFails;
  if (text == "none") return L2Claim::None;
  throw FormatError("unknown l2 claim '" + text + "'");
}

std::vector<LevelReport> verify_levels(
    const SequenceFamily& s, const std::vector<std::pair<int, int>>& levels,
    L2Claim expected, const Tolerance& tol, std::uint64_t subset_budget) {
  tol.validate();
  if (levels.empty()) throw UsageError("no truncation levels to verify");
  int prev_n = 0;
  for (const auto& [n, k] : levels) {
    if (n <= prev_n) throw UsageError("levels must be strictly increasing in N");
    if (k < 1) throw UsageError("every level needs at least one member");
    prev_n = n;
  }

  std::vector<LevelReport> out;
  for (const auto& [n, k] : levels) {
    Truncation t = truncate(s, n, k);
    LevelReport rep;
    rep.level_n = n;
    rep.count_k = k;
    rep.zero_vectors = t.zero_vectors;

    CpResult cp = complement_property(t.frame, tol, subset_budget);
    rep.cp = cp.verdict;
    rep.cp_witness = cp.witness;

    PrResult pr = phase_retrieval(t.frame, tol, subset_budget);
    rep.pr = pr.verdict;
    rep.pr_certificate = pr.certificate;

    NrResult nr = norm_retrieval(t.frame, tol, subset_budget);
    rep.nr = nr.verdict;
    rep.nr_certificate = nr.certificate;

    // The finite verdict is exact for the truncated frame; if it contradicts
    // the declared limit claim, note the divergence rather than failing.
    if ((expected == L2Claim::PrHolds && pr.verdict != Verdict::Holds) ||
        (expected == L2Claim::PrFails && pr.verdict != Verdict::Fails)) {
      std::ostringstream note;
      note << "truncation N=" << n << " K=" << k << " gives phase retrieval "
           << to_string(pr.verdict) << " although the declared l2 claim is "
           << to_string(expected)
           << "; finite sections may disagree with the limit";
      rep.divergence_note = note.str();
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<std::pair<int, int>> default_levels(const SequenceFamily& s,
                                                int max_level,
                                                std::int64_t max_scan) {
  if (max_level < 1 || max_scan < 1) throw UsageError("bounds must be positive");
  std::vector<std::pair<int, int>> out;
  for (int n : {4, 6, 8, 12, 16}) {
    if (n > max_level) break;
    // Support bounds are nondecreasing, so the members fitting inside
    // coordinates 1..n form a prefix; K is that prefix length.
    std::int64_t k = 0;
    bool exhausted = false;
    while (true) {
      if (k >= max_scan) {
        throw SubsetBudgetExceeded(
            "support scan passed " + std::to_string(max_scan) +
            " members without clearing level " + std::to_string(n));
      }
      try {
        if (s.at(k + 1).support_bound() > n) break;
      } catch (const GeneratorError&) {
        exhausted = true;
        break;
      }
      ++k;
    }
    if (k > 0) out.emplace_back(n, static_cast<int>(k));
    if (exhausted && n >= max_level) break;
  }
  return out;
}

DeletionResult deletion_test(const Frame& f, int index, const Tolerance& tol,
                             std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  if (index < 1 || index > f.count()) {
    throw IndexOutOfRange("vector index " + std::to_string(index) +
                          " is outside 1.." + std::to_string(f.count()));
  }
  const std::string label = f.label(index);

  Frame g;
  g.dim = f.dim;
  for (int i = 1; i <= f.count(); ++i) {
    if (i == index) continue;
    g.vectors.push_back(f.vectors[static_cast<std::size_t>(i - 1)]);
    if (!f.labels.empty()) g.labels.push_back(f.label(i));
  }
  if (g.vectors.empty()) {
    throw UsageError("cannot delete the only vector of a frame");
  }

  DeletionResult out;
  out.pr = phase_retrieval(g, tol, subset_budget);

  // Deleted pair members carry their own closed-form counterexample:
  // e_k + e_l and e_k - e_l agree in magnitude against every remaining pair.
  std::istringstream in(label);
  std::string word;
  int k = 0;
  int l = 0;
  if (in >> word >> k >> l && word == "pair" && k >= 1 && l >= 1 &&
      k <= f.dim && l <= f.dim && k != l) {
    PairCertificate cert;
    cert.kind = PairCertificate::Kind::PrCounterexample;
    cert.x = Vector::Zero(f.dim);
    cert.y = Vector::Zero(f.dim);
    cert.x(k - 1) = 1.0;
    cert.x(l - 1) = 1.0;
    cert.y(k - 1) = 1.0;
    cert.y(l - 1) = -1.0;
    out.analytic_certificate = cert;
    out.analytic_accepted = certify_counterexample(g, cert, tol);
  }
  return out;
}

}  // namespace frameforge
