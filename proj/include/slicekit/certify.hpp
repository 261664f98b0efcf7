#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slicekit/cover.hpp"
#include "slicekit/knotexpr.hpp"
#include "slicekit/metabolizer.hpp"
#include "slicekit/obstruction.hpp"
#include "slicekit/primegen.hpp"

namespace slicekit {

// One connected summand of the assembled branched cover. The homology block
// occupies generators [offset, offset + size) of the assembled group.
// Companion matrices are stored with the orientation flags already applied.
struct CopyAssembly {
  std::string label;
  bool reversed = false;
  bool mirrored = false;
  // Orientation relative to the recognized twisted-band model, after folding
  // the stored matrix's own shape into the term flags.
  bool net_reversed = false;
  bool net_mirrored = false;
  std::optional<int> rn;  // model parameter when the pattern is recognized
  int offset = 0;
  int size = 0;
  SeifertMatrix pattern;  // effective pattern matrix
  std::vector<Companion> companions;
};

// Direct sum of the per-summand covers: factors, deck action and linking form
// are concatenated copy-major. `group` is consumed by the metabolizer and
// character machinery, which only reads group data.
struct AssembledCover {
  int q = 3;
  CoverHomology group;
  std::vector<CopyAssembly> copies;
};

AssembledCover assemble_cover(const KnotExpr& e, int q);

std::string describe_expr(const KnotExpr& e);

struct KillRecord {
  std::string killed_by = "none";  // cg-discriminant | cg-signature | ledger-d | none
  nlohmann::ordered_json detail;
  std::vector<std::string> citations;
};

struct MetabolizerVerdict {
  Metabolizer m;
  std::string family = "untagged";
  KillRecord kill;
};

struct ObstructOptions {
  long long budget = 100000000;
  int workers = 1;
  bool swap_roles = false;  // swap the band-role assignment of the eigenlines
  Z coefficient_bound = 2;  // largest |a_n| obstruct_combination will expand
};

struct ObstructionCertificate {
  std::string knot;
  int q = 3;
  std::string verdict;  // "obstructed" or "inconclusive[: reason]"
  nlohmann::ordered_json homology;
  long long total_metabolizers = 0;
  std::vector<MetabolizerVerdict> sweep;
  nlohmann::ordered_json gate;  // combination only: signature hypothesis checks
  std::vector<ObstructionCertificate> components;  // combination only
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const;
};

// Sweeps every equivariant metabolizer of the q-fold cover of K, trying the
// discriminant shadow, then the signature shadow, then the ledger. Verdict is
// "obstructed" only when every metabolizer carries a kill.
ObstructionCertificate obstruct_single(const KnotExpr& k, int q, const DLedger& ledger,
                                       const ObstructOptions& opt = {});

// Per nonzero coefficient a_n, builds a_n (K_n # -r(K_n)) with the given band
// companions, checks the signature hypothesis for each prime of the pair, and
// runs the metabolizer sweep on that primary component alone. Obstructed only
// when every component is.
ObstructionCertificate obstruct_combination(const PrimePairFamily& family,
                                            const std::vector<Z>& coeffs,
                                            const SeifertMatrix& j_alpha,
                                            const SeifertMatrix& j_beta, const DLedger& ledger,
                                            const ObstructOptions& opt = {});

struct ReductionReport {
  nlohmann::ordered_json report;
  bool all_equal = true;
};

// Deletes every summand with trivial Alexander polynomial and re-derives
// homology, linking, deck action, metabolizer counts, signature samples and
// discriminant data, recording value-for-value equality with the original.
ReductionReport verify_reduction_lemma(const KnotExpr& k, int q = 3,
                                       const ObstructOptions& opt = {});

}  // namespace slicekit
