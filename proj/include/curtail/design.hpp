#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace curtail {

/// Error requirements of a single-arm binary-outcome trial. `p0` is the
/// largest uninteresting response rate, `p1` the smallest worthwhile one.
struct DesignParams {
  double alpha = 0.05;
  double beta = 0.2;
  double p0 = 0.1;
  double p1 = 0.3;

  /// Throws std::domain_error unless 0 < p0 < p1 < 1 and alpha, beta in (0,1).
  void validate() const;
};

enum class FamilyKind : std::uint8_t {
  SingleStage,
  Simon,
  SimonGo,
  NSC,
  SC,
  MStage,
  BlockSC,
};

struct DesignFamily {
  FamilyKind kind = FamilyKind::SingleStage;
  int block_size = 1;  // BlockSC only

  static DesignFamily single_stage() { return {FamilyKind::SingleStage, 1}; }
  static DesignFamily simon() { return {FamilyKind::Simon, 1}; }
  static DesignFamily simon_go() { return {FamilyKind::SimonGo, 1}; }
  static DesignFamily nsc() { return {FamilyKind::NSC, 1}; }
  static DesignFamily sc() { return {FamilyKind::SC, 1}; }
  static DesignFamily m_stage() { return {FamilyKind::MStage, 1}; }
  static DesignFamily block(int size);

  /// Interim analysis at n1 (with r1, and e1 for SimonGo).
  [[nodiscard]] bool two_stage() const;
  /// Stopping after every participant once the final decision is certain.
  /// Block designs stop (for any reason) only at block ends, so are not.
  [[nodiscard]] bool curtailed() const;
  /// Conditional-power thresholds take part in stopping.
  [[nodiscard]] bool stochastic() const;
  /// Whether stochastic stopping is evaluated after `m` participants.
  [[nodiscard]] bool monitors(int m, int n) const;

  /// Short machine name: single, simon, simongo, nsc, sc, mstage, block4.
  [[nodiscard]] std::string name() const;
  /// Inverse of name(); also accepts "block:<B>". Throws std::invalid_argument.
  static DesignFamily parse(std::string_view text);

  friend bool operator==(const DesignFamily& a, const DesignFamily& b) {
    if (a.kind != b.kind) return false;
    return a.kind != FamilyKind::BlockSC || a.block_size == b.block_size;
  }
};

/// One concrete design. A trial is a success iff responses exceed `r` by the
/// end; `n` is the maximum sample size.
struct DesignRealisation {
  DesignFamily family;
  int r = 0;
  int n = 1;
  std::optional<int> r1;
  std::optional<int> e1;
  std::optional<int> n1;
  double theta_f = 0.0;
  double theta_e = 1.0;

  /// Throws std::domain_error when boundaries or thresholds are inconsistent
  /// with the family.
  void validate() const;

  /// The same boundaries with thresholds reset to (0, 1).
  [[nodiscard]] DesignRealisation without_thresholds() const;

  [[nodiscard]] std::string describe() const;
};

DesignRealisation make_single_stage(int r, int n);
DesignRealisation make_simon(int r1, int n1, int r, int n);
DesignRealisation make_simon_go(int r1, int e1, int n1, int r, int n);
DesignRealisation make_nsc(int r1, int n1, int r, int n);
DesignRealisation make_sc(int r1, int n1, int r, int n, double theta_f, double theta_e);
DesignRealisation make_m_stage(int r, int n, double theta_f, double theta_e);
DesignRealisation make_block(int block_size, int r, int n, double theta_f, double theta_e);

/// (S_m, m): responses so far and participants so far.
struct LatticePoint {
  int s = 0;
  int m = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

enum class PointStatus : std::uint8_t { Continue, StopGo, StopNoGo };

std::string_view to_string(PointStatus status);

/// Non-stochastic stopping classification. Stochastic stopping is layered on
/// top by the conditional-power engine. Throws std::domain_error for points
/// outside 0 <= s <= m <= n.
PointStatus base_status(const DesignRealisation& design, LatticePoint point);

}  // namespace curtail
