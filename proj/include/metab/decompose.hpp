#pragma once

// Factoring an element of IG_{n,m^2} (n >= 4) into witnessed elements of
// IA_n^m and elements of ISL_{n-1,u}(sigma_u H_{n,m}), one row at a time.
//
// At stage u the bar projection sends x_{u+1}, ..., x_n to 1. A stage takes
// alpha to gamma * alpha * B with B a product of witnessed elements, and
// leaves a matrix whose bar projection is the identity.

#include <string>
#include <vector>

#include "metab/generators.hpp"
#include "metab/ideal.hpp"

namespace metab {

class StageError : public std::runtime_error {
 public:
  StageError(int stage, const std::string& what)
      : std::runtime_error("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

struct EntryJReport {
  bool ok = false;
  std::vector<std::string> diagnostics;
  /// One rewriting certificate per nonzero entry of A, row-major.
  std::vector<MembershipCertificate> rewrites;
};

/// Gate for the decomposition: alpha is IA, lies in IG_{m^2}, every entry of
/// A rewrites into J_m, and det(alpha) = prod x_r^{m^2 s_r}.
EntryJReport check_entry_J(const IAMatrix& alpha, int m);

struct StageState {
  int u = 0;
  IAMatrix current;
  /// Right multipliers applied during this stage, in order.
  std::vector<Certified> right;
};

/// Projection x_{u+1}, ..., x_n -> 1 of the matrix.
Matrix stage_bar(const Matrix& a, int u);

/// Clears the columns v < u of row u down to sigma_u^2 H. Returns delta with
/// the state advanced to alpha * delta^-1.
Certified reduce_row_left(StageState& state, int m);
/// Clears the columns v > u of row u down to sigma_u^2 H; same convention.
Certified reduce_row_right(StageState& state, int m);

struct FinishResult {
  IAMatrix gamma;
  IAMatrix gamma_inv;  // the ISL factor itself
  Certified beta;
};
/// Produces gamma in ISL_{n-1,u}(sigma_u H_m) and witnessed beta with
/// bar(gamma * alpha * beta) = I; the state is advanced accordingly.
FinishResult finish_row(StageState& state, int m);

enum class FactorTag { IAM, ISL };

struct CertificateFactor {
  FactorTag tag = FactorTag::IAM;
  int u = 0;  // ISL only
  IAMatrix matrix;
  PowerWitness witness;  // IAM only
  IAMatrix inverse;      // ISL only; proves the factor is invertible
};

struct DecompositionCertificate {
  int n = 0;
  int m = 0;
  IAMatrix input;
  bool input_in_IG = false;  // whether the input passed check_entry_J
  std::vector<CertificateFactor> factors;

  IAMatrix product() const;
};

struct DecomposeOptions {
  /// Reject inputs outside IG_{m^2}. When false, any IA matrix whose
  /// determinant is prod x_r^{m^2 s_r} is attempted; the stages check
  /// everything they rely on, so a returned certificate is valid either way.
  bool require_IG = false;
};

/// Full decomposition; throws std::invalid_argument for n < 4 or a failed
/// gate, StageError if a stage check fails.
DecompositionCertificate decompose(const IAMatrix& alpha, int m, DecomposeOptions opts = {});

struct CheckOutcome {
  bool ok = false;
  int factor_index = -1;  // offending factor, -1 if not attributable
  std::string message;
};

/// Independent verification: every IAM witness replays with modulus m,
/// every ISL(u) factor times its recorded inverse is I and passes in_ISL,
/// and the ordered product is the input. Factor matrices are not assumed
/// invertible; the witness or the inverse establishes that.
CheckOutcome check_certificate(const DecompositionCertificate& c);

}  // namespace metab
