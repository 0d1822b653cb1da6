#pragma once

// Structured ideals of R_n built from a handful of atoms, constructive
// membership certificates, and the two congruence identities behind the
// IG_{m^2} -> J_m reduction.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metab/laurent.hpp"

namespace metab {

enum class AtomKind {
  Aug,      // augmentation ideal, generated by all sigma_i
  AugTail,  // sum over r > u of sigma_r R
  Sig,      // sigma_i^k R
  O,        // m R
  U,        // mu_{r,m} R
};

struct Atom {
  AtomKind kind;
  int a = 0;  // AugTail: u;  Sig: i;  O: m;  U: r
  int b = 0;  // Sig: k;      U: m

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A product of atoms; the empty product is the unit ideal R.
using IdealProduct = std::vector<Atom>;

/// Finite sum of products of atoms, kept in a normal form: atoms in each
/// product are merged (sig(i)^k sig(i)^l = sig(i)^{k+l}, O(a) O(b) = O(ab))
/// and sorted, products are sorted and deduplicated. Structural equality on
/// the normal form is what operator== compares.
class IdealExpr {
 public:
  IdealExpr() = default;  // the zero ideal
  static IdealExpr full();
  static IdealExpr atom(Atom a);
  static IdealExpr aug() { return atom({AtomKind::Aug}); }
  static IdealExpr aug_tail(int u) { return atom({AtomKind::AugTail, u}); }
  static IdealExpr sig(int i, int k = 1) { return atom({AtomKind::Sig, i, k}); }
  static IdealExpr O(int m) { return atom({AtomKind::O, m}); }
  static IdealExpr U(int r, int m) { return atom({AtomKind::U, r, m}); }

  /// H_{n,m} = sum_r sigma_r mu_{r,m} R + m R
  static IdealExpr H(int n, int m);
  /// J_m = sum_r sigma_r^3 U_r + A^2 O_m + A O_m^2
  static IdealExpr J(int n, int m);
  /// The tail-restricted ideal J~_{m,u,v}.
  static IdealExpr J_tilde(int n, int m, int u, int v);
  /// J_{m,u,v}: as J~_{m,u,v} with the full augmentation ideal in front.
  static IdealExpr J_uv(int n, int m, int u, int v);

  const std::vector<IdealProduct>& summands() const { return sums_; }
  bool is_zero() const { return sums_.empty(); }

  friend IdealExpr operator+(const IdealExpr& a, const IdealExpr& b);
  friend IdealExpr operator*(const IdealExpr& a, const IdealExpr& b);
  friend bool operator==(const IdealExpr&, const IdealExpr&) = default;

  /// Text in the descriptor syntax, e.g. "sig(1)*sig(2)*U(2,2) + sig(1)*O(2)".
  std::string to_string() const;
  /// Parses the descriptor syntax: H(m), O(m), U(r,m), A, Atail(u),
  /// sig(i)^k, J(m), Jt(m,u,v), Juv(m,u,v), R, with + * and parentheses.
  static IdealExpr parse(std::string_view text, int n);

  /// Generators of one summand as polynomials in R_n (deduplicated).
  static std::vector<LaurentPoly> generators(const Ring& ring, const IdealProduct& p);
  /// Generators of the whole ideal, tagged with their summand index.
  std::vector<std::pair<std::size_t, LaurentPoly>> generators(const Ring& ring) const;

  /// True if every summand contains a factor lying inside the augmentation
  /// ideal, so the whole ideal does.
  bool inside_augmentation() const;

 private:
  void normalize();
  std::vector<IdealProduct> sums_;
};

struct CertificateTerm {
  LaurentPoly generator;
  LaurentPoly cofactor;
};

struct MembershipCertificate {
  LaurentPoly target;
  IdealExpr ideal;
  std::vector<CertificateTerm> terms;

  /// sum of generator * cofactor
  LaurentPoly expand() const;
  /// Exact replay: the expansion equals the target.
  bool replays() const { return expand() == target; }
  /// Replay plus: every generator is a generator of some summand of ideal.
  bool valid(const Ring& ring) const;
  /// Cofactor of a given generator (zero if absent).
  LaurentPoly cofactor_of(const LaurentPoly& generator) const;
};

bool in_tail_span(const LaurentPoly& f, IndexSet s);
bool in_augmentation(const LaurentPoly& f);

bool in_H(const LaurentPoly& f, int m);
/// Certificate over the generators x_1^m - 1, ..., x_n^m - 1, m in that
/// order; nullopt iff f is not in H_{n,m}.
std::optional<MembershipCertificate> decompose_H(const LaurentPoly& f, int m);

struct TailSplit {
  LaurentPoly tail;  // in sum_{r > u} sigma_r R
  LaurentPoly head;  // free of x_{u+1}, ..., x_n
};
TailSplit split_tail(const LaurentPoly& f, int u);
/// The individual quotients: f = sum_{r>u} sigma_r q_r + head.
std::vector<LaurentPoly> tail_quotients(const LaurentPoly& f, int u, LaurentPoly* head);

/// x_i^{m^2} - 1 over sigma_i^3 mu_{i,m}, sigma_i^2 m, sigma_i m^2.
MembershipCertificate power_congruence(const Ring& ring, int i, int m);
/// mu_{v,m^2} over sigma_v^2 mu_{v,m}, sigma_v m, m^2.
MembershipCertificate mu_square_congruence(const Ring& ring, int v, int m);

/// Rewrites an element of H_{m^2} into J_m + O_{m^2}, and an element of
/// H_{m^2} cap A into J_m. nullopt if f is not in H_{m^2}.
std::optional<MembershipCertificate> rewrite_into_J(const Ring& ring, const LaurentPoly& f, int m);

enum class OracleStatus { Found, Excluded, Unknown };

struct StructuredOptions {
  int rounds = 3;  // number of window enlargements after the bounding box
};

struct StructuredResult {
  OracleStatus status = OracleStatus::Unknown;
  std::optional<MembershipCertificate> certificate;
  int window_margin = 0;  // margin at which the certificate was found
  std::string reason;
};

/// Bounded search: shifts of each generator that fit the window, and an
/// integer linear system over the window's monomials. Unknown is not "no".
StructuredResult in_structured(const Ring& ring, const LaurentPoly& f, const IdealExpr& ideal,
                               StructuredOptions opts = {});

}  // namespace metab
