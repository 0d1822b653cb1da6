#pragma once

// Text form of witnesses and decomposition certificates (JSON), and the
// file-level checker that re-verifies a certificate without the run that
// produced it.

#include <string>

#include "metab/decompose.hpp"

namespace metab {

class CertificateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string witness_to_text(const PowerWitness& w);
PowerWitness witness_from_text(const std::string& text, int n);

std::string matrix_to_text(const Matrix& m);
Matrix matrix_from_text(const std::string& text, int n);

/// Serialized certificate with ISL membership evidence and a checksum.
std::string certificate_to_text(const DecompositionCertificate& c);
/// Parses a certificate; structural problems throw CertificateFormatError.
DecompositionCertificate certificate_from_text(const std::string& text);

struct FileCheckResult {
  bool ok = false;
  bool format_error = false;
  int factor_index = -1;
  std::string message;
};

/// Parses, checks the checksum and the ISL evidence records, then runs
/// check_certificate on the parsed content.
FileCheckResult check_certificate_text(const std::string& text);

}  // namespace metab
