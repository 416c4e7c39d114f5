#pragma once

#include <string>
#include <vector>

namespace realize {

// 1-based position of a token or construct in a contract file.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 1;
};

enum class DiagCode {
  LexError,
  SyntaxError,
  DuplicateSection,
  DuplicateVariable,
  UnknownVariable,
  SortMismatch,
  IllegalTagInSection,
  NonlinearMultiplication,
};

const char* to_string(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string message;
  SourceSpan span;

  std::string render() const;
};

std::string render_diagnostics(const std::vector<Diagnostic>& diags);

}  // namespace realize
