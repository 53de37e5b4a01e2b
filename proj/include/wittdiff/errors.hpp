#pragma once

#include <stdexcept>
#include <string>

namespace wittdiff {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mixing elements of different rings, invalid constructions, violated invariants.
struct StructuralError : Error {
  explicit StructuralError(const std::string& msg) : Error(msg) {}
};

// Polynomial / job document syntax errors, with position info when known.
struct ParseError : Error {
  int line = 0, col = 0;
  ParseError(const std::string& msg, int l, int c)
      : Error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(c) + ")"),
        line(l), col(c) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Presentation is not flat over W2 (p-torsion detected), or a flat certificate is missing.
struct FlatnessError : Error {
  explicit FlatnessError(const std::string& msg) : Error(msg) {}
};

// Chart transitions fail invertibility / cocycle / smoothness checks.
struct GluingError : Error {
  explicit GluingError(const std::string& msg) : Error(msg) {}
};

// An endomorphism is not a valid Frobenius lift (inexact division by p, relation not killed).
struct LiftError : Error {
  explicit LiftError(const std::string& msg) : Error(msg) {}
};

// Derivation data violating a relation of its source algebra.
struct DerivationError : Error {
  explicit DerivationError(const std::string& msg) : Error(msg) {}
};

// lift_derivation asked to lift along a map shape it does not support.
struct UnsupportedMapError : Error {
  explicit UnsupportedMapError(const std::string& msg) : Error(msg) {}
};

// Localizing at an element that is zero in the mod-p reduction.
struct DegenerateLocalizationError : Error {
  explicit DegenerateLocalizationError(const std::string& msg) : Error(msg) {}
};

// Bad user input at the CLI / job level.
struct InputError : Error {
  explicit InputError(const std::string& msg) : Error(msg) {}
};

}  // namespace wittdiff
