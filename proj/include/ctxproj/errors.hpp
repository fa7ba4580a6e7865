#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxproj {

// Error taxonomy shared by every module. All types derive from Error so
// callers (the CLI in particular) can map "any data/usage problem" to a
// single exit path while tests still match the precise condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCorpusError : public Error {
 public:
  EmptyCorpusError() : Error("corpus contains no tokens") {}
};

class UnknownTokenError : public Error {
 public:
  explicit UnknownTokenError(const std::string& token)
      : Error("unknown token: \"" + token + "\""), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRangeError : public Error {
 public:
  IndexOutOfRangeError(std::size_t index, std::size_t bound)
      : Error("index " + std::to_string(index) + " out of range [0, " +
              std::to_string(bound) + ")") {}
};

class NegativeScoreError : public Error {
 public:
  using Error::Error;
};

class NonFiniteInputError : public Error {
 public:
  using Error::Error;
};

class NotAPermutationError : public Error {
 public:
  using Error::Error;
};

class RankExceededError : public Error {
 public:
  using Error::Error;
};

class EmptyTargetsError : public Error {
 public:
  EmptyTargetsError() : Error("fit requires at least one target") {}
};

}  // namespace ctxproj
