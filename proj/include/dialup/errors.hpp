#pragma once

#include <stdexcept>
#include <string>

namespace dialup {

// Precondition / configuration errors. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Errors raised by malformed data encountered mid-run. CLI exit code 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class MalformedLine : public DataError {
 public:
  MalformedLine(std::size_t line_no, const std::string& what)
      : DataError("line " + std::to_string(line_no) + ": " + what), line_no(line_no) {}
  std::size_t line_no;
};

class UnmappedPhoneme : public DataError {
 public:
  explicit UnmappedPhoneme(const std::string& symbol)
      : DataError("no inverse table entry for phoneme '" + symbol + "'"), symbol(symbol) {}
  std::string symbol;
};

class UnknownPhonemeSymbol : public DataError {
 public:
  explicit UnknownPhonemeSymbol(const std::string& symbol)
      : DataError("phoneme symbol '" + symbol + "' has no known feature bundle"), symbol(symbol) {}
  std::string symbol;
};

class PhonemeNotInInventory : public ValidationError {
 public:
  explicit PhonemeNotInInventory(const std::string& symbol)
      : ValidationError("phoneme '" + symbol + "' is not in the inventory"), symbol(symbol) {}
  std::string symbol;
};

class ResourceMismatch : public ValidationError {
 public:
  explicit ResourceMismatch(const std::string& what) : ValidationError(what) {}
};

class EmptyCorpus : public ValidationError {
 public:
  EmptyCorpus() : ValidationError("corpus is empty") {}
};

class EmptyVocabulary : public ValidationError {
 public:
  EmptyVocabulary() : ValidationError("vocabulary is empty") {}
};

class EmptyBitext : public ValidationError {
 public:
  EmptyBitext() : ValidationError("bitext is empty") {}
};

class TooFewLines : public ValidationError {
 public:
  TooFewLines(std::size_t n, std::size_t k)
      : ValidationError("cannot split " + std::to_string(n) + " lines into " +
                        std::to_string(k) + " chunks"),
        n(n), k(k) {}
  std::size_t n, k;
};

class LengthMismatch : public ValidationError {
 public:
  LengthMismatch(std::size_t lhs, std::size_t rhs)
      : ValidationError("line counts differ: " + std::to_string(lhs) + " vs " +
                        std::to_string(rhs)) {}
};

class BothEmpty : public ValidationError {
 public:
  BothEmpty() : ValidationError("both strings are empty after whitespace removal") {}
};

}  // namespace dialup
