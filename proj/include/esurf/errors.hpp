#pragma once

#include <stdexcept>
#include <string>

namespace esurf {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable corpus input (parse and alignment failures).
class CorpusError : public Error {
 public:
  using Error::Error;
};

/// Unusable data: single-class training sets, empty corpora, bad parameters.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Model file problems: magic/version mismatch, truncation, write failures.
class ModelIoError : public Error {
 public:
  using Error::Error;
};

/// Prediction/gold mismatch during evaluation.
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace esurf
