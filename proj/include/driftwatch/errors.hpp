#pragma once

#include <stdexcept>
#include <string>

namespace driftwatch {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyInput : public Error {
public:
  explicit EmptyInput(const std::string& what = "empty input") : Error(what) {}
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

class AllValuesIdentical : public Error {
public:
  explicit AllValuesIdentical(const std::string& what = "all values identical, zero-width range")
      : Error(what) {}
};

class LabelMismatch : public Error {
public:
  explicit LabelMismatch(const std::string& what = "histogram labels do not match") : Error(what) {}
};

class ZeroBin : public Error {
public:
  explicit ZeroBin(const std::string& what = "zero-frequency bin, smooth the histogram first")
      : Error(what) {}
};

class LengthMismatch : public Error {
public:
  explicit LengthMismatch(const std::string& what = "inputs differ in length") : Error(what) {}
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class SingleClass : public Error {
public:
  explicit SingleClass(const std::string& what = "need at least two classes") : Error(what) {}
};

class SchemaMismatch : public Error {
public:
  using Error::Error;
};

class IoFailure : public Error {
public:
  using Error::Error;
};

class CorruptSnapshot : public Error {
public:
  using Error::Error;
};

class VersionUnsupported : public Error {
public:
  using Error::Error;
};

class ParseFailure : public Error {
public:
  using Error::Error;
};

class UnknownMetric : public Error {
public:
  using Error::Error;
};

}  // namespace driftwatch
