#ifndef HCC_ERRORS_HPP
#define HCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hcc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lossy codec was handed NaN/Inf; lossy paths must not carry non-finite data.
class NonFiniteInputError : public Error {
 public:
  explicit NonFiniteInputError(const std::string& msg) : Error(msg) {}
};

// Payload is truncated, has a bad block count, or fails header validation.
class CorruptPayloadError : public Error {
 public:
  explicit CorruptPayloadError(const std::string& msg) : Error(msg) {}
};

// wire_size_bytes() was called for a codec whose output size is data-dependent.
class DataDependentSizeError : public Error {
 public:
  explicit DataDependentSizeError(const std::string& msg) : Error(msg) {}
};

// Collective input length does not match the communicator requirements.
class BadChunkingError : public Error {
 public:
  explicit BadChunkingError(const std::string& msg) : Error(msg) {}
};

// dp*pp*tp does not factor the world size, or degrees are invalid.
class BadLayoutError : public Error {
 public:
  explicit BadLayoutError(const std::string& msg) : Error(msg) {}
};

// Scheme parameters violate a scheme builder precondition.
class InvalidSchemeError : public Error {
 public:
  explicit InvalidSchemeError(const std::string& msg) : Error(msg) {}
};

// Configuration file is invalid; `field` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& msg)
      : Error("config field '" + field + "': " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace hcc

#endif
