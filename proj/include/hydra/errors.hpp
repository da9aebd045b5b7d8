#pragma once

#include <stdexcept>
#include <string>

namespace hydra {

enum class Errc {
  length_mismatch,
  parse_error,
  degenerate_labels,
  series_too_short,
  degenerate_kernel,
  bank_mismatch,
  non_finite_input,
  insufficient_data,
  no_common_datasets,
  io_error,
  config_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::length_mismatch:    return "LengthMismatch";
    case Errc::parse_error:        return "ParseError";
    case Errc::degenerate_labels:  return "DegenerateLabels";
    case Errc::series_too_short:   return "SeriesTooShort";
    case Errc::degenerate_kernel:  return "DegenerateKernel";
    case Errc::bank_mismatch:      return "BankMismatch";
    case Errc::non_finite_input:   return "NonFiniteInput";
    case Errc::insufficient_data:  return "InsufficientData";
    case Errc::no_common_datasets: return "NoCommonDatasets";
    case Errc::io_error:           return "IoError";
    case Errc::config_error:       return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  // Exit-code class for the CLI: configuration problems exit 3, input/data
  // problems exit 2. InsufficientData counts as configuration (the requested
  // protocol cannot be satisfied by the given split sizes).
  bool is_config_error() const noexcept {
    return code_ == Errc::config_error || code_ == Errc::insufficient_data;
  }

 private:
  Errc code_;
};

}  // namespace hydra
