#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dadprune {

enum class Errc {
  shape_mismatch,
  invalid_value,
  no_foreground,
  insufficient_data,
  not_found,
  incomplete_window,
  incomplete_epoch,
  sample_set_mismatch,
  empty_input,
  size_mismatch,
  out_of_range,
  nan_score,
  empty_subset,
  duplicate_record,
  malformed_record,
  unmatched_file,
  calibration_failed,
  // DDT1 decoding
  bad_magic,
  bad_dtype,
  bad_ndim,
  truncated_header,
  zero_dim,
  dims_overflow,
  truncated_payload,
  trailing_bytes,
  bad_mask_byte,
  bad_float_value,
  io_failure,
};

std::string_view errc_name(Errc code);

/// Every failure the engine reports. `code()` is stable and meant to be
/// matched on; `what()` carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> byte_offset = std::nullopt);

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix and offset suffix.
  const std::string& message() const noexcept { return message_; }
  /// Set for decoding errors that can point at a position in the input.
  std::optional<std::size_t> byte_offset() const noexcept { return offset_; }

 private:
  Errc code_;
  std::string message_;
  std::optional<std::size_t> offset_;
};

}  // namespace dadprune
