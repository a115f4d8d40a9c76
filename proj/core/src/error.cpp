#include "dadprune/error.hpp"

namespace dadprune {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::invalid_value: return "invalid_value";
    case Errc::no_foreground: return "no_foreground";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::not_found: return "not_found";
    case Errc::incomplete_window: return "incomplete_window";
    case Errc::incomplete_epoch: return "incomplete_epoch";
    case Errc::sample_set_mismatch: return "sample_set_mismatch";
    case Errc::empty_input: return "empty_input";
    case Errc::size_mismatch: return "size_mismatch";
    case Errc::out_of_range: return "out_of_range";
    case Errc::nan_score: return "nan_score";
    case Errc::empty_subset: return "empty_subset";
    case Errc::duplicate_record: return "duplicate_record";
    case Errc::malformed_record: return "malformed_record";
    case Errc::unmatched_file: return "unmatched_file";
    case Errc::calibration_failed: return "calibration_failed";
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_dtype: return "bad_dtype";
    case Errc::bad_ndim: return "bad_ndim";
    case Errc::truncated_header: return "truncated_header";
    case Errc::zero_dim: return "zero_dim";
    case Errc::dims_overflow: return "dims_overflow";
    case Errc::truncated_payload: return "truncated_payload";
    case Errc::trailing_bytes: return "trailing_bytes";
    case Errc::bad_mask_byte: return "bad_mask_byte";
    case Errc::bad_float_value: return "bad_float_value";
    case Errc::io_failure: return "io_failure";
  }
  return "unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message,
                     std::optional<std::size_t> offset) {
  std::string out(errc_name(code));
  out += ": ";
  out += message;
  if (offset) {
    out += " (at byte offset ";
    out += std::to_string(*offset);
    out += ')';
  }
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message,
             std::optional<std::size_t> byte_offset)
    : std::runtime_error(decorate(code, message, byte_offset)),
      code_(code),
      message_(message),
      offset_(byte_offset) {}

}  // namespace dadprune
