#pragma once

#include <string>
#include <string_view>

namespace causekit {

// ASCII case folding. Bytes outside A-Z pass through unchanged, so non-ASCII
// text is preserved byte-for-byte (no locale-dependent behavior).
std::string fold_ascii(std::string_view s);

// Shortest decimal form that parses back to the same double. Used everywhere
// a report writes a floating-point value, so identical inputs give identical
// output bytes.
std::string format_double(double v);

// FNV-1a over a byte string; used for corpus digests in model files.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace causekit
