#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pht/preprocess/image.hpp"

namespace pht::preprocess {

// PNG codec used for the blob object store. Encoding always writes 8-bit
// RGB; decoding accepts grayscale/palette/alpha inputs and normalizes them
// to 8-bit RGB. Throws DataError on undecodable bytes.
std::vector<std::uint8_t> encode_png(const RawImage& image);
RawImage decode_png(std::span<const std::uint8_t> bytes);

} // namespace pht::preprocess
