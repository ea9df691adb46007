/*
 * Copyright 2026 The outpaint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef OUTPAINT_IMAGE_IO_HPP
#define OUTPAINT_IMAGE_IO_HPP

#include <string>

#include "outpaint/image.hpp"

namespace outpaint {

/// Loads an 8-bit PNG, PPM (P6) or PGM (P5) image; the format is detected
/// from the file contents, not the extension. Intensities are scaled from
/// [0,255] to [0,1]; grayscale sources give channels=1, color gives 3.
/// Throws FileError (missing file), FormatError (unsupported format),
/// or DataError (corrupt header/payload).
ImageTensor load_image(const std::string& path);

/// Saves with 8-bit quantization round(i*255). The format follows the
/// extension: .png, .ppm (3-channel), .pgm (1-channel).
/// Throws FileError on unwritable paths, FormatError on unknown extensions,
/// ValueError when channel count and extension disagree.
void save_image(const ImageTensor& img, const std::string& path);

/// round(i*255) clamped to [0,255]; the quantizer save_image applies.
std::uint8_t quantize_byte(double intensity);

} // namespace outpaint

#endif
