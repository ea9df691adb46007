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
#ifndef OUTPAINT_ERRORS_HPP
#define OUTPAINT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace outpaint {

/// Base class for every error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A file is missing, unreadable, or unwritable.
struct FileError : Error {
    using Error::Error;
};

/// A file exists but is not in a supported format.
struct FormatError : Error {
    using Error::Error;
};

/// A file is in a supported format but its contents are corrupt,
/// or paired data sets do not line up.
struct DataError : Error {
    using Error::Error;
};

/// Tensor/image dimensions do not match what an operation requires.
struct ShapeError : Error {
    using Error::Error;
};

/// An argument or configuration value is out of its valid range.
struct ValueError : Error {
    using Error::Error;
};

/// A computation produced or received a non-finite value.
struct NumericError : Error {
    using Error::Error;
};

} // namespace outpaint

#endif
