// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace radiogrid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid building footprints, walls, grids or scenarios.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Shape mismatches and invalid feature-grid contents.
class GridError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid metric inputs (length mismatch, empty input, zero reference).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Failures reading or writing dataset directories and sample files.
class DatasetError : public Error {
 public:
  using Error::Error;
};

class ChecksumError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class VersionError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class TruncatedFileError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class FormatError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

}  // namespace radiogrid
