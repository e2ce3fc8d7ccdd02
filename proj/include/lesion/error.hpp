#pragma once

#include <stdexcept>
#include <string>

namespace lesion {

/// Two masks or images that must share dimensions do not.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation that needs foreground pixels got an empty mask.
class EmptyMaskError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Base for failures inside the image-processing stages.
class ProcessingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoLesionFound : public ProcessingError {
public:
    using ProcessingError::ProcessingError;
};

class DegenerateContour : public ProcessingError {
public:
    using ProcessingError::ProcessingError;
};

class SegmentationDisagreement : public ProcessingError {
public:
    using ProcessingError::ProcessingError;
};

class DegenerateHairMask : public ProcessingError {
public:
    using ProcessingError::ProcessingError;
};

class InsufficientSupport : public ProcessingError {
public:
    using ProcessingError::ProcessingError;
};

/// Bad training input (single class, ragged vectors, ...).
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent files: manifests, configs, models, images.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lesion
