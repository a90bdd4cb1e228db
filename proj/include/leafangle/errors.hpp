#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leafangle {

/// Base of every error the pipeline raises. `kind()` is a stable tag used in
/// rejects files and exit-code decisions.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error("ParseError", message) {}
};

/// A config value breaks an invariant; `key()` names the offending key.
class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& message)
        : Error("ValidationError", message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Required field missing or of the wrong type; `field()` is a JSON-pointer-ish path.
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& message)
        : Error("SchemaError", message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& message) : Error("GeometryError", message) {}
};

class DecodeError : public Error {
public:
    explicit DecodeError(const std::string& message) : Error("DecodeError", message) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& message) : Error("ShapeError", message) {}
};

class MetricError : public Error {
public:
    explicit MetricError(const std::string& message) : Error("MetricError", message) {}
};

class UndefinedSimilarityError : public Error {
public:
    explicit UndefinedSimilarityError(const std::string& message)
        : Error("UndefinedSimilarityError", message) {}
};

class JoinError : public Error {
public:
    JoinError(std::size_t left_count, std::size_t right_count, const std::string& message)
        : Error("JoinError", message), left_count_(left_count), right_count_(right_count) {}

    std::size_t left_count() const noexcept { return left_count_; }
    std::size_t right_count() const noexcept { return right_count_; }

private:
    std::size_t left_count_;
    std::size_t right_count_;
};

class GenerationError : public Error {
public:
    explicit GenerationError(const std::string& message) : Error("GenerationError", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("IoError", message) {}
};

/// No instance survives the score floor (or the mask is empty).
class NoInstanceError : public Error {
public:
    NoInstanceError(std::string image_id, const std::string& message)
        : Error("NoInstance", message), image_id_(std::move(image_id)) {}

    const std::string& image_id() const noexcept { return image_id_; }

private:
    std::string image_id_;
};

/// No segment left to estimate from, either none detected or all filtered.
class NoLeafLinesError : public Error {
public:
    NoLeafLinesError(std::string image_id, const std::string& message)
        : Error("NoLeafLines", message), image_id_(std::move(image_id)) {}

    const std::string& image_id() const noexcept { return image_id_; }

private:
    std::string image_id_;
};

}  // namespace leafangle
