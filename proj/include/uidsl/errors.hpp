#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uidsl {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- dsl_core ----

class JsonSyntaxError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    SchemaError(const std::string& msg, std::string pointer = "")
        : Error(pointer.empty() ? msg : msg + " (at " + pointer + ")"),
          pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

class MultipleRootsError : public Error {
public:
    explicit MultipleRootsError(std::size_t count)
        : Error("document must have a single root node, found " + std::to_string(count)),
          count_(count) {}
    std::size_t count() const { return count_; }

private:
    std::size_t count_;
};

// ---- dsl_stream ----

class StreamSyntaxError : public Error {
public:
    StreamSyntaxError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class TruncatedStreamError : public Error {
public:
    TruncatedStreamError(const std::string& msg, std::string open_node)
        : Error(msg), open_node_(std::move(open_node)) {}
    // Description of the deepest node still open when input ended.
    const std::string& open_node() const { return open_node_; }

private:
    std::string open_node_;
};

// ---- binding ----

class PathSyntaxError : public Error {
public:
    PathSyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class MissingPathError : public Error {
public:
    using Error::Error;
};

class BindTypeError : public Error {
public:
    using Error::Error;
};

// ---- renderer ----

class VoidElementChildrenError : public Error {
public:
    using Error::Error;
};

// ---- metrics ----

class EmptyGroundTruthError : public Error {
public:
    using Error::Error;
};

class EmptyPredictionError : public Error {
public:
    using Error::Error;
};

// ---- preference ----

class RangeError : public Error {
public:
    using Error::Error;
};

class EmptySequenceError : public Error {
public:
    using Error::Error;
};

// ---- dataprep ----

class DegenerateImageError : public Error {
public:
    using Error::Error;
};

class BoxTokenSyntaxError : public Error {
public:
    BoxTokenSyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class MissingSlotError : public Error {
public:
    using Error::Error;
};

}  // namespace uidsl
