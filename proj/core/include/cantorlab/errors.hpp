#pragma once

#include <stdexcept>
#include <string>

namespace cantorlab {

// Exit-code mapping used by the CLI: 0 ok, 2 config, 3 model, 4 resource guard,
// 5 internal.
enum class ErrorCode : int { Config = 2, Model = 3, Resource = 4, Internal = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCode::Config, w) {}
};

// A structurally valid config describing a model that violates its own
// invariants (e.g. child lengths not summing below the parent).
struct ModelInvalid : Error {
    explicit ModelInvalid(const std::string& w) : Error(ErrorCode::Model, w) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& w) : Error(ErrorCode::Resource, w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorCode::Config, w) {}
};

struct UnsupportedModel : Error {
    explicit UnsupportedModel(const std::string& w) : Error(ErrorCode::Config, w) {}
};

struct UnsupportedPrefix : Error {
    explicit UnsupportedPrefix(const std::string& w) : Error(ErrorCode::Config, w) {}
};

struct DepthExceeded : Error {
    explicit DepthExceeded(const std::string& w) : Error(ErrorCode::Resource, w) {}
};

struct DeltaTooLarge : Error {
    explicit DeltaTooLarge(const std::string& w) : Error(ErrorCode::Config, w) {}
};

struct PrecondFailed : Error {
    explicit PrecondFailed(const std::string& w) : Error(ErrorCode::Config, w) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& w) : Error(ErrorCode::Internal, w) {}
};

}  // namespace cantorlab
