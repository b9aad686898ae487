#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace curvedwave {

/// Raised when an argument lies outside the domain of an operation
/// (out-of-range chart coordinate, point on a singular locus, |x| >= 1 for a
/// non-terminating series, ...). The message names the offending quantity.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed suite configuration. `path` is the file (or "<inline>") and
/// `field` the JSON pointer of the bad entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, std::string field, const std::string& what)
        : std::runtime_error(path + ": " + field + ": " + what),
          path_(std::move(path)),
          field_(std::move(field)) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string path_;
    std::string field_;
};

}  // namespace curvedwave
