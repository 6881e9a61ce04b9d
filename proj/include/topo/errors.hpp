#pragma once

#include <stdexcept>
#include <string>

namespace topo {

/// Distinct I/O failure categories; the CLI maps these to user messages.
enum class IoErrorKind {
  missing_file,
  unsupported_format,
  corrupt_data,
  write_failure,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorKind kind, std::string path, const std::string& message)
      : std::runtime_error(message + " (" + path + ")"),
        kind_(kind),
        path_(std::move(path)) {}

  IoErrorKind kind() const { return kind_; }
  const std::string& path() const { return path_; }

 private:
  IoErrorKind kind_;
  std::string path_;
};

}  // namespace topo
