#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gridshare {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One broken invariant, located by a dotted field path such as
/// `bess_units[1].soc_min`.
struct Finding {
  std::string path;
  std::string reason;
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Finding> findings);
  const std::vector<Finding>& findings() const noexcept { return findings_; }

private:
  std::vector<Finding> findings_;
};

/// The optimization model has no feasible point. `row_name` names the first
/// constraint left violated at the end of phase one.
class InfeasibleError : public Error {
public:
  InfeasibleError(std::string row_name, const std::string& what)
      : Error(what), row_name_(std::move(row_name)) {}
  const std::string& row_name() const noexcept { return row_name_; }

private:
  std::string row_name_;
};

class TimeLimitError : public Error {
public:
  using Error::Error;
};

class EnumerationCapError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace gridshare
