#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgraph {

/// Base class for every error raised by the library.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (bad probability, size mismatch, ...).
class domain_error : public error
{
public:
  using error::error;
};

/// A graph element that is not present in the graph.
class not_found_error : public error
{
public:
  using error::error;
};

class overflow_error : public error
{
public:
  using error::error;
};

/// An operation needed data that is not there (empty table, no halting machine).
class no_data_error : public error
{
public:
  using error::error;
};

/// Malformed text input. `line()` is 1-based; 0 means "end of input".
class parse_error : public error
{
public:
  parse_error(const std::string& what, std::size_t line)
    : error("line " + std::to_string(line) + ": " + what)
    , line_(line)
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// CTM table file errors.
class checksum_error : public error
{
public:
  using error::error;
};

class version_error : public error
{
public:
  using error::error;
};

class malformed_row_error : public parse_error
{
public:
  using parse_error::parse_error;
};

} // namespace kgraph
