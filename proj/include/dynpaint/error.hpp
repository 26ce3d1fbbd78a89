#pragma once

#include <stdexcept>
#include <string>

namespace dynpaint {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ImageError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Normal-map pixel whose decoded vector is (near) zero.
class DegenerateNormalError : public ShapeError {
 public:
  DegenerateNormalError(int x, int y)
      : ShapeError("degenerate normal at pixel (" + std::to_string(x) + ", " +
                   std::to_string(y) + ")"),
        x_(x),
        y_(y) {}
  int x() const { return x_; }
  int y() const { return y_; }

 private:
  int x_;
  int y_;
};

class DegenerateDirectionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Scene-document errors carry the offending key path.
class SceneError : public Error {
 public:
  SceneError(const std::string& key, const std::string& message)
      : Error(message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ParseError : public SceneError {
 public:
  ParseError(int line, int column, const std::string& message)
      : SceneError("", "parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownKeyError : public SceneError {
 public:
  explicit UnknownKeyError(const std::string& key)
      : SceneError(key, "unknown key \"" + key + "\"") {}
};

class MissingKeyError : public SceneError {
 public:
  explicit MissingKeyError(const std::string& key)
      : SceneError(key, "missing required key \"" + key + "\"") {}
};

class RangeError : public SceneError {
 public:
  RangeError(const std::string& key, const std::string& what)
      : SceneError(key, "value of \"" + key + "\" out of range: " + what) {}
};

}  // namespace dynpaint
