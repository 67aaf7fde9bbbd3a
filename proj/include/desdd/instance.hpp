#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace desdd {

/// Base exception for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AttributeKind { numeric, nominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  /// Category labels for nominal attributes; values are encoded as their index.
  std::vector<std::string> values;

  std::size_t numValues() const { return values.size(); }
  bool isNominal() const { return kind == AttributeKind::nominal; }

  static Attribute numeric(std::string name) { return {std::move(name), AttributeKind::numeric, {}}; }
  static Attribute nominal(std::string name, std::vector<std::string> values) {
    return {std::move(name), AttributeKind::nominal, std::move(values)};
  }
};

/// Describes the instances a stream emits: attribute layout and class labels.
struct Schema {
  std::vector<Attribute> attributes;
  std::vector<std::string> classNames;

  std::size_t dimension() const { return attributes.size(); }
  int numClasses() const { return static_cast<int>(classNames.size()); }

  /// Builds a schema of `d` numeric attributes named x0.. and `classes` classes named 0..
  static Schema numericOnly(std::size_t d, int classes);
};

/// One labeled observation. `index` is the time step within its stream.
struct Instance {
  std::vector<double> features;
  int label = 0;
  std::uint64_t index = 0;
};

}  // namespace desdd
