#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxkit/complexes.hpp"

namespace cxkit {

struct SourcePos {
  int line = 1;
  int col = 1;
};

enum class ParseErrorKind { syntax, unknown_symbol, dimension };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, SourcePos pos, const std::string& msg);
  ParseErrorKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return msg_; }

 private:
  ParseErrorKind kind_;
  SourcePos pos_;
  std::string msg_;
};

std::string error_kind_name(ParseErrorKind k);

/// Task argument: a name, an expression, or a parenthesized tuple of either.
struct TaskValue {
  enum class Kind { name, poly, tuple };
  Kind kind = Kind::name;
  std::string name;
  Poly poly;
  std::vector<TaskValue> items;

  std::string str() const;
  std::optional<long> as_int() const;
  std::optional<double> as_double() const;
  friend bool operator==(const TaskValue& a, const TaskValue& b);
};

struct Task {
  std::string command;
  /// Positional arguments first, then key=value pairs in source order.
  std::vector<TaskValue> positional;
  std::vector<std::pair<std::string, TaskValue>> named;
  SourcePos pos;

  const TaskValue* get(const std::string& key) const;
  bool flag(const std::string& name) const;
  friend bool operator==(const Task& a, const Task& b) {
    return a.command == b.command && a.positional == b.positional && a.named == b.named;
  }
};

struct OpDef {
  std::string name;
  OperatorMatrix value;
  SourcePos pos;
};

struct ComplexDef {
  std::string name;
  /// Canonical builder text, e.g. "de_rham(3, hodge)".
  std::string expr;
  Complex value;
  SourcePos pos;
};

struct SpecDocument {
  int space = 0;
  bool time = false;
  std::vector<std::string> params;
  std::vector<OpDef> ops;
  std::vector<ComplexDef> complexes;
  /// Weights per complex name; complexes without an entry use identity weights.
  std::map<std::string, MuSet> mu;
  std::vector<Task> tasks;

  VarListPtr vars() const;
  const OpDef* find_op(const std::string& name) const;
  const ComplexDef* find_complex(const std::string& name) const;
  MuSet weights(const std::string& complex_name) const;
};

bool operator==(const SpecDocument& a, const SpecDocument& b);

/// Parses the DSL. Throws ParseError with line and column.
SpecDocument parse_spec(const std::string& text);
/// Canonical text; parse_spec(print_spec(d)) == d.
std::string print_spec(const SpecDocument& d);

/// Builds a complex from builder text (as after `complex X =`) in a fresh document
/// of the builder's dimension, e.g. "de_rham(3)".
ComplexDef parse_complex_expr(const std::string& text);

}  // namespace cxkit
