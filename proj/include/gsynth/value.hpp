#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <variant>

#include "gsynth/errors.hpp"

namespace gsynth {

using BigInt = boost::multiprecision::cpp_int;

enum class SortKind { Int, Bool, BitVec };

/// An SMT sort: Int, Bool, or a fixed-width bit-vector.
struct Sort {
  SortKind kind = SortKind::Int;
  unsigned width = 0; // BitVec only

  static Sort integer() { return {SortKind::Int, 0}; }
  static Sort boolean() { return {SortKind::Bool, 0}; }
  static Sort bitvec(unsigned w) {
    if (w < 1 || w > 64)
      throw UnsupportedFeature("bit-vector width must be in [1,64], got " + std::to_string(w));
    return {SortKind::BitVec, w};
  }

  bool operator==(const Sort &o) const = default;

  bool is_int() const { return kind == SortKind::Int; }
  bool is_bool() const { return kind == SortKind::Bool; }
  bool is_bv() const { return kind == SortKind::BitVec; }

  std::string name() const {
    switch (kind) {
    case SortKind::Int:
      return "Int";
    case SortKind::Bool:
      return "Bool";
    case SortKind::BitVec:
      return "(_ BitVec " + std::to_string(width) + ")";
    }
    return "?";
  }
};

/// Fixed-width bit-vector payload; bits beyond `width` are always zero.
struct BvVal {
  unsigned width = 1;
  uint64_t bits = 0;

  static uint64_t mask(unsigned width) {
    return width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
  }

  BvVal() = default;
  BvVal(unsigned w, uint64_t b) : width(w), bits(b & mask(w)) {}

  bool operator==(const BvVal &o) const = default;

  bool sign_bit() const { return (bits >> (width - 1)) & 1; }

  /// Hex when the width is a nibble multiple, binary otherwise.
  std::string to_string() const {
    if (width % 4 == 0) {
      std::string s = "#x";
      for (int i = static_cast<int>(width) / 4 - 1; i >= 0; --i) {
        unsigned nib = (bits >> (4 * i)) & 0xF;
        s += "0123456789abcdef"[nib];
      }
      return s;
    }
    std::string s = "#b";
    for (int i = static_cast<int>(width) - 1; i >= 0; --i)
      s += ((bits >> i) & 1) ? '1' : '0';
    return s;
  }
};

/// A concrete value: arbitrary-precision Int, Bool, or BitVec.
class Value {
public:
  Value() : data_(BigInt(0)) {}
  explicit Value(BigInt i) : data_(std::move(i)) {}
  explicit Value(bool b) : data_(b) {}
  explicit Value(BvVal bv) : data_(bv) {}

  static Value integer(long long i) { return Value(BigInt(i)); }

  bool is_int() const { return std::holds_alternative<BigInt>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_bv() const { return std::holds_alternative<BvVal>(data_); }

  const BigInt &as_int() const {
    if (!is_int())
      throw SortMismatch("value is not an Int");
    return std::get<BigInt>(data_);
  }
  bool as_bool() const {
    if (!is_bool())
      throw SortMismatch("value is not a Bool");
    return std::get<bool>(data_);
  }
  const BvVal &as_bv() const {
    if (!is_bv())
      throw SortMismatch("value is not a BitVec");
    return std::get<BvVal>(data_);
  }

  Sort sort() const {
    if (is_int())
      return Sort::integer();
    if (is_bool())
      return Sort::boolean();
    return Sort::bitvec(as_bv().width);
  }

  bool operator==(const Value &o) const = default;

  std::string to_string() const {
    if (is_bool())
      return as_bool() ? "true" : "false";
    if (is_bv())
      return as_bv().to_string();
    const BigInt &i = as_int();
    if (i < 0)
      return "(- " + BigInt(-i).str() + ")";
    return i.str();
  }

  /// Lisp dialect prints negative integers as bare "-5".
  std::string to_lisp_string() const {
    if (is_int())
      return as_int().str();
    return to_string();
  }

private:
  std::variant<BigInt, bool, BvVal> data_;
};

} // namespace gsynth
