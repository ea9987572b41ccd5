#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace pgfcheck::cas {

/// What an indeterminate stands for. The declaration order is also the
/// major key of the global indeterminate ordering.
enum class IndetKind : std::uint8_t {
  Program,      // program variable x, rendered X
  Meta,         // meta indeterminate paired with a program indeterminate
  Parameter,    // symbolic parameter, never substituted by the semantics
  Placeholder,  // the reserved distribution placeholder T
};

namespace detail {
struct IndetRecord;
}

/// Interned indeterminate handle. Two handles are equal iff they were
/// created from the same (name, kind) pair. Interning is thread-safe and
/// records live for the whole process.
class Indet {
 public:
  static Indet get(std::string_view name, IndetKind kind);

  /// The reserved placeholder T used by distribution PGFs.
  static Indet placeholder();

  const std::string& name() const;
  IndetKind kind() const;

  /// Program and meta indeterminates (and the placeholder) are "series"
  /// indeterminates: set to zero when testing FPS invertibility.
  bool is_parameter() const { return kind() == IndetKind::Parameter; }

  friend bool operator==(Indet a, Indet b) { return a.rec_ == b.rec_; }
  friend std::strong_ordering operator<=>(Indet a, Indet b);

  std::size_t hash() const { return std::hash<const void*>{}(rec_); }

 private:
  explicit Indet(const detail::IndetRecord* rec) : rec_(rec) {}
  const detail::IndetRecord* rec_;
};

}  // namespace pgfcheck::cas

template <>
struct std::hash<pgfcheck::cas::Indet> {
  std::size_t operator()(pgfcheck::cas::Indet x) const noexcept { return x.hash(); }
};
