#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace mm {

enum class Verdict { yes, no, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

/// Three-valued result of a semi-decision. `bound` is the search radius or
/// budget that was exhausted when the verdict is unknown.
template <class T>
struct Decision {
  Verdict verdict = Verdict::unknown;
  std::optional<T> certificate;
  std::size_t bound = 0;
  std::string reason;

  static Decision yes(T cert) { return {Verdict::yes, std::move(cert), 0, {}}; }
  static Decision no(std::string why = {}) { return {Verdict::no, std::nullopt, 0, std::move(why)}; }
  static Decision unknown(std::size_t bound, std::string why = {}) {
    return {Verdict::unknown, std::nullopt, bound, std::move(why)};
  }

  bool is_yes() const { return verdict == Verdict::yes; }
  bool is_no() const { return verdict == Verdict::no; }
  bool is_unknown() const { return verdict == Verdict::unknown; }
  const T& value() const { return certificate.value(); }

  template <class U>
  Decision<U> cast_without_certificate() const {
    return {verdict, std::nullopt, bound, reason};
  }
};

/// Answer of a word-problem oracle: yes means "trivial in G".
struct OracleAnswer {
  Verdict value = Verdict::unknown;
  std::size_t bound = 0;

  static OracleAnswer truth(bool b) { return {b ? Verdict::yes : Verdict::no, 0}; }
  static OracleAnswer unknown(std::size_t bound) { return {Verdict::unknown, bound}; }
  bool is_true() const { return value == Verdict::yes; }
  bool is_false() const { return value == Verdict::no; }
  bool is_unknown() const { return value == Verdict::unknown; }
};

namespace detail {
inline thread_local std::uint64_t step_counter = 0;
}

/// Work units spent by searches on this thread since the last reset.
inline std::uint64_t elapsed_steps() { return detail::step_counter; }
inline void reset_steps() { detail::step_counter = 0; }
inline void count_step(std::uint64_t n = 1) { detail::step_counter += n; }

}  // namespace mm
