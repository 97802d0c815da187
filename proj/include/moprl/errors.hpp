#ifndef MOPRL_ERRORS_HPP
#define MOPRL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace moprl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Elimination met a zero (or sub-floor) pivot at step `index`: the leading
// principal minor of order index+1 vanishes, i.e. the data is not perfect.
struct SingularMinor : Error {
  long index;
  explicit SingularMinor(long k)
      : Error("SingularMinor(" + std::to_string(k) + "): leading principal minor of order " +
              std::to_string(k + 1) + " vanishes"),
        index(k) {}
};

struct SingularSystem : Error {
  using Error::Error;
};

struct NormalizationImpossible : Error {
  using Error::Error;
};

// Requested value is irrational (or otherwise not representable) on the
// exact backend: e.g. sqrt of a non-square rational, exp of a nonzero
// rational, or a moment with no closed rational form.
struct ExactValueUnavailable : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  double estimate;
  explicit QuadratureError(const std::string& msg, double est) : Error(msg), estimate(est) {}
};

struct DomainError : Error {
  using Error::Error;
};

struct WindowError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace moprl

#endif
