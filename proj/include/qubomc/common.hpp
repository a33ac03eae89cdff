#ifndef QUBOMC_COMMON_HPP
#define QUBOMC_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qubomc {

// Base class for all errors raised by the library. Parse errors, contract
// violations and configuration problems all surface as QubomcError; callers
// that care about the distinction match on the message prefix set by the
// throwing module ("btor2:", "asm:", ...).
class QubomcError : public std::runtime_error {
 public:
  explicit QubomcError(const std::string & msg) : std::runtime_error(msg) {}
};

inline uint64_t mask_of_width(uint32_t width) {
  return width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << width) - 1);
}

}  // namespace qubomc

#endif
