#pragma once

#include <stdexcept>
#include <string>

namespace dbc {

// Base class for every domain or configuration failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DBC_DECLARE_ERROR(Name)               \
  class Name : public Error {                 \
   public:                                    \
    explicit Name(const std::string& what)    \
        : Error(std::string(#Name ": ") + what) {} \
  };

DBC_DECLARE_ERROR(NotInOpenCell)
DBC_DECLARE_ERROR(DomainEscape)
DBC_DECLARE_ERROR(NotInDressingDomain)
DBC_DECLARE_ERROR(NotComposable)
DBC_DECLARE_ERROR(NotInCell)
DBC_DECLARE_ERROR(InvariantViolation)
DBC_DECLARE_ERROR(IndexMismatch)
DBC_DECLARE_ERROR(RankDeficient)
DBC_DECLARE_ERROR(ConfigError)
DBC_DECLARE_ERROR(IoError)

#undef DBC_DECLARE_ERROR

}  // namespace dbc
