#pragma once

#include "doctest.h"
#include "errors.hpp"

// Returns true when fn throws hxid::Error with the expected kind.
template <typename Fn>
inline bool throws_kind(hxid::ErrorKind kind, Fn&& fn) {
  try {
    fn();
  } catch (const hxid::Error& e) {
    return e.kind() == kind;
  } catch (...) {
    return false;
  }
  return false;
}
