// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/result.hpp"

namespace uvnlos {

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::empty_overlap: return "empty_overlap";
    case Status::zero_contribution: return "zero_contribution";
  }
  return "unknown";
}

}  // namespace uvnlos
