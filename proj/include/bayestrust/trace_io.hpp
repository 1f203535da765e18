#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "bayestrust/simulator.hpp"

namespace bayestrust {

/// Malformed trace text; the message carries the 1-based line number.
class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Payload field of a record line, e.g. "10,7" or "20.5;20.1,19.8".
std::string format_payload(const Observation& obs);
/// Inverse of format_payload for the given kind tag.
Observation parse_payload(std::string_view kind, std::string_view payload);

/// Header lines:
///   #bayestrust-trace<TAB>version=1<TAB>seed=<u64><TAB>horizon=<u64>
///   #agent<TAB><id><TAB><profile text>
/// then one record per line: step<TAB>trustor<TAB>trustee<TAB>kind<TAB>payload.
/// Reals are written with 17 significant digits, so reading back is lossless.
void write_trace(std::ostream& out, const sim::Trace& trace);
sim::Trace read_trace(std::istream& in);

void save_trace(const std::string& path, const sim::Trace& trace);
sim::Trace load_trace(const std::string& path);

}  // namespace bayestrust
