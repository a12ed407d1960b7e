#pragma once

// Line-oriented text formats shared by the CLI and the tests.
//
// Route records:  collector|peer_asn|a1 a2 {s1,s2} a3|c1 c2 c3
// Drop log:       DROP|<reason>|<original line>
// Classification: asn<TAB>class<TAB>t<TAB>s<TAB>f<TAB>c

#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "commusage/model.hpp"
#include "commusage/sanitize.hpp"

namespace commusage {

/// Raised for malformed input; `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// True for blank lines and `#` comments.
bool is_skippable_line(std::string_view line) noexcept;

/// Parses one route record line. Throws ParseError (line number 0; callers
/// rethrow with the number they know).
RawRouteRecord parse_route_line(std::string_view line);

std::string format_route_tuple(const RouteTuple& tuple);
std::string format_drop_line(DropReason reason, std::string_view original_line);

/// Calls `sink(RawRouteRecord&&, std::string_view line, std::size_t line_no)`
/// for every record line in `in`. Throws ParseError with the line number.
template <class Sink>
void for_each_route_record(std::istream& in, Sink&& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_skippable_line(line)) continue;
    RawRouteRecord record;
    try {
      record = parse_route_line(line);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    sink(std::move(record), std::string_view(line), line_no);
  }
}

/// Reads route records, sanitizes them and deduplicates. Dropped records are
/// silently skipped; their number is added to `*dropped` when given.
std::vector<RouteTuple> read_route_tuples(std::istream& in, std::size_t* dropped = nullptr);

void write_route_tuples(std::ostream& out, const std::vector<RouteTuple>& tuples);

/// One decimal ASN per line; `#` comments allowed.
AllocationTable read_allocation_table(std::istream& in);

void write_classifications(std::ostream& out, const std::map<Asn, Classification>& result);
std::map<Asn, Classification> read_classifications(std::istream& in);

}  // namespace commusage
