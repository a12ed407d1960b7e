#include "commusage/text_format.hpp"

#include <charconv>
#include <sstream>

namespace commusage {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

Asn parse_asn(std::string_view text, std::string_view what) {
  std::uint32_t value = 0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(0, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return Asn{value};
}

std::uint64_t parse_count(std::string_view text) {
  std::uint64_t value = 0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(0, "bad counter '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

bool is_skippable_line(std::string_view line) noexcept {
  for (char ch : line) {
    if (ch == '#') return true;
    if (ch != ' ' && ch != '\t') return false;
  }
  return true;
}

RawRouteRecord parse_route_line(std::string_view line) {
  auto fields = split(line, '|');
  if (fields.size() != 4) {
    throw ParseError(0, "expected 4 '|'-separated fields, got " + std::to_string(fields.size()));
  }
  RawRouteRecord record;
  record.collector = std::string(fields[0]);
  record.peer_asn = parse_asn(fields[1], "peer ASN");

  for (auto token : split_ws(fields[2])) {
    if (token.front() == '{') {
      if (token.size() < 3 || token.back() != '}') {
        throw ParseError(0, "bad AS_SET '" + std::string(token) + "'");
      }
      AsSet set;
      for (auto member : split(token.substr(1, token.size() - 2), ',')) {
        set.members.push_back(parse_asn(member, "AS_SET member"));
      }
      record.raw_path.emplace_back(std::move(set));
    } else {
      record.raw_path.emplace_back(parse_asn(token, "path ASN"));
    }
  }

  for (auto token : split_ws(fields[3])) {
    auto community = parse_community(token);
    if (!community) throw ParseError(0, "bad community '" + std::string(token) + "'");
    record.communities.push_back(*community);
  }
  return record;
}

std::string format_route_tuple(const RouteTuple& tuple) {
  std::string out = tuple.collector;
  out += '|';
  out += to_string(tuple.peer_asn);
  out += '|';
  out += to_string(tuple.path);
  out += '|';
  bool first = true;
  for (const auto& c : tuple.communities) {
    if (!first) out += ' ';
    first = false;
    out += to_string(c);
  }
  return out;
}

std::string format_drop_line(DropReason reason, std::string_view original_line) {
  std::string out = "DROP|";
  out += to_string(reason);
  out += '|';
  out += original_line;
  return out;
}

std::vector<RouteTuple> read_route_tuples(std::istream& in, std::size_t* dropped) {
  std::vector<RouteTuple> out;
  TupleDeduplicator dedup;
  for_each_route_record(in, [&](RawRouteRecord&& record, std::string_view, std::size_t) {
    auto outcome = sanitize_record(record);
    if (auto* tuple = std::get_if<RouteTuple>(&outcome)) {
      if (dedup.insert(*tuple)) out.push_back(std::move(*tuple));
    } else if (dropped) {
      ++*dropped;
    }
  });
  return out;
}

void write_route_tuples(std::ostream& out, const std::vector<RouteTuple>& tuples) {
  for (const auto& t : tuples) out << format_route_tuple(t) << '\n';
}

AllocationTable read_allocation_table(std::istream& in) {
  AllocationTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 1) throw ParseError(line_no, "expected a single ASN");
    try {
      table.add(parse_asn(tokens[0], "ASN"));
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return table;
}

void write_classifications(std::ostream& out, const std::map<Asn, Classification>& result) {
  out << "#asn\tclass\tt\ts\tf\tc\n";
  for (const auto& [asn, cls] : result) {
    out << asn.value << '\t' << render_class(cls) << '\t' << cls.counters.t << '\t'
        << cls.counters.s << '\t' << cls.counters.f << '\t' << cls.counters.c << '\n';
  }
}

std::map<Asn, Classification> read_classifications(std::istream& in) {
  std::map<Asn, Classification> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    auto fields = split(line, '\t');
    try {
      if (fields.size() != 6 || fields[1].size() != 2) {
        throw ParseError(0, "expected asn, class and four counters");
      }
      Classification cls;
      cls.asn = parse_asn(fields[0], "ASN");
      auto tagging = parse_tagging_class(fields[1][0]);
      auto forwarding = parse_forwarding_class(fields[1][1]);
      if (!tagging || !forwarding) throw ParseError(0, "bad class '" + std::string(fields[1]) + "'");
      cls.tagging = *tagging;
      cls.forwarding = *forwarding;
      cls.counters = {parse_count(fields[2]), parse_count(fields[3]), parse_count(fields[4]),
                      parse_count(fields[5])};
      result[cls.asn] = cls;
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return result;
}

}  // namespace commusage
