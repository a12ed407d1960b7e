#include "commusage/model.hpp"

#include <algorithm>
#include <charconv>

namespace commusage {

std::string to_string(Asn asn) { return std::to_string(asn.value); }

std::string to_string(const Community& c) {
  std::string out = std::to_string(c.upper());
  out += ':';
  if (c.is_large()) {
    out += std::to_string(c.mid());
    out += ':';
  }
  out += std::to_string(c.low());
  return out;
}

namespace {

std::optional<std::uint32_t> parse_u32(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint32_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Community> parse_community(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto colon = text.find(':', start);
    fields.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (fields.size() != 2 && fields.size() != 3) return std::nullopt;

  std::uint32_t values[3] = {};
  for (std::size_t i = 0; i < fields.size(); ++i) {
    auto v = parse_u32(fields[i]);
    if (!v) return std::nullopt;
    values[i] = *v;
  }
  if (fields.size() == 3) return Community::large(values[0], values[1], values[2]);
  if (values[0] > 0xFFFFu || values[1] > 0xFFFFu) return std::nullopt;
  return Community::regular(static_cast<std::uint16_t>(values[0]),
                            static_cast<std::uint16_t>(values[1]));
}

CommunitySet::CommunitySet(std::initializer_list<Community> items)
    : CommunitySet(std::vector<Community>(items)) {}

CommunitySet::CommunitySet(std::vector<Community> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

void CommunitySet::insert(Community c) {
  auto it = std::lower_bound(items_.begin(), items_.end(), c);
  if (it == items_.end() || *it != c) items_.insert(it, c);
}

bool CommunitySet::contains(Community c) const {
  return std::binary_search(items_.begin(), items_.end(), c);
}

bool CommunitySet::has_upper(Asn asn) const {
  return std::any_of(items_.begin(), items_.end(),
                     [asn](const Community& c) { return c.upper_asn() == asn; });
}

bool AsPath::contains(Asn asn) const {
  return std::find(asns_.begin(), asns_.end(), asn) != asns_.end();
}

std::string to_string(const AsPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(path[i].value);
  }
  return out;
}

std::string_view to_string(CommunityOrigin origin) {
  switch (origin) {
    case CommunityOrigin::Peer: return "peer";
    case CommunityOrigin::Foreign: return "foreign";
    case CommunityOrigin::Stray: return "stray";
    case CommunityOrigin::Private: return "private";
  }
  return "?";
}

char render(TaggingClass c) noexcept {
  switch (c) {
    case TaggingClass::Tagger: return 't';
    case TaggingClass::Silent: return 's';
    case TaggingClass::Undecided: return 'u';
    case TaggingClass::None: return 'n';
  }
  return '?';
}

char render(ForwardingClass c) noexcept {
  switch (c) {
    case ForwardingClass::Forward: return 'f';
    case ForwardingClass::Cleaner: return 'c';
    case ForwardingClass::Undecided: return 'u';
    case ForwardingClass::None: return 'n';
  }
  return '?';
}

std::optional<TaggingClass> parse_tagging_class(char c) noexcept {
  switch (c) {
    case 't': return TaggingClass::Tagger;
    case 's': return TaggingClass::Silent;
    case 'u': return TaggingClass::Undecided;
    case 'n': return TaggingClass::None;
    default: return std::nullopt;
  }
}

std::optional<ForwardingClass> parse_forwarding_class(char c) noexcept {
  switch (c) {
    case 'f': return ForwardingClass::Forward;
    case 'c': return ForwardingClass::Cleaner;
    case 'u': return ForwardingClass::Undecided;
    case 'n': return ForwardingClass::None;
    default: return std::nullopt;
  }
}

void Thresholds::validate() const {
  for (double share : {tagger, silent, forward, cleaner}) {
    if (!(share >= 0.5 && share <= 1.0)) {
      throw std::invalid_argument("threshold " + std::to_string(share) +
                                  " outside [0.5, 1.0]");
    }
  }
  if (min_samples == 0) throw std::invalid_argument("min_samples must be at least 1");
}

std::string render_class(TaggingClass t, ForwardingClass f) {
  return std::string{render(t), render(f)};
}

std::string render_class(const Classification& c) { return render_class(c.tagging, c.forwarding); }

}  // namespace commusage
