#pragma once

// Micro-topologies with hand-traced column-inference results. Every
// expected counter below was worked out by hand, column by column, before
// the implementation was run against it; the trace is summarized next to
// each fixture.
//
// ASN letters used in the traces:
//   A=100 B=200 C=300 V=2200 X=2400 Y=2500 Z=2600 W=196608 (32-bit)
//   A1..A8 = 1001..1008

#include <cstdint>
#include <string>
#include <vector>

#include "commusage/inference.hpp"

namespace commusage::testing {

struct ExpectedClass {
  std::uint32_t asn;
  const char* cls;
  std::uint64_t t, s, f, c;
};

struct TraceFixture {
  std::string name;
  std::vector<std::string> lines;  // sanitized tuple format
  InferenceConfig config;
  std::vector<ExpectedClass> expected;  // every ASN in the input
};

inline InferenceConfig default_config() { return InferenceConfig{}; }

inline InferenceConfig config_with(double threshold, std::size_t max_column = 7,
                                   std::uint64_t min_samples = 1) {
  InferenceConfig cfg;
  cfg.thresholds = Thresholds::uniform(threshold, min_samples);
  cfg.max_column = max_column;
  return cfg;
}

inline std::vector<TraceFixture> trace_fixtures() {
  std::vector<TraceFixture> out;

  // col0/T: t[Z]=1 s[X]=1. col0/F: X sees tagger Z, Z:1 kept -> f[X]=1.
  // col1/T: X forward, t[Z]=2.
  out.push_back({"peer tagger and forwarding peer",
                 {"c|2600|2600|2600:1", "c|2400|2400 2600|2600:1"},
                 default_config(),
                 {{2400, "sf", 0, 1, 1, 0}, {2600, "tn", 2, 0, 0, 0}}});

  // col0/T: t[Z]=1 s[Y]=1. col0/F: Z:1 missing behind Y -> c[Y]=1.
  // col1/T: Y not forward, Z skipped.
  out.push_back({"cleaner removes downstream tag",
                 {"c|2600|2600|2600:1", "c|2500|2500 2600|"},
                 default_config(),
                 {{2500, "sc", 0, 1, 0, 1}, {2600, "tn", 1, 0, 0, 0}}});

  // col0/T: s[X]=1. col0/F: Y has no counters, scan stops. col1/T: X not
  // forward, Y never counted.
  out.push_back({"race on a single path",
                 {"c|2400|2400 2500|"},
                 default_config(),
                 {{2400, "sn", 0, 1, 0, 0}, {2500, "nn", 0, 0, 0, 0}}});

  // col0/T: t[C]=1 s[B]=1 s[A]=2. col0/F: B->C f[B]=1; A->B stops (B not
  // forward in the snapshot even though [B,C] is counted in the same
  // phase); A->C f[A]=1. col1/T: [B,C] t[C]=2, [A,C] t[C]=3, [A,B,C] s[B]=2.
  // col1/F: [A,B,C] B->C f[B]=2. col2/T: [A,B,C] t[C]=4.
  out.push_back({"snapshot hides same-phase knowledge",
                 {"c|300|300|300:1", "c|200|200 300|300:1", "c|100|100 200 300|300:1",
                  "c|100|100 300|300:1"},
                 default_config(),
                 {{100, "sf", 0, 2, 1, 0}, {200, "sf", 0, 2, 2, 0}, {300, "tn", 4, 0, 0, 0}}});

  // col0/T: t[C]=1 s[B]=1 s[A]=2. col0/F: f[B]=1 f[A]=1, [A,X,B,C] stops at
  // X. col1/T: t[C]=3, s[X]=1. col1/F: X scans past forward B to tagger C,
  // f[X]=1. col2/T: s[B]=2. col2/F: f[B]=2. col3/T: t[C]=4.
  out.push_back({"witness found through a forwarding silent AS",
                 {"c|300|300|300:1", "c|200|200 300|300:1", "c|100|100 300|300:1",
                  "c|100|100 2400 200 300|300:1"},
                 default_config(),
                 {{100, "sf", 0, 2, 1, 0},
                  {200, "sf", 0, 2, 2, 0},
                  {300, "tn", 4, 0, 0, 0},
                  {2400, "sf", 0, 1, 1, 0}}});

  // Same input limited to two columns: col2 and col3 never run.
  out.push_back({"max column cuts off deep positions",
                 {"c|300|300|300:1", "c|200|200 300|300:1", "c|100|100 300|300:1",
                  "c|100|100 2400 200 300|300:1"},
                 config_with(0.99, 2),
                 {{100, "sf", 0, 2, 1, 0},
                  {200, "sf", 0, 1, 1, 0},
                  {300, "tn", 3, 0, 0, 0},
                  {2400, "sf", 0, 1, 1, 0}}});

  // col0/T: t[B]=2 t[C]=1 s[A]=2. col0/F: A->B (nearest tagger) f[A]=2,
  // B->C f[B]=1. col1/T: t[B]=4 t[C]=2. col1/F: [A,B,C] B->C, C:1 missing,
  // c[B]=1. col2/T: B no longer forward (1/2), C skipped.
  out.push_back({"nearest tagger is the witness",
                 {"c|200|200|200:1", "c|100|100 200|200:1", "c|200|200 300|200:1 300:1",
                  "c|300|300|300:1", "c|100|100 200 300|200:1"},
                 default_config(),
                 {{100, "sf", 0, 2, 2, 0}, {200, "tu", 4, 0, 1, 1}, {300, "tn", 2, 0, 0, 0}}});

  // col0/T: t[C]=1 t[B]=2 s[A]=2. col0/F: c[B]=1, f[A]=2. col1/T: [B,C]
  // skipped (B cleaner), t[B]=4. col1/F: [A,B,C] B->C missing, c[B]=2.
  // col2/T: B not forward, C skipped.
  out.push_back({"tagging cleaner",
                 {"c|300|300|300:1", "c|200|200 300|200:1", "c|100|100 200|200:1",
                  "c|200|200|200:1", "c|100|100 200 300|200:1"},
                 default_config(),
                 {{100, "sf", 0, 2, 2, 0}, {200, "tc", 4, 0, 0, 2}, {300, "tn", 1, 0, 0, 0}}});

  // Large communities match 32-bit ASNs; private and stray communities are
  // ignored. col0/T: t[W]=1 s[X]=1 t[Y]=1 s[V]=1 s[64600]=1. col0/F:
  // f[X]=1. col1/T: t[W]=2.
  out.push_back({"large, private and stray communities",
                 {"c|196608|196608|196608:1:0", "c|2400|2400 196608|196608:1:0",
                  "c|2500|2500|2500:1 65000:7 999:1", "c|2200|2200|999:5",
                  "c|64600|64600|64600:1"},
                 default_config(),
                 {{2200, "sn", 0, 1, 0, 0},
                  {2400, "sf", 0, 1, 1, 0},
                  {2500, "tn", 1, 0, 0, 0},
                  {64600, "sn", 0, 1, 0, 0},
                  {196608, "tn", 2, 0, 0, 0}}});

  // X tags on one path and not on the other: t=1 s=1 is undecided at 0.99.
  out.push_back({"inconsistent tagging is undecided",
                 {"c|2400|2400|2400:1", "c|2400|2400 2500|"},
                 default_config(),
                 {{2400, "un", 1, 1, 0, 0}, {2500, "nn", 0, 0, 0, 0}}});

  // At 0.5 the same counters make X a tagger; Y still has no witness.
  out.push_back({"half threshold resolves ties toward tagger",
                 {"c|2400|2400|2400:1", "c|2400|2400 2500|"},
                 config_with(0.5),
                 {{2400, "tn", 1, 1, 0, 0}, {2500, "nn", 0, 0, 0, 0}}});

  // A support floor of two leaves single observations undecided, so no AS
  // becomes a tagger and the forwarding phase never finds a witness.
  out.push_back({"support floor",
                 {"c|2600|2600|2600:1", "c|2400|2400 2600|2600:1"},
                 config_with(0.99, 7, 2),
                 {{2400, "un", 0, 1, 0, 0}, {2600, "un", 1, 0, 0, 0}}});

  // Suffixes of one all-tagging path A1..A8. Column x tags A(1+x)..A8 and
  // credits forwarding to A(1+x)..A7, for x = 0..6.
  {
    TraceFixture fx{"suffix chain stops at the column limit", {}, default_config(), {}};
    for (int k = 1; k <= 8; ++k) {
      std::string path, comm;
      for (int j = k; j <= 8; ++j) {
        path += (j > k ? " " : "") + std::to_string(1000 + j);
        comm += (j > k ? " " : "") + std::to_string(1000 + j) + ":1";
      }
      fx.lines.push_back("c|" + std::to_string(1000 + k) + "|" + path + "|" + comm);
    }
    fx.expected = {{1001, "tf", 1, 0, 1, 0}, {1002, "tf", 2, 0, 2, 0}, {1003, "tf", 3, 0, 3, 0},
                   {1004, "tf", 4, 0, 4, 0}, {1005, "tf", 5, 0, 5, 0}, {1006, "tf", 6, 0, 6, 0},
                   {1007, "tf", 7, 0, 7, 0}, {1008, "tn", 7, 0, 0, 0}};
    out.push_back(fx);
    fx.name = "suffix chain with one more column";
    fx.config = config_with(0.99, 8);
    fx.expected.back() = {1008, "tn", 8, 0, 0, 0};
    out.push_back(fx);
  }

  out.push_back({"empty input", {}, default_config(), {}});
  return out;
}

}  // namespace commusage::testing
