// tests/test_rttm.cc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.h"
#include "tsdiar/io/rttm.h"

using namespace tsdiar;

TEST_CASE("parse_rttm single SPEAKER line") {
  auto segs = ParseRttm("SPEAKER S02 1 10.00 5.00 <NA> <NA> P05 <NA> <NA>\n");
  REQUIRE(segs.count("S02") == 1);
  REQUIRE(segs["S02"].segments.size() == 1);
  const auto &s = segs["S02"].segments[0];
  CHECK(s.speaker == "P05");
  CHECK(s.onset == doctest::Approx(10.0));
  CHECK(s.duration == doctest::Approx(5.0));
}

TEST_CASE("parse_rttm of empty text is empty map") {
  CHECK(ParseRttm("").empty());
}

TEST_CASE("parse_rttm skips non-SPEAKER records") {
  auto segs = ParseRttm(
      "LEXEME S02 1 10.00 5.00 <NA> <NA> hi <NA> <NA>\n"
      "SPEAKER S02 1 1.00 2.00 <NA> <NA> P05 <NA> <NA>\n");
  CHECK(segs["S02"].segments.size() == 1);
}

TEST_CASE("parse_rttm reports malformed lines with line number") {
  CHECK_THROWS_WITH_AS(ParseRttm("SPEAKER S02 1 10.00\n"),
                       doctest::Contains("line 1"), DataError);
  CHECK_THROWS_WITH_AS(
      ParseRttm("SPEAKER S02 1 abc 5.00 <NA> <NA> P05 <NA> <NA>\n"),
      doctest::Contains("non-numeric"), DataError);
}

TEST_CASE("write_rttm emits the documented record") {
  std::map<std::string, Segmentation> segs;
  segs["S02"] = Segmentation("S02");
  segs["S02"].segments.emplace_back("P05", 10.0, 5.0);
  CHECK(WriteRttm(segs) == "SPEAKER S02 1 10.00 5.00 <NA> <NA> P05 <NA> <NA>\n");
}

TEST_CASE("write_rttm breaks onset ties by speaker name") {
  std::map<std::string, Segmentation> segs;
  segs["f"] = Segmentation("f");
  segs["f"].segments.emplace_back("B", 1.0, 1.0);
  segs["f"].segments.emplace_back("A", 1.0, 1.0);
  auto text = WriteRttm(segs);
  CHECK(text.find(" A ") < text.find(" B "));
}

TEST_CASE("write/parse round trip is a fixed point") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::map<std::string, Segmentation> segs;
    segs["f1"] = test::RandomSegmentation(&rng, 500, 4, 100.0, 0.01, "f1");
    segs["f2"] = test::RandomSegmentation(&rng, 50, 2, 40.0, 0.01, "f2");
    auto text1 = WriteRttm(segs);
    auto text2 = WriteRttm(ParseRttm(text1));
    CHECK(text1 == text2);

    // parse(write(x)) == x up to the 0.01 s print quantization
    auto parsed = ParseRttm(text1);
    REQUIRE(parsed.size() == segs.size());
    for (const auto &[fid, seg] : segs) {
      // write sorts, so compare multisets of rounded segments
      auto expect = seg.segments;
      auto got = parsed[fid].segments;
      REQUIRE(expect.size() == got.size());
      auto key = [](const Segment &s) {
        return std::make_tuple(std::llround(s.onset * 100),
                               std::llround(s.duration * 100), s.speaker);
      };
      std::vector<std::tuple<long long, long long, std::string>> ek, gk;
      for (const auto &s : expect) ek.push_back(key(s));
      for (const auto &s : got) gk.push_back(key(s));
      std::sort(ek.begin(), ek.end());
      std::sort(gk.begin(), gk.end());
      CHECK(ek == gk);
    }
  }
}

TEST_CASE("parse_uem single region") {
  auto mask = ParseUem("S02 1 0.0 100.0\n");
  REQUIRE(mask.HasFile("S02"));
  REQUIRE(mask.regions["S02"].size() == 1);
  CHECK(mask.regions["S02"][0].onset == doctest::Approx(0.0));
  CHECK(mask.regions["S02"][0].offset == doctest::Approx(100.0));
}

TEST_CASE("empty uem scores everything") {
  auto mask = ParseUem("");
  CHECK(mask.Contains("anything", 123.0));
}

TEST_CASE("parse_uem rejects inverted intervals") {
  CHECK_THROWS_AS(ParseUem("S02 1 5.0 5.0\n"), DataError);
  CHECK_THROWS_AS(ParseUem("S02 1 7.0 5.0\n"), DataError);
}

TEST_CASE("parse_uem merges overlapping regions") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::string text;
    std::vector<std::pair<double, double>> ivals;
    int n = 2 + rng.UniformInt(10);
    for (int i = 0; i < n; ++i) {
      double a = std::round(rng.Uniform(0.0, 50.0) * 100) / 100;
      double b = a + std::round(rng.Uniform(0.5, 20.0) * 100) / 100;
      ivals.emplace_back(a, b);
      text += "f 1 " + std::to_string(a) + " " + std::to_string(b) + "\n";
    }
    auto mask = ParseUem(text);
    // interval-union oracle at 1 ms
    for (int t = 0; t < 70000; t += 13) {
      double time = (t + 0.5) / 1000.0;
      bool expect = false;
      for (auto [a, b] : ivals)
        if (time >= a && time < b) expect = true;
      CHECK(mask.Contains("f", time) == expect);
    }
    // merged regions are sorted and non-overlapping
    const auto &rs = mask.regions["f"];
    for (std::size_t i = 1; i < rs.size(); ++i)
      CHECK(rs[i].onset > rs[i - 1].offset);
  }
}
