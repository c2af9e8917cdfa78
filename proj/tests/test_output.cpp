#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "vertex_expand/errors.hpp"
#include "vertex_expand/output.hpp"

using namespace vertex_expand;
using namespace vertex_expand::output;

TEST(Format, Doubles) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-1.0 / 3e300), "-3.333333333333333e-301");
  EXPECT_EQ(std::stod(format_double(0.236548217781665)), 0.236548217781665);
  EXPECT_EQ(format_double(1.0 / 0.0), "inf");
}

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_THROW(parse_format("xml"), InvalidArgument);
}

TEST(Provenance, Tags) {
  for (const char* t : {"quadrature", "series", "enumeration", "transfer-matrix", "pfaffian", "exact-series"}) {
    EXPECT_TRUE(is_provenance(t)) << t;
  }
  EXPECT_FALSE(is_provenance("guess"));
  EXPECT_THROW(to_json({"F0", {}, 1.0, "guess"}), InvalidArgument);
}

TEST(Json, SortedKeysAndExactValues) {
  const OutputRecord r{"F0", {{"method", std::string("quad")}, {"beta_s", 0.5}, {"size", 8LL}}, 0.25,
                       "quadrature"};
  EXPECT_EQ(to_json(r),
            "{\"params\":{\"beta_s\":0.5,\"method\":\"quad\",\"size\":8},\"provenance\":\"quadrature\","
            "\"quantity\":\"F0\",\"value\":0.25}");
  const OutputRecord q{"coefficient", {}, std::string("-593/5040"), "exact-series"};
  EXPECT_NE(to_json(q).find("\"value\":\"-593/5040\""), std::string::npos);
}

TEST(Csv, HeaderOverUnionOfKeys) {
  const std::vector<OutputRecord> rs = {{"F0", {{"beta_s", 0.0}}, 1.5, "series"},
                                        {"F0", {{"beta_s", 0.5}, {"n", 3LL}}, 2.0, "series"}};
  std::ostringstream out;
  write_records(out, rs, Format::Csv);
  EXPECT_EQ(out.str(), "quantity,beta_s,n,value,provenance\nF0,0,,1.5,series\nF0,0.5,3,2,series\n");
}

TEST(Json, OneObjectPerLine) {
  const std::vector<OutputRecord> rs = {{"a", {}, 1.0, "series"}, {"b", {}, 2.0, "series"}};
  std::ostringstream out;
  write_records(out, rs, Format::Json);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}
