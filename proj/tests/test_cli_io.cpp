#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "aci/report.hpp"
#include "fixtures.hpp"

using namespace aci;

namespace {

MatrixDocument from_string(const std::string& text,
                           const std::optional<std::string>& field_override = {}) {
  std::istringstream in(text);
  return read_document(in, field_override);
}

std::string data_path(const std::string& name) {
  return std::string(ACI_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST(Document, ReadsFixtureFiles) {
  for (const char* name : {"showcase.aci", "remark.aci", "i2.aci", "sweep4x3.aci", "zero1x1.aci"}) {
    std::ifstream in(data_path(name));
    ASSERT_TRUE(in.good()) << name;
    MatrixDocument doc = read_document(in);
    AciMatrix M = doc.to_matrix();
    EXPECT_GE(M.rows(), 1) << name;
  }
}

TEST(Document, ShowcaseFileMatchesBuilder) {
  std::ifstream in(data_path("showcase.aci"));
  AciMatrix file = read_document(in).to_matrix();
  EXPECT_TRUE(file.same_entries(fixtures::showcase(fixtures::Q())));
}

TEST(Document, CommentsDimsAndDegenerates) {
  MatrixDocument doc = from_string(
      "# leading comment\n"
      "field: gf(3)\n"
      "name: wd\n"
      "dims: 0 x 3\n");
  AciMatrix M = doc.to_matrix();
  EXPECT_EQ(M.rows(), 0);
  EXPECT_EQ(M.cols(), 3);
  EXPECT_EQ(*doc.name, "wd");

  AciMatrix v = from_string("field: rational\ndims: 0 x 0\n").to_matrix();
  EXPECT_TRUE(v.shape().is_void);
}

TEST(Document, FieldOverrideReinterpretsEntries) {
  std::string text = "field: rational\n7, x\n";
  AciMatrix q = from_string(text).to_matrix();
  EXPECT_EQ(q.entry(0, 0).constant(), Scalar::from_integer(FieldSpec::rationals(), 7));
  AciMatrix g5 = from_string(text, std::string("gf(5)")).to_matrix();
  EXPECT_EQ(g5.entry(0, 0).constant(), Scalar::from_integer(FieldSpec::gf(5), 2));
}

TEST(Document, Errors) {
  EXPECT_THROW(from_string(""), Error);
  EXPECT_THROW(from_string("1, 2\n"), Error);             // missing field header
  EXPECT_THROW(from_string("field: gf(4)\n1\n"), Error);  // not a prime
  // Grid assembly errors surface when the document is turned into a matrix.
  EXPECT_THROW(from_string("field: gf(2)\n1, x\nx\n").to_matrix(), Error);  // ragged rows
  EXPECT_THROW(from_string("field: gf(2)\ndims: 2 x 2\n1, 1\n").to_matrix(), Error);
  try {
    from_string("field: gf(2)\nx, x\n").to_matrix();
    FAIL() << "column sharing must be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Err::ColumnSharing);
  }
}

TEST(Document, WriteReadRoundTrip) {
  fixtures::RandomAci rnd(89);
  for (int t = 0; t < 20; ++t) {
    FieldSpec f = t % 2 ? FieldSpec::gf(5) : FieldSpec::rationals();
    AciMatrix M = rnd.matrix(f, rnd.uniform(0, 3), rnd.uniform(0, 3), 4);
    std::string text = write_document(M, "roundtrip");
    AciMatrix back = from_string(text).to_matrix();
    EXPECT_TRUE(back.same_entries(M)) << text;
  }
}

TEST(Report, JsonIsDeterministicAndReparseable) {
  AciMatrix M = fixtures::showcase(fixtures::Q());
  WstDecomposition d = wst_decompose(M);
  Json a = report::envelope("wst", "showcase", report::wst_json(d), {});
  Json b = report::envelope("wst", "showcase", report::wst_json(wst_decompose(M)), {});
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["schema"], 1);

  // Block grids in reports reparse to the blocks themselves.
  Json grid = a["result"]["s"]["entries"];
  std::string text = "field: rational\n";
  for (const auto& row : grid) {
    for (size_t j = 0; j < row.size(); ++j)
      text += (j ? ", " : "") + row[j].get<std::string>();
    text += "\n";
  }
  std::istringstream in(text);
  AciMatrix back = read_document(in).to_matrix();
  EXPECT_TRUE(back.same_entries(d.S));
}

TEST(Report, RankPayloadShapes) {
  AciMatrix M = fixtures::showcase(FieldSpec::gf(2));
  RankReport rep = rank_set_exhaustive(M);
  Json j = report::rank_report(rep, M);
  EXPECT_EQ(j["method"], "exhaustive");
  EXPECT_EQ(j["max_rank"], 4);
  EXPECT_TRUE(j.contains("rank_set"));
  EXPECT_TRUE(j.contains("min_witness"));
}
