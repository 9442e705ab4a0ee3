#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "volnet/ingest.hpp"

using namespace volnet;
namespace fs = std::filesystem;

namespace {

class IngestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("volnet_ingest_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  fs::path dir_;
};

OhlcSeries series(const std::string& name, std::initializer_list<const char*> dates) {
  OhlcSeries s{name, {}};
  for (const char* d : dates) s.bars.push_back({*Date::parse_iso(d), 10, 11, 9, 10.5});
  return s;
}

}  // namespace

TEST_F(IngestTest, LoadsAndSortsRows) {
  const auto p = write("ES.csv",
                       "Date,Open,High,Low,Close\n"
                       "2024-01-04,10,12,9,11\n"
                       "2024-01-02,10,11,9.5,10.5\n"
                       "2024-01-03,10.5,11,10,10.8\n");
  const OhlcSeries s = load_ohlc_csv(p);
  EXPECT_EQ(s.asset, "ES");
  ASSERT_EQ(s.bars.size(), 3u);
  EXPECT_EQ(s.bars.front().date.iso(), "2024-01-02");
  EXPECT_EQ(s.bars.back().date.iso(), "2024-01-04");
  EXPECT_DOUBLE_EQ(s.bars[1].close, 10.8);
}

TEST_F(IngestTest, HeaderIsCaseInsensitiveAndExtraColumnsIgnored) {
  const auto p = write("x.csv",
                       "volume,CLOSE,low,HIGH,open,DATE\n"
                       "100,10.5,9,11,10,2024-01-02\n");
  const OhlcSeries s = load_ohlc_csv(p, "CL");
  EXPECT_EQ(s.asset, "CL");
  ASSERT_EQ(s.bars.size(), 1u);
  EXPECT_DOUBLE_EQ(s.bars[0].open, 10);
  EXPECT_DOUBLE_EQ(s.bars[0].high, 11);
}

TEST_F(IngestTest, InvertedRangeIsRejected) {
  const auto p = write("bad.csv", "date,open,high,low,close\n2024-01-02,100,99,101,100\n");
  EXPECT_VOLNET_ERROR(load_ohlc_csv(p), ErrorCode::kPriceInvariantViolation);
}

TEST_F(IngestTest, NonPositivePriceIsRejected) {
  const auto p = write("bad.csv", "date,open,high,low,close\n2024-01-02,0,1,0,1\n");
  EXPECT_VOLNET_ERROR(load_ohlc_csv(p), ErrorCode::kPriceInvariantViolation);
}

TEST_F(IngestTest, MissingLowColumn) {
  const auto p = write("bad.csv", "date,open,high,close\n2024-01-02,1,2,1.5\n");
  EXPECT_VOLNET_ERROR(load_ohlc_csv(p), ErrorCode::kMissingColumn);
}

TEST_F(IngestTest, UnparseableRow) {
  const auto p = write("bad.csv", "date,open,high,low,close\n2024-01-02,1,2,abc,1.5\n");
  EXPECT_VOLNET_ERROR(load_ohlc_csv(p), ErrorCode::kUnparseableRow);
  const auto q = write("bad2.csv", "date,open,high,low,close\n02/01/2024,1,2,0.5,1.5\n");
  EXPECT_VOLNET_ERROR(load_ohlc_csv(q), ErrorCode::kUnparseableRow);
}

TEST_F(IngestTest, DuplicateDate) {
  const auto p = write("dup.csv",
                       "date,open,high,low,close\n2024-01-02,1,2,0.5,1.5\n2024-01-02,1,2,0.5,1.5\n");
  EXPECT_VOLNET_ERROR(load_ohlc_csv(p), ErrorCode::kDuplicateDate);
}

TEST_F(IngestTest, MissingFileIsIoError) {
  EXPECT_VOLNET_ERROR(load_ohlc_csv(dir_ / "nope.csv"), ErrorCode::kIo);
}

TEST(Align, IdenticalDates) {
  const std::vector<OhlcSeries> s{series("A", {"2024-01-02", "2024-01-03"}),
                                  series("B", {"2024-01-02", "2024-01-03"})};
  const OhlcPanel p = align_panel(s);
  EXPECT_EQ(p.rows(), 2u);
  EXPECT_EQ(p.cols(), 2u);
}

TEST(Align, ExtraDateDropped) {
  const std::vector<OhlcSeries> s{series("A", {"2024-01-02", "2024-01-03", "2024-01-04"}),
                                  series("B", {"2024-01-02", "2024-01-04"})};
  const OhlcPanel p = align_panel(s);
  ASSERT_EQ(p.rows(), 2u);
  EXPECT_EQ(p.dates[1].iso(), "2024-01-04");
  EXPECT_EQ(p.assets, (std::vector<std::string>{"A", "B"}));
}

TEST(Align, DisjointDates) {
  const std::vector<OhlcSeries> s{series("A", {"2024-01-02"}), series("B", {"2024-01-03"})};
  EXPECT_VOLNET_ERROR(align_panel(s), ErrorCode::kEmptyIntersection);
}

TEST(Align, IdempotentAndOrderPreserving) {
  const std::vector<OhlcSeries> s{series("Z", {"2024-01-02", "2024-01-03", "2024-01-05"}),
                                  series("A", {"2024-01-03", "2024-01-04", "2024-01-05"})};
  const OhlcPanel p = align_panel(s);
  const std::vector<OhlcSeries> again{p.column(0), p.column(1)};
  const OhlcPanel q = align_panel(again);
  EXPECT_EQ(p.dates, q.dates);
  EXPECT_EQ(q.assets, (std::vector<std::string>{"Z", "A"}));
  EXPECT_LE(p.rows(), 3u);
}

TEST(PanelDir, FixtureDirectory) {
  const OhlcPanel p = load_panel_dir(VOLNET_FIXTURES "/ohlc");
  EXPECT_EQ(p.assets, (std::vector<std::string>{"CL", "ES", "ZN"}));
  // 320 sessions with four distinct dates missing across the files.
  EXPECT_EQ(p.rows(), 316u);
  const OhlcPanel sub = load_panel_dir(VOLNET_FIXTURES "/ohlc", {"ZN", "ES"});
  EXPECT_EQ(sub.assets, (std::vector<std::string>{"ZN", "ES"}));
  EXPECT_EQ(sub.rows(), 317u);
}
