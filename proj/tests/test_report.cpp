#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "polyrad/parallel.hpp"
#include "polyrad/report.hpp"

using namespace polyrad;

TEST(Report, FormatNumber) {
    EXPECT_EQ(report::format_number(2.309401076758503), "2.30940107676");
    EXPECT_EQ(report::format_number(0.5), "0.5");
    EXPECT_EQ(report::format_number(1e-20), "1e-20");
    EXPECT_EQ(report::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(report::format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Report, RoundSigIsIdempotent) {
    const double x = report::round_sig(1.0 / 3.0);
    EXPECT_EQ(x, 0.333333333333);
    EXPECT_EQ(report::round_sig(x), x);
}

TEST(Report, NonFiniteNumbersBecomeStrings) {
    EXPECT_TRUE(report::number(std::numeric_limits<double>::infinity()).is_string());
    EXPECT_TRUE(report::number(1.5).is_number_float());
    EXPECT_EQ(report::document().at("schema_version"), report::schema_version);
}

TEST(Parallel, KeepsIndexOrder) {
    const auto out = parallel_map(1000, [](std::size_t i) { return static_cast<double>(i * i); });
    ASSERT_EQ(out.size(), 1000u);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<double>(i * i));
    EXPECT_TRUE(parallel_map(0, [](std::size_t) { return 1; }).empty());
}

TEST(Parallel, RethrowsWorkerException) {
    ::setenv("POLYRAD_THREADS", "3", 1);
    EXPECT_THROW(parallel_map(50,
                              [](std::size_t i) {
                                  if (i == 17) throw std::runtime_error("boom");
                                  return 0;
                              }),
                 std::runtime_error);
    ::unsetenv("POLYRAD_THREADS");
}

TEST(Parallel, ThreadCountFromEnvironment) {
    ::setenv("POLYRAD_THREADS", "5", 1);
    EXPECT_EQ(thread_count(), 5u);
    ::setenv("POLYRAD_THREADS", "zero", 1);
    EXPECT_GE(thread_count(), 1u);
    ::unsetenv("POLYRAD_THREADS");
}
