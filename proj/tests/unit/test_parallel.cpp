#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "wbp/parallel.hpp"

using namespace wbp;

TEST(Parallel, VisitsEveryIndexOnce) {
  for (auto exec : {Execution::serial, Execution::parallel}) {
    std::vector<int> hits(1000, 0);
    for_each_index(exec, hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(for_each_index(Execution::parallel, 64,
                              [](std::size_t i) {
                                if (i == 17) throw std::runtime_error("boom");
                              }),
               std::runtime_error);
}
