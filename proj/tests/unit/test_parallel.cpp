#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "wgqed/parallel.hpp"

using namespace wgqed;

TEST_CASE("every index runs exactly once") {
  for (std::size_t threads : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, threads);
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("the lowest failing index is rethrown") {
  auto body = [](std::size_t i) {
    if (i == 13 || i == 40) throw std::runtime_error(std::to_string(i));
  };
  for (std::size_t threads : {1, 3}) {
    try {
      parallel_for(64, body, threads);
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "13");
    }
  }
}

TEST_CASE("default thread count is adjustable") {
  const auto saved = default_thread_count();
  CHECK(saved >= 1);
  set_default_thread_count(3);
  CHECK(default_thread_count() == 3);
  set_default_thread_count(saved);
}
