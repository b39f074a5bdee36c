#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "crabot/parallel.hpp"
#include "crabot/random.hpp"

TEST_CASE("every index runs exactly once") {
  for (unsigned workers : {1u, 2u, 7u, 64u}) {
    std::vector<std::atomic<int>> hits(1000);
    crabot::parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  crabot::parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("exceptions reach the caller") {
  CHECK_THROWS_AS(crabot::parallel_for(100, 4,
                                       [](std::size_t i) {
                                         if (i == 37) throw std::runtime_error("boom");
                                       }),
                  std::runtime_error);
}

TEST_CASE("worker count from the environment") {
  ::setenv("CRABOT_WORKERS", "3", 1);
  CHECK(crabot::default_worker_count() == 3);
  CHECK(crabot::resolve_workers(0) == 3);
  CHECK(crabot::resolve_workers(5) == 5);
  ::setenv("CRABOT_WORKERS", "zero", 1);
  CHECK(crabot::default_worker_count() >= 1);
  ::setenv("CRABOT_WORKERS", "-2", 1);
  CHECK(crabot::default_worker_count() >= 1);
  ::unsetenv("CRABOT_WORKERS");
  CHECK(crabot::default_worker_count() >= 1);
}

TEST_CASE("seeded generator draws") {
  crabot::Rng a(42), b(42), c(42, 1), d(42, 2);
  CHECK(a.next() == b.next());
  CHECK(c.next() != d.next());
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    CHECK(x < 7);
    const double u = a.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::vector<int> items = {1, 2, 3, 4, 5, 6};
  a.shuffle(std::span<int>(items));
  std::sort(items.begin(), items.end());
  CHECK(items == std::vector<int>{1, 2, 3, 4, 5, 6});
}
